#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relaysec/bounds_equal.hpp"
#include "relaysec/bounds_general.hpp"
#include "relaysec/model.hpp"

namespace relaysec {

/// Reliability and secrecy targets used by the tau window and max-m evaluations.
struct Requirements {
  double eps_t = 0.19;
  double eps_s = 0.19;
  bool operator==(const Requirements&) const = default;
};

/// Closed-form results for one scenario. A quantity that could not be evaluated
/// for parameter reasons is left empty and the reason is appended to `issues`.
struct BoundReport {
  ProtocolParams params;
  Requirements requirements;
  std::optional<double> bound_t;
  std::optional<SecrecyBound> bound_s;
  TauWindow window;
  std::optional<EavesdropperTolerance> max_m;
  /// Pre-relaxation transmission bound (distance-dependent case) or the
  /// jammer-averaged transmission bound (equal path loss).
  std::optional<double> bound_t_diagnostic;
  std::optional<double> bound_s_diagnostic;
  std::vector<std::string> issues;

  [[nodiscard]] bool feasible() const noexcept { return window.feasible; }
};

/// Dispatches on params.path_case. NumericError from the geometry quadrature propagates.
BoundReport evaluate_bounds(const ProtocolParams& params, const Requirements& req,
                            const RegionModel& region = {});

}  // namespace relaysec
