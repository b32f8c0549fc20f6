#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relaysec/rng.hpp"

namespace relaysec {

enum class PathLossCase { EqualPathLoss, DistanceDependent };

/// Scenario knobs shared by the simulator and the bound evaluators.
struct ProtocolParams {
  std::size_t n = 5;
  std::size_t m = 1;
  std::size_t k = 1;
  double r = std::numeric_limits<double>::infinity();
  double tau = 0.1;
  double gamma_r = 1.0;
  double gamma_e = std::numbers::e - 1.0;
  double alpha = 2.0;
  double d0 = 0.05;
  double es = 1.0;
  double n0 = 1e-6;
  double delta = 0.05;
  PathLossCase path_case = PathLossCase::EqualPathLoss;

  /// Throws ParameterError on the first violated invariant.
  void validate() const;

  /// Selection radius actually used: infinite in the equal-path-loss case.
  [[nodiscard]] double effective_r() const noexcept {
    return path_case == PathLossCase::EqualPathLoss ? std::numeric_limits<double>::infinity() : r;
  }

  bool operator==(const ProtocolParams&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b) noexcept;

inline constexpr Point kSourcePos{-0.5, 0.0};
inline constexpr Point kDestinationPos{0.5, 0.0};

struct NodeId {
  enum class Role : std::uint8_t { Source, Destination, Relay, Eavesdropper };
  Role role = Role::Source;
  std::size_t index = 0;

  static NodeId source() { return {Role::Source, 0}; }
  static NodeId destination() { return {Role::Destination, 0}; }
  static NodeId relay(std::size_t i) { return {Role::Relay, i}; }
  static NodeId eaves(std::size_t i) { return {Role::Eavesdropper, i}; }

  bool operator==(const NodeId&) const = default;
};

/// max(d, delta)^-alpha
double path_loss(double d, double alpha, double delta);

/// (gain, distance) of one interfering transmitter.
using Interferer = std::pair<double, double>;

/// Es g L(d) / (sum_j Es g_j L(d_j) + N0/2). Throws ConfigurationError when the denominator is zero.
double sinr(double signal_gain, double signal_dist, std::span<const Interferer> jammers,
            const ProtocolParams& params);

/**
 * @brief One realization of node placement and fading.
 *
 * Gains are reciprocal and held for both hops. Each pair's |h|^2 is a pure
 * function of the instance key and the unordered pair, so gains are only
 * computed for pairs that are queried and the values do not depend on the
 * order of queries.
 */
class NetworkInstance {
 public:
  NetworkInstance(PathLossCase path_case, std::size_t n, std::size_t m, std::uint64_t gain_key);

  [[nodiscard]] PathLossCase path_case() const noexcept { return path_case_; }
  [[nodiscard]] std::size_t relay_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t eaves_count() const noexcept { return m_; }

  /// Empty in the equal-path-loss case.
  std::vector<Point> relay_positions;
  std::vector<Point> eaves_positions;

  [[nodiscard]] Point position(NodeId node) const;

  /// Distance between nodes; exactly 1 for distinct nodes in the equal-path-loss case.
  [[nodiscard]] double dist(NodeId a, NodeId b) const;

  /// |h_{a,b}|^2, unit-mean exponential.
  [[nodiscard]] double gain(NodeId a, NodeId b) const;

  /// Pins the gain of one (unordered) pair, e.g. to build a scenario by hand.
  void set_gain(NodeId a, NodeId b, double value);

 private:
  [[nodiscard]] std::uint64_t ordinal(NodeId node) const;
  [[nodiscard]] std::uint64_t pair_key(NodeId a, NodeId b) const;

  std::unordered_map<std::uint64_t, double> pinned_;

  PathLossCase path_case_;
  std::size_t n_;
  std::size_t m_;
  std::uint64_t gain_key_;
};

NetworkInstance realize_network(const ProtocolParams& params, Rng& rng);

}  // namespace relaysec
