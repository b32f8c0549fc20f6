#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relaysec/bound_report.hpp"
#include "relaysec/bounds_general.hpp"
#include "relaysec/model.hpp"
#include "relaysec/montecarlo.hpp"

namespace relaysec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct SweepSpec {
  enum class Scale { Linear, Log };
  std::string parameter;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
  Scale scale = Scale::Linear;
  /// Run Monte Carlo at every grid point in addition to the bounds.
  bool estimates = true;

  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  ProtocolParams params;
  Requirements requirements;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::uint64_t coherence = 1;
  RegionModel region;
  std::optional<SweepSpec> sweep;
  std::string out;

  bool operator==(const RunConfig&) const = default;
};

/// Parameters a sweep may vary.
const std::vector<std::string>& sweep_parameters();

/// Parses the JSON config format; unknown keys and bad values throw ConfigurationError.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Compact single-line JSON that parse_config_text maps back to an equal RunConfig.
std::string config_to_text(const RunConfig& config);

/// Grid values of a sweep, rounded (and deduplicated) for integer parameters.
std::vector<double> sweep_values(const SweepSpec& sweep);

/// Copy of `base` with one sweep parameter replaced.
ProtocolParams with_parameter(const ProtocolParams& base, const std::string& name, double value);

const std::string& csv_header();

/// One CSV line (without newline). Either report may be absent; `estimate_error`
/// marks estimate cells as failed.
std::string csv_row(const ProtocolParams& params, std::optional<std::uint64_t> trials,
                    std::optional<std::uint64_t> seed, const EstimateReport* estimate,
                    const BoundReport* bounds, bool estimate_error = false);

/// Entry point of the relaysec tool; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace relaysec::cli
