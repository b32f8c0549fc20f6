#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relaysec/bound_report.hpp"
#include "relaysec/model.hpp"

namespace relaysec {

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95);

/// sqrt(p (1 - p) / trials)
double standard_error(double p, std::uint64_t trials);

struct LoadBalance {
  double jain = 0.0;
  double entropy = 0.0;
  /// False for an all-zero histogram; both metrics are then NaN.
  bool defined = false;
};

/// Jain index and normalized entropy over all bins of the histogram.
LoadBalance load_balance(std::span<const std::uint64_t> histogram);

struct EstimateOptions {
  /// Number of worker threads; 0 uses the hardware concurrency.
  unsigned workers = 1;
  /// Consecutive trials sharing one network realization (1 = independent networks).
  std::uint64_t coherence = 1;
};

struct EstimateReport {
  ProtocolParams params;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t t_outages = 0;
  std::uint64_t s_outages = 0;
  std::uint64_t no_candidate = 0;
  double p_t_hat = 0.0;
  double p_s_hat = 0.0;
  Interval ci_t;
  Interval ci_s;
  std::vector<std::uint64_t> selection_histogram;
  double jain_index = 0.0;
  double norm_entropy = 0.0;
  double no_candidate_rate = 0.0;
  /// Mean jammer-set sizes over trials with a selected relay.
  double mean_jam1 = 0.0;
  double mean_jam2 = 0.0;
};

/**
 * Runs `trials` protocol executions. Trial i draws its relay pick (and, with
 * coherence 1, its network) from the stream derive_stream(seed, i, 0); with
 * coherence C > 1 block b = i / C shares the network realized from
 * derive_stream(seed, b, 1). The result depends only on (params, trials, seed,
 * coherence).
 */
EstimateReport estimate(const ProtocolParams& params, std::uint64_t trials, std::uint64_t seed,
                        const EstimateOptions& options = {});

struct MetricComparison {
  double estimate = 0.0;
  double se = 0.0;
  std::optional<double> bound;
  /// bound - estimate
  std::optional<double> slack;
  /// estimate <= bound + 3 se; true when no bound is available.
  bool pass = true;
};

struct ComparisonRow {
  MetricComparison transmission;
  MetricComparison secrecy;
  [[nodiscard]] bool pass() const noexcept { return transmission.pass && secrecy.pass; }
};

MetricComparison compare_metric(double estimate, double se, std::optional<double> bound);

/// Throws ParameterError when the two reports were produced for different parameters.
ComparisonRow compare(const EstimateReport& estimates, const BoundReport& bounds);

}  // namespace relaysec
