#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "relaysec/rng.hpp"

namespace relaysec {

enum class GainKind { MinPair, KthLargest, TopKRandom };

/**
 * @brief Law of a relay's bottleneck gain min(|h_SR|^2, |h_DR|^2) and of the
 * rank-based selections built on it.
 *
 * For MinPair the rank field is ignored (but must still lie in [1, n]).
 */
struct GainDistribution {
  std::size_t n = 1;
  std::size_t j_or_k = 1;
  GainKind kind = GainKind::MinPair;

  GainDistribution() = default;
  GainDistribution(std::size_t n_, std::size_t j_or_k_, GainKind kind_);

  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double pdf(double x) const;
};

double min_pair_cdf(double x);
double min_pair_pdf(double x);

/// CDF of the j-th largest of n i.i.d. min-pair gains.
double kth_largest_cdf(double x, std::size_t j, std::size_t n);
/// Density of the j-th largest; at x = 0 the right-hand limit is returned.
double kth_largest_pdf(double x, std::size_t j, std::size_t n);

/// CDF of the i-th smallest, evaluated as the complement of the lower binomial tail.
double kth_smallest_cdf(double x, std::size_t i, std::size_t n);

/// Gain of a relay drawn uniformly from the k largest of n.
double topk_random_cdf(double x, std::size_t k, std::size_t n);
double topk_random_pdf(double x, std::size_t k, std::size_t n);

using CdfFn = std::function<double(double)>;

/// Law of a variable picked uniformly from a list of independent variables.
double mixture_cdf(std::span<const CdfFn> components, double x);

double sample_min_pair(Rng& rng);

/// Draws n min-pair gains, ranks them (ties by draw index) and returns one of the top k uniformly.
double sample_topk_random(std::size_t n, std::size_t k, Rng& rng);

}  // namespace relaysec
