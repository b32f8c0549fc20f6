#include "relaysec/orderstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "relaysec/errors.hpp"
#include "relaysec/numeric.hpp"

namespace relaysec {
namespace {

void check_finite(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("gain argument must be finite");
  }
}

void check_rank(std::size_t rank, std::size_t n, const char* what) {
  if (n < 1 || rank < 1 || rank > n) {
    throw ParameterError(std::string(what) + " must satisfy 1 <= " + what + " <= n (got " +
                         std::to_string(rank) + ", n = " + std::to_string(n) + ")");
  }
}

// C(n,i) F^i (1-F)^(n-i) with F = 1 - e^{-2x}, x > 0.
double rank_term(std::size_t n, std::size_t i, double x) {
  const double log_f = std::log(-std::expm1(-2.0 * x));
  const double log_s = -2.0 * x;
  return std::exp(log_binomial(n, i) + static_cast<double>(i) * log_f +
                  static_cast<double>(n - i) * log_s);
}

}  // namespace

GainDistribution::GainDistribution(std::size_t n_, std::size_t j_or_k_, GainKind kind_)
    : n(n_), j_or_k(j_or_k_), kind(kind_) {
  check_rank(j_or_k, n, "j_or_k");
}

double GainDistribution::cdf(double x) const {
  switch (kind) {
    case GainKind::MinPair:
      return min_pair_cdf(x);
    case GainKind::KthLargest:
      return kth_largest_cdf(x, j_or_k, n);
    case GainKind::TopKRandom:
      return topk_random_cdf(x, j_or_k, n);
  }
  return 0.0;
}

double GainDistribution::pdf(double x) const {
  switch (kind) {
    case GainKind::MinPair:
      return min_pair_pdf(x);
    case GainKind::KthLargest:
      return kth_largest_pdf(x, j_or_k, n);
    case GainKind::TopKRandom:
      return topk_random_pdf(x, j_or_k, n);
  }
  return 0.0;
}

double min_pair_cdf(double x) {
  check_finite(x);
  if (x <= 0.0) {
    return 0.0;
  }
  return -std::expm1(-2.0 * x);
}

double min_pair_pdf(double x) {
  check_finite(x);
  if (x < 0.0) {
    return 0.0;
  }
  return 2.0 * std::exp(-2.0 * x);
}

double kth_largest_cdf(double x, std::size_t j, std::size_t n) {
  check_rank(j, n, "j");
  check_finite(x);
  if (x <= 0.0) {
    return 0.0;
  }
  CompensatedSum sum;
  for (std::size_t i = n - j + 1; i <= n; ++i) {
    sum += rank_term(n, i, x);
  }
  return std::clamp(sum.value(), 0.0, 1.0);
}

double kth_largest_pdf(double x, std::size_t j, std::size_t n) {
  check_rank(j, n, "j");
  check_finite(x);
  if (x < 0.0) {
    return 0.0;
  }
  const auto nd = static_cast<double>(n);
  const auto jd = static_cast<double>(j);
  const double log_coef = std::lgamma(nd + 1.0) - std::lgamma(jd) - std::lgamma(nd - jd + 1.0);
  double log_f_part = 0.0;
  if (j < n) {
    if (x == 0.0) {
      return 0.0;
    }
    log_f_part = (nd - jd) * std::log(-std::expm1(-2.0 * x));
  }
  return std::exp(log_coef + log_f_part - 2.0 * x * (jd - 1.0) + std::log(2.0) - 2.0 * x);
}

double kth_smallest_cdf(double x, std::size_t i, std::size_t n) {
  check_rank(i, n, "i");
  check_finite(x);
  if (x <= 0.0) {
    return 0.0;
  }
  const double f = -std::expm1(-2.0 * x);
  CompensatedSum below;
  for (std::size_t l = 0; l < i; ++l) {
    below += binomial_pmf(n, l, f);
  }
  return std::clamp(1.0 - below.value(), 0.0, 1.0);
}

// Collapsing (1/k) sum_j sum_{i >= n-j+1} gives weight (i - n + k)/k to each rank term.
double topk_random_cdf(double x, std::size_t k, std::size_t n) {
  check_rank(k, n, "k");
  check_finite(x);
  if (x <= 0.0) {
    return 0.0;
  }
  CompensatedSum sum;
  for (std::size_t i = n - k + 1; i <= n; ++i) {
    sum += static_cast<double>(i + k - n) * rank_term(n, i, x);
  }
  return std::clamp(sum.value() / static_cast<double>(k), 0.0, 1.0);
}

double topk_random_pdf(double x, std::size_t k, std::size_t n) {
  check_rank(k, n, "k");
  CompensatedSum sum;
  for (std::size_t j = 1; j <= k; ++j) {
    sum += kth_largest_pdf(x, j, n);
  }
  return sum.value() / static_cast<double>(k);
}

double mixture_cdf(std::span<const CdfFn> components, double x) {
  if (components.empty()) {
    throw ParameterError("mixture needs at least one component");
  }
  CompensatedSum sum;
  for (const auto& c : components) {
    sum += c(x);
  }
  return sum.value() / static_cast<double>(components.size());
}

double sample_min_pair(Rng& rng) {
  const double a = rng.exponential();
  const double b = rng.exponential();
  return std::min(a, b);
}

double sample_topk_random(std::size_t n, std::size_t k, Rng& rng) {
  check_rank(k, n, "k");
  std::vector<double> gains(n);
  for (auto& g : gains) {
    g = sample_min_pair(rng);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return gains[a] > gains[b] || (gains[a] == gains[b] && a < b);
                    });
  return gains[order[rng.index(k)]];
}

}  // namespace relaysec
