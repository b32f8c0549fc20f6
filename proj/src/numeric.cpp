#include "relaysec/numeric.hpp"

#include <cmath>

namespace relaysec {

void CompensatedSum::add(double term) noexcept {
  const double t = sum_ + term;
  if (std::fabs(sum_) >= std::fabs(term)) {
    compensation_ += (sum_ - t) + term;
  } else {
    compensation_ += (term - t) + sum_;
  }
  sum_ = t;
}

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) {
    return -INFINITY;
  }
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double binomial_pmf(std::size_t n, std::size_t k, double p) {
  if (k > n) {
    return 0.0;
  }
  if (p <= 0.0) {
    return k == 0 ? 1.0 : 0.0;
  }
  if (p >= 1.0) {
    return k == n ? 1.0 : 0.0;
  }
  const double log_term = log_binomial(n, k) + static_cast<double>(k) * std::log(p) +
                          static_cast<double>(n - k) * std::log1p(-p);
  return std::exp(log_term);
}

double binomial_upper_tail(std::size_t n, std::size_t from, double p) {
  CompensatedSum sum;
  for (std::size_t i = from; i <= n; ++i) {
    sum += binomial_pmf(n, i, p);
  }
  return sum.value();
}

}  // namespace relaysec
