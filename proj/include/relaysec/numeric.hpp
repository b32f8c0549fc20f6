#pragma once

#include <cstddef>

namespace relaysec {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double term) noexcept;
  CompensatedSum& operator+=(double term) noexcept {
    add(term);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// log C(n, k), evaluated through lgamma so that n in the thousands does not overflow.
double log_binomial(std::size_t n, std::size_t k);

/// C(n, k) p^k (1-p)^(n-k) computed in log space; exact 0/1 handling at p in {0, 1}.
double binomial_pmf(std::size_t n, std::size_t k, double p);

/// P(X >= from) for X ~ Binomial(n, p).
double binomial_upper_tail(std::size_t n, std::size_t from, double p);

}  // namespace relaysec
