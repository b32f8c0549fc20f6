#include "relaysec/bounds_equal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relaysec/errors.hpp"
#include "relaysec/numeric.hpp"
#include "relaysec/orderstats.hpp"

namespace relaysec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rank(std::size_t k, std::size_t n) {
  if (n < 1 || k < 1 || k > n) {
    throw ParameterError("k must satisfy 1 <= k <= n");
  }
}

void check_eps(double eps, const char* name) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw ParameterError(std::string(name) + " must lie in (0, 1]");
  }
}

void check_tau(double tau) {
  if (!(std::isfinite(tau) && tau >= 0.0)) {
    throw ParameterError("tau must be finite and nonnegative");
  }
}

void check_n_for_window(std::size_t n) {
  if (n < 2) {
    throw ParameterError("the tau window needs n >= 2");
  }
}

// [C(k, floor(k/2)) (1 + k sqrt(1-eps))]^(1/k) - 1
double reliability_bracket(std::size_t k, double eps_t) {
  const auto kd = static_cast<double>(k);
  const double log_inner = log_binomial(k, k / 2) + std::log1p(kd * std::sqrt(1.0 - eps_t));
  return std::expm1(log_inner / kd);
}

double interference_exponent(std::size_t n, double gamma_r, double tau) {
  return gamma_r * static_cast<double>(n - 1) * (-std::expm1(-tau)) * tau;
}

}  // namespace

double secrecy_budget(double eps_s) { return eps_s / (1.0 + std::sqrt(1.0 - eps_s)); }

double psi(std::size_t n, double gamma_r, double tau) {
  if (n < 1) {
    throw ParameterError("n must be at least 1");
  }
  check_tau(tau);
  return std::exp(-2.0 * interference_exponent(n, gamma_r, tau));
}

double transmission_q_equal(std::size_t n, std::size_t k, double gamma_r, double tau) {
  check_rank(k, n);
  check_tau(tau);
  const double x = 2.0 * interference_exponent(n, gamma_r, tau);
  if (x <= 0.0) {
    return 0.0;
  }
  const double log_fail = std::log(-std::expm1(-x));  // log(1 - Psi)
  const double log_keep = -x;                         // log(Psi)
  CompensatedSum q;
  for (std::size_t j = 1; j <= k; ++j) {
    for (std::size_t i = n - j + 1; i <= n; ++i) {
      q += std::exp(log_binomial(n, i) + static_cast<double>(i) * log_fail +
                    static_cast<double>(n - i) * log_keep);
    }
  }
  return std::clamp(q.value() / static_cast<double>(k), 0.0, 1.0);
}

double transmission_bound_equal(std::size_t n, std::size_t k, double gamma_r, double tau) {
  const double q = transmission_q_equal(n, k, gamma_r, tau);
  return 2.0 * q - q * q;
}

double jamming_factor_equal(std::size_t n, double gamma_e, double tau) {
  if (n < 1) {
    throw ParameterError("n must be at least 1");
  }
  check_tau(tau);
  if (!(gamma_e > 0.0)) {
    throw ParameterError("gamma_e must be positive");
  }
  const double jammers = static_cast<double>(n - 1) * (-std::expm1(-tau));
  return std::exp(-jammers * std::log1p(gamma_e));
}

SecrecyBound secrecy_bound_equal(std::size_t n, std::size_t m, double gamma_e, double tau) {
  const double x = static_cast<double>(m) * jamming_factor_equal(n, gamma_e, tau);
  return {2.0 * x - x * x, x, x > 1.0};
}

std::optional<double> tau_max_equal(std::size_t n, std::size_t k, double gamma_r, double eps_t) {
  check_n_for_window(n);
  check_rank(k, n);
  check_eps(eps_t, "eps_t");
  const double b = reliability_bracket(k, eps_t);
  if (b <= 0.0) {
    return kInf;
  }
  if (b >= 1.0) {
    return std::nullopt;
  }
  return std::sqrt(-std::log(b) / (2.0 * gamma_r * static_cast<double>(n - 1)));
}

std::optional<double> tau_min_equal(std::size_t n, std::size_t m, double gamma_e, double eps_s) {
  check_n_for_window(n);
  check_eps(eps_s, "eps_s");
  if (m == 0) {
    return 0.0;
  }
  const double ratio = secrecy_budget(eps_s) / static_cast<double>(m);
  if (ratio >= 1.0) {
    return 0.0;
  }
  const double inner =
      1.0 + std::log(ratio) / (static_cast<double>(n - 1) * std::log1p(gamma_e));
  if (inner <= 0.0) {
    return std::nullopt;
  }
  return -std::log(inner);
}

TauWindow tau_window_equal(std::size_t n, std::size_t k, std::size_t m, double gamma_r,
                           double gamma_e, double eps_t, double eps_s) {
  TauWindow w;
  w.tau_min = tau_min_equal(n, m, gamma_e, eps_s);
  w.tau_max = tau_max_equal(n, k, gamma_r, eps_t);
  w.feasible = w.tau_min && w.tau_max && *w.tau_min <= *w.tau_max;
  return w;
}

std::optional<EavesdropperTolerance> max_eaves_equal(std::size_t n, std::size_t k, double gamma_r,
                                                     double gamma_e, double eps_t, double eps_s) {
  check_n_for_window(n);
  check_rank(k, n);
  check_eps(eps_t, "eps_t");
  check_eps(eps_s, "eps_s");
  const double b = reliability_bracket(k, eps_t);
  if (b >= 1.0) {
    return std::nullopt;
  }
  EavesdropperTolerance out;
  if (b <= 0.0) {
    out.bound = kInf;
  } else {
    const double expo =
        std::sqrt(-static_cast<double>(n - 1) * std::log(b) / (2.0 * gamma_r));
    out.bound = secrecy_budget(eps_s) * std::exp(expo * std::log1p(gamma_e));
  }
  out.count = std::floor(out.bound);
  return out;
}

EavesdropperTolerance max_eaves_equal_at_tau(std::size_t n, double gamma_e, double tau,
                                             double eps_s) {
  check_eps(eps_s, "eps_s");
  EavesdropperTolerance out;
  out.bound = secrecy_budget(eps_s) / jamming_factor_equal(n, gamma_e, tau);
  out.count = std::floor(out.bound);
  return out;
}

double transmission_bound_equal_averaged(std::size_t n, std::size_t k, double gamma_r,
                                         double tau) {
  check_rank(k, n);
  check_tau(tau);
  const double p = -std::expm1(-tau);
  CompensatedSum q;
  for (std::size_t x = 0; x < n; ++x) {
    q += binomial_pmf(n - 1, x, p) * topk_random_cdf(gamma_r * static_cast<double>(x) * tau, k, n);
  }
  const double v = std::clamp(q.value(), 0.0, 1.0);
  return 2.0 * v - v * v;
}

double secrecy_bound_equal_averaged(std::size_t n, std::size_t m, double gamma_e, double tau) {
  if (n < 1) {
    throw ParameterError("n must be at least 1");
  }
  check_tau(tau);
  const double p = -std::expm1(-tau);
  // E[c^X] for X ~ Binomial(n-1, p) is (1 - p + p c)^(n-1).
  const double c = 1.0 / (1.0 + gamma_e);
  const double per_eaves = std::pow(1.0 - p + p * c, static_cast<double>(n - 1));
  const double x = std::min(1.0, static_cast<double>(m) * per_eaves);
  return 2.0 * x - x * x;
}

}  // namespace relaysec
