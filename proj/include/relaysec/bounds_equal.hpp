#pragma once

#include <cstddef>
#include <optional>

namespace relaysec {

/// Raw 2x - x^2 value of a secrecy bound together with its linear term x = m * (per-eavesdropper bound).
struct SecrecyBound {
  double raw = 0.0;
  double linear = 0.0;
  /// True when the linear term exceeds 1, where 2x - x^2 stops being a probability bound.
  bool saturated = false;

  /// Bound usable as a probability: 1 when saturated, the raw value otherwise.
  [[nodiscard]] double effective() const noexcept { return saturated ? 1.0 : raw; }
};

struct TauWindow {
  std::optional<double> tau_min;
  std::optional<double> tau_max;
  bool feasible = false;
};

/// Largest tolerable eavesdropper count. bound may be +inf (unbounded).
struct EavesdropperTolerance {
  double bound = 0.0;
  /// floor(bound), 0 when bound < 1.
  double count = 0.0;
};

double psi(std::size_t n, double gamma_r, double tau);

/// Q of the transmission bound, by direct double summation over ranks.
double transmission_q_equal(std::size_t n, std::size_t k, double gamma_r, double tau);

/// 2Q - Q^2
double transmission_bound_equal(std::size_t n, std::size_t k, double gamma_r, double tau);

/// B = (1/(1+gamma_e))^((n-1)(1-e^-tau))
double jamming_factor_equal(std::size_t n, double gamma_e, double tau);

SecrecyBound secrecy_bound_equal(std::size_t n, std::size_t m, double gamma_e, double tau);

/// Infeasible -> nullopt, unbounded -> +inf. Requires n >= 2 and eps_t in (0, 1].
std::optional<double> tau_max_equal(std::size_t n, std::size_t k, double gamma_r, double eps_t);

/// Infeasible -> nullopt; 0 when no jamming is needed. Requires n >= 2 and eps_s in (0, 1].
std::optional<double> tau_min_equal(std::size_t n, std::size_t m, double gamma_e, double eps_s);

TauWindow tau_window_equal(std::size_t n, std::size_t k, std::size_t m, double gamma_r,
                           double gamma_e, double eps_t, double eps_s);

std::optional<EavesdropperTolerance> max_eaves_equal(std::size_t n, std::size_t k, double gamma_r,
                                                     double gamma_e, double eps_t, double eps_s);

// Diagnostics that keep the jammer count random instead of replacing it by its mean.

/// Largest m satisfying the secrecy bound at a given tau, with the exact jammer exponent.
EavesdropperTolerance max_eaves_equal_at_tau(std::size_t n, double gamma_e, double tau,
                                             double eps_s);

/// Transmission bound with F_H averaged over |R| ~ Binomial(n-1, 1-e^-tau).
double transmission_bound_equal_averaged(std::size_t n, std::size_t k, double gamma_r, double tau);

/// Secrecy bound with (1/(1+gamma_e))^|R| averaged over the same law; linear term capped at 1.
double secrecy_bound_equal_averaged(std::size_t n, std::size_t m, double gamma_e, double tau);

/// Shared by both path-loss cases: 1 - sqrt(1 - eps) without cancellation.
double secrecy_budget(double eps_s);

}  // namespace relaysec
