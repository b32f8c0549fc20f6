#pragma once

#include <cstddef>
#include <optional>

#include "relaysec/bounds_equal.hpp"
#include "relaysec/model.hpp"

namespace relaysec {

/// Clamped path-loss integrals over the unit square [-0.5, 0.5]^2.
struct GeometryIntegrals {
  double phi1 = 0.0;  ///< centered at (0, 0)
  double phi2 = 0.0;  ///< centered at (0.5, 0)
  double psi = 0.0;   ///< centered at (0.5, 0.5)
  double alpha = 2.0;
  double delta = 0.05;
  /// Panels per angular piece at which the values were accepted.
  int resolution = 0;
};

inline constexpr int kDefaultQuadratureResolution = 4;
inline constexpr int kMaxQuadratureResolution = 1 << 14;

/// integral over the square of max(|p - center|, delta)^-alpha, with `panels`
/// Gauss-Legendre panels per smooth angular piece.
double clamped_square_integral(Point center, double alpha, double delta, int panels);

/**
 * @brief phi1, phi2 and psi, refined by doubling from `resolution` until the
 * relative change of every value is below 1e-10.
 *
 * Results are memoized per (alpha, delta, resolution). Throws NumericError if
 * the maximum resolution is reached first.
 */
GeometryIntegrals geometry_integrals(double alpha, double delta,
                                     int resolution = kDefaultQuadratureResolution);

/// How the probability that a relay lies in the selection disc is obtained.
struct RegionModel {
  enum class Kind { PiR2, Override, ExactOverlap };
  Kind kind = Kind::PiR2;
  double value = 0.0;  ///< used by Override

  static RegionModel pi_r2() { return {}; }
  static RegionModel override_with(double p) { return {Kind::Override, p}; }
  static RegionModel exact_overlap() { return {Kind::ExactOverlap, 0.0}; }

  bool operator==(const RegionModel&) const = default;
};

/// Area of the disc of radius r at the origin intersected with the unit square.
double disc_square_overlap(double r);

/// pi r^2 (ParameterError if it exceeds 1), the override value, or the exact overlap area.
double region_probability(double r, const RegionModel& model = {});

double upsilon(std::size_t n, double gamma_r, double tau, double r, double alpha);

struct NuCoeffs {
  double nu1 = 0.0;
  double nu2 = 0.0;
};

NuCoeffs nu_coeffs(std::size_t n, std::size_t k, double r, const RegionModel& model = {});

double transmission_bound_general(std::size_t n, std::size_t k, double r, double gamma_r,
                                  double tau, double alpha, double delta,
                                  const RegionModel& model = {});

/// Form before the final relaxation, keeping the per-hop geometric sums over ranks.
double transmission_bound_general_tight(std::size_t n, std::size_t k, double r, double gamma_r,
                                        double tau, double alpha, double delta,
                                        const RegionModel& model = {});

/// pi d0^2 + (1/(1 + gamma_e psi d0^alpha))^((n-1)(1-e^-tau)) (1 - pi d0^2)
double capture_factor_general(std::size_t n, double gamma_e, double tau, double d0, double alpha,
                              double delta);

SecrecyBound secrecy_bound_general(std::size_t n, std::size_t m, double gamma_e, double tau,
                                   double d0, double alpha, double delta);

/// Smallest admissible value of Upsilon^(phi1+phi2) for a reliability target, via the
/// quadratic in that power. Requires nu2 > 0.
double quadratic_inversion(const NuCoeffs& nu, std::size_t k, double eps_t);

/// Same target when nu2 = 0. Requires nu1 > 0.
double linear_inversion(const NuCoeffs& nu, std::size_t k, double eps_t);

/// Dispatches to the quadratic or linear inversion; nullopt when nu1 = nu2 = 0.
std::optional<double> required_upsilon_power(const NuCoeffs& nu, std::size_t k, double eps_t);

std::optional<double> tau_max_general(std::size_t n, std::size_t k, double r, double gamma_r,
                                      double alpha, double delta, double eps_t,
                                      const RegionModel& model = {});

std::optional<double> tau_min_general(std::size_t n, std::size_t m, double gamma_e, double d0,
                                      double alpha, double delta, double eps_s);

TauWindow tau_window_general(std::size_t n, std::size_t k, std::size_t m, double r,
                             double gamma_r, double gamma_e, double d0, double alpha,
                             double delta, double eps_t, double eps_s,
                             const RegionModel& model = {});

std::optional<EavesdropperTolerance> max_eaves_general(std::size_t n, std::size_t k, double r,
                                                       double gamma_r, double gamma_e, double d0,
                                                       double alpha, double delta, double eps_t,
                                                       double eps_s,
                                                       const RegionModel& model = {});

}  // namespace relaysec
