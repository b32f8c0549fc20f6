#include "relaysec/bounds_general.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "relaysec/errors.hpp"
#include "relaysec/numeric.hpp"

namespace relaysec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRefineTolerance = 1e-10;

// integral_0^R max(rho, delta)^-alpha rho d rho
double radial_integral(double R, double alpha, double delta) {
  if (R <= 0.0) {
    return 0.0;
  }
  if (R <= delta) {
    return R * R / (2.0 * std::pow(delta, alpha));
  }
  const double inner = std::pow(delta, 2.0 - alpha) / 2.0;
  if (alpha == 2.0) {
    return inner + std::log(R / delta);
  }
  return inner + (std::pow(R, 2.0 - alpha) - std::pow(delta, 2.0 - alpha)) / (2.0 - alpha);
}

// Distance from `c` to the square boundary along direction theta.
double exit_distance(Point c, double theta) {
  const double dx = std::cos(theta);
  const double dy = std::sin(theta);
  double t = kInf;
  if (dx > 0.0) {
    t = std::min(t, (0.5 - c.x) / dx);
  } else if (dx < 0.0) {
    t = std::min(t, (-0.5 - c.x) / dx);
  }
  if (dy > 0.0) {
    t = std::min(t, (0.5 - c.y) / dy);
  } else if (dy < 0.0) {
    t = std::min(t, (-0.5 - c.y) / dy);
  }
  return std::max(t, 0.0);
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

// Angles where the angular integrand is not smooth: corner directions, axis
// directions (walls through the center), and where the exit distance crosses delta.
std::vector<double> angular_breakpoints(Point c, double delta) {
  std::vector<double> pts{0.0, 0.5 * kPi, kPi, 1.5 * kPi};
  for (double sx : {-0.5, 0.5}) {
    for (double sy : {-0.5, 0.5}) {
      if (sx != c.x || sy != c.y) {
        pts.push_back(wrap_angle(std::atan2(sy - c.y, sx - c.x)));
      }
    }
  }
  const double normals[4] = {0.0, 0.5 * kPi, kPi, 1.5 * kPi};
  const double offsets[4] = {0.5 - c.x, 0.5 - c.y, c.x + 0.5, c.y + 0.5};
  for (int w = 0; w < 4; ++w) {
    if (offsets[w] > 0.0 && offsets[w] < delta) {
      const double spread = std::acos(offsets[w] / delta);
      pts.push_back(wrap_angle(normals[w] + spread));
      pts.push_back(wrap_angle(normals[w] - spread));
    }
  }
  pts.push_back(kTwoPi);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (out.empty() || p - out.back() > 1e-14) {
      out.push_back(p);
    }
  }
  return out;
}

using GeometryKey = std::tuple<double, double, int>;

std::shared_mutex& cache_mutex() {
  static std::shared_mutex mtx;
  return mtx;
}

std::map<GeometryKey, GeometryIntegrals>& cache() {
  static std::map<GeometryKey, GeometryIntegrals> store;
  return store;
}

bool converged(double prev, double next) {
  return std::fabs(next - prev) <= kRefineTolerance * std::fabs(next);
}

void check_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ParameterError(std::string(name) + " must be positive and finite");
  }
}

void check_geometry(double alpha, double delta) {
  if (!(std::isfinite(alpha) && alpha >= 2.0)) {
    throw ParameterError("alpha must be at least 2");
  }
  check_positive(delta, "delta");
}

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

void check_radius(double r) {
  if (!(std::isfinite(r) && r >= 0.0)) {
    throw ParameterError("r must be finite and nonnegative in the distance-dependent case");
  }
}

double capture_area(double d0) {
  if (!(std::isfinite(d0) && d0 >= 0.0)) {
    throw ParameterError("d0 must be finite and nonnegative");
  }
  const double area = kPi * d0 * d0;
  if (area >= 1.0) {
    throw ParameterError("pi d0^2 must be below 1");
  }
  return area;
}

struct TailMasses {
  double lower = 0.0;  // P(1 <= L <= k)
  double upper = 0.0;  // P(k < L <= n)
};

TailMasses region_tails(std::size_t n, std::size_t k, double p) {
  CompensatedSum lower;
  CompensatedSum upper;
  for (std::size_t l = 1; l <= n; ++l) {
    const double w = binomial_pmf(n, l, p);
    if (l <= k) {
      lower += w;
    } else {
      upper += w;
    }
  }
  return {lower.value(), upper.value()};
}

// gamma_r (n-1) (phi1+phi2) (0.5+r)^alpha; tau (1 - e^-tau) times this is -log Upsilon^(phi1+phi2).
double reliability_scale(std::size_t n, double gamma_r, double r, const GeometryIntegrals& g) {
  return gamma_r * static_cast<double>(n - 1) * (g.phi1 + g.phi2) * std::pow(0.5 + r, g.alpha);
}

}  // namespace

double clamped_square_integral(Point center, double alpha, double delta, int panels) {
  check_geometry(alpha, delta);
  if (panels < 1) {
    throw ParameterError("panel count must be positive");
  }
  const auto breaks = angular_breakpoints(center, delta);
  auto integrand = [&](double theta) {
    return radial_integral(exit_distance(center, theta), alpha, delta);
  };
  CompensatedSum total;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b];
    const double width = (breaks[b + 1] - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + width * p;
      total += boost::math::quadrature::gauss<double, 15>::integrate(integrand, a, a + width);
    }
  }
  return total.value();
}

GeometryIntegrals geometry_integrals(double alpha, double delta, int resolution) {
  check_geometry(alpha, delta);
  if (resolution < 1 || resolution > kMaxQuadratureResolution) {
    throw ParameterError("quadrature resolution out of range");
  }
  const GeometryKey key{alpha, delta, resolution};
  {
    std::shared_lock lock(cache_mutex());
    const auto it = cache().find(key);
    if (it != cache().end()) {
      return it->second;
    }
  }

  const Point centers[3] = {{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}};
  double prev[3];
  for (int c = 0; c < 3; ++c) {
    prev[c] = clamped_square_integral(centers[c], alpha, delta, resolution);
  }
  int panels = resolution;
  bool done = false;
  while (!done) {
    if (panels * 2 > kMaxQuadratureResolution) {
      throw NumericError("geometry integrals did not converge (alpha = " + std::to_string(alpha) +
                         ", delta = " + std::to_string(delta) + ")");
    }
    panels *= 2;
    done = true;
    for (int c = 0; c < 3; ++c) {
      const double next = clamped_square_integral(centers[c], alpha, delta, panels);
      done = done && converged(prev[c], next);
      prev[c] = next;
    }
  }
  for (double v : prev) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw NumericError("geometry integral is not positive and finite");
    }
  }

  GeometryIntegrals out{prev[0], prev[1], prev[2], alpha, delta, panels};
  std::unique_lock lock(cache_mutex());
  cache().emplace(key, out);
  return out;
}

double disc_square_overlap(double r) {
  if (std::isnan(r) || r < 0.0) {
    throw ParameterError("r must be nonnegative");
  }
  if (r <= 0.5) {
    return kPi * r * r;
  }
  if (r >= std::numbers::sqrt2 / 2.0) {
    return 1.0;
  }
  // Quarter square [0, 0.5]^2: full height up to x = a, then the circular arc.
  const double a = std::sqrt(r * r - 0.25);
  auto antiderivative = [r](double x) {
    return 0.5 * (x * std::sqrt(std::max(r * r - x * x, 0.0)) + r * r * std::asin(x / r));
  };
  const double quarter = 0.5 * a + antiderivative(0.5) - antiderivative(a);
  return 4.0 * quarter;
}

double region_probability(double r, const RegionModel& model) {
  switch (model.kind) {
    case RegionModel::Kind::Override:
      if (!(model.value >= 0.0 && model.value <= 1.0)) {
        throw ParameterError("p_region override must lie in [0, 1]");
      }
      return model.value;
    case RegionModel::Kind::ExactOverlap:
      if (std::isinf(r) && r > 0.0) {
        return 1.0;
      }
      return disc_square_overlap(r);
    case RegionModel::Kind::PiR2:
      break;
  }
  check_radius(r);
  const double p = kPi * r * r;
  if (p > 1.0) {
    throw ParameterError("pi r^2 = " + std::to_string(p) +
                         " exceeds 1; supply a p_region override or use the exact overlap model");
  }
  return p;
}

double upsilon(std::size_t n, double gamma_r, double tau, double r, double alpha) {
  if (n < 1) {
    throw ParameterError("n must be at least 1");
  }
  if (!(std::isfinite(tau) && tau >= 0.0)) {
    throw ParameterError("tau must be finite and nonnegative");
  }
  check_radius(r);
  if (n == 1 || tau == 0.0) {
    return 1.0;
  }
  return std::exp(-gamma_r * tau * static_cast<double>(n - 1) * (-std::expm1(-tau)) *
                  std::pow(0.5 + r, alpha));
}

NuCoeffs nu_coeffs(std::size_t n, std::size_t k, double r, const RegionModel& model) {
  check_rank(k, n);
  const auto tails = region_tails(n, k, region_probability(r, model));
  const double k2 = static_cast<double>(k * k);
  return {k2 * tails.lower, k2 * tails.upper};
}

double transmission_bound_general(std::size_t n, std::size_t k, double r, double gamma_r,
                                  double tau, double alpha, double delta,
                                  const RegionModel& model) {
  check_rank(k, n);
  const auto tails = region_tails(n, k, region_probability(r, model));
  const auto g = geometry_integrals(alpha, delta);
  const double u = std::pow(upsilon(n, gamma_r, tau, r, alpha), g.phi1 + g.phi2);
  const auto kd = static_cast<double>(k);
  const double v = 1.0 - u * tails.lower - u * u * tails.upper / (kd * kd);
  return std::clamp(v, 0.0, 1.0);
}

double transmission_bound_general_tight(std::size_t n, std::size_t k, double r, double gamma_r,
                                        double tau, double alpha, double delta,
                                        const RegionModel& model) {
  check_rank(k, n);
  const auto tails = region_tails(n, k, region_probability(r, model));
  const auto g = geometry_integrals(alpha, delta);
  const double ups = upsilon(n, gamma_r, tau, r, alpha);
  auto rank_average = [&](double phi) {
    const double base = std::pow(ups, 2.0 * phi);
    double term = 1.0;
    CompensatedSum s;
    for (std::size_t j = 1; j <= k; ++j) {
      term *= base;
      s += term;
    }
    return s.value() / static_cast<double>(k);
  };
  const double v = 1.0 - std::pow(ups, g.phi1 + g.phi2) * tails.lower -
                   rank_average(g.phi1) * rank_average(g.phi2) * tails.upper;
  return std::clamp(v, 0.0, 1.0);
}

double capture_factor_general(std::size_t n, double gamma_e, double tau, double d0, double alpha,
                              double delta) {
  if (n < 1) {
    throw ParameterError("n must be at least 1");
  }
  check_positive(gamma_e, "gamma_e");
  if (!(std::isfinite(tau) && tau >= 0.0)) {
    throw ParameterError("tau must be finite and nonnegative");
  }
  const double area = capture_area(d0);
  const auto g = geometry_integrals(alpha, delta);
  const double jammers = static_cast<double>(n - 1) * (-std::expm1(-tau));
  const double base = std::log1p(gamma_e * g.psi * std::pow(d0, alpha));
  return area + std::exp(-jammers * base) * (1.0 - area);
}

SecrecyBound secrecy_bound_general(std::size_t n, std::size_t m, double gamma_e, double tau,
                                   double d0, double alpha, double delta) {
  const double x =
      static_cast<double>(m) * capture_factor_general(n, gamma_e, tau, d0, alpha, delta);
  return {2.0 * x - x * x, x, x > 1.0};
}

// Rationalized root of (nu2/k^4) u^2 + (nu1/k^2) u - (1 - eps) = 0; algebraically equal to
// k^2 (sqrt(nu1^2 + 4 (1-eps) nu2) - nu1) / (2 nu2) without the cancellation.
double quadratic_inversion(const NuCoeffs& nu, std::size_t k, double eps_t) {
  if (!(nu.nu2 > 0.0)) {
    throw ParameterError("quadratic inversion needs nu2 > 0");
  }
  check_eps(eps_t, "eps_t");
  const double c = 1.0 - eps_t;
  const double k2 = static_cast<double>(k * k);
  return 2.0 * k2 * c / (nu.nu1 + std::sqrt(nu.nu1 * nu.nu1 + 4.0 * c * nu.nu2));
}

double linear_inversion(const NuCoeffs& nu, std::size_t k, double eps_t) {
  if (!(nu.nu1 > 0.0)) {
    throw ParameterError("linear inversion needs nu1 > 0");
  }
  check_eps(eps_t, "eps_t");
  return (1.0 - eps_t) * static_cast<double>(k * k) / nu.nu1;
}

std::optional<double> required_upsilon_power(const NuCoeffs& nu, std::size_t k, double eps_t) {
  if (nu.nu2 > 0.0) {
    return quadratic_inversion(nu, k, eps_t);
  }
  if (nu.nu1 > 0.0) {
    return linear_inversion(nu, k, eps_t);
  }
  return std::nullopt;
}

std::optional<double> tau_max_general(std::size_t n, std::size_t k, double r, double gamma_r,
                                      double alpha, double delta, double eps_t,
                                      const RegionModel& model) {
  if (n < 2) {
    throw ParameterError("the tau window needs n >= 2");
  }
  check_positive(gamma_r, "gamma_r");
  check_radius(r);
  const auto L = required_upsilon_power(nu_coeffs(n, k, r, model), k, eps_t);
  if (!L || *L >= 1.0) {
    return std::nullopt;
  }
  if (*L <= 0.0) {
    return kInf;
  }
  const auto g = geometry_integrals(alpha, delta);
  return std::sqrt(-std::log(*L) / reliability_scale(n, gamma_r, r, g));
}

std::optional<double> tau_min_general(std::size_t n, std::size_t m, double gamma_e, double d0,
                                      double alpha, double delta, double eps_s) {
  if (n < 2) {
    throw ParameterError("the tau window needs n >= 2");
  }
  check_positive(gamma_e, "gamma_e");
  check_eps(eps_s, "eps_s");
  const double area = capture_area(d0);
  if (m == 0) {
    return 0.0;
  }
  const double excess = secrecy_budget(eps_s) / static_cast<double>(m) - area;
  if (excess <= 0.0) {
    return std::nullopt;
  }
  const double y = excess / (1.0 - area);
  if (y >= 1.0) {
    return 0.0;
  }
  const auto g = geometry_integrals(alpha, delta);
  const double denom = static_cast<double>(n - 1) * std::log1p(gamma_e * g.psi * std::pow(d0, alpha));
  if (!(denom > 0.0)) {
    return std::nullopt;
  }
  const double inner = 1.0 + std::log(y) / denom;
  if (inner <= 0.0) {
    return std::nullopt;
  }
  return -std::log(inner);
}

TauWindow tau_window_general(std::size_t n, std::size_t k, std::size_t m, double r,
                             double gamma_r, double gamma_e, double d0, double alpha,
                             double delta, double eps_t, double eps_s, const RegionModel& model) {
  TauWindow w;
  w.tau_min = tau_min_general(n, m, gamma_e, d0, alpha, delta, eps_s);
  w.tau_max = tau_max_general(n, k, r, gamma_r, alpha, delta, eps_t, model);
  w.feasible = w.tau_min && w.tau_max && *w.tau_min <= *w.tau_max;
  return w;
}

std::optional<EavesdropperTolerance> max_eaves_general(std::size_t n, std::size_t k, double r,
                                                       double gamma_r, double gamma_e, double d0,
                                                       double alpha, double delta, double eps_t,
                                                       double eps_s, const RegionModel& model) {
  if (n < 2) {
    throw ParameterError("max-eaves needs n >= 2");
  }
  check_positive(gamma_r, "gamma_r");
  check_positive(gamma_e, "gamma_e");
  check_eps(eps_s, "eps_s");
  check_radius(r);
  const double area = capture_area(d0);
  const auto L = required_upsilon_power(nu_coeffs(n, k, r, model), k, eps_t);
  if (!L || *L >= 1.0) {
    return std::nullopt;
  }
  const auto g = geometry_integrals(alpha, delta);
  double omega = 0.0;
  if (*L > 0.0) {
    const double expo = std::sqrt(-static_cast<double>(n - 1) * std::log(*L) /
                                  (gamma_r * (g.phi1 + g.phi2) * std::pow(0.5 + r, alpha)));
    omega = std::exp(-expo * std::log1p(gamma_e * g.psi * std::pow(d0, alpha)));
  }
  EavesdropperTolerance out;
  const double denom = area + (1.0 - area) * omega;
  out.bound = denom > 0.0 ? secrecy_budget(eps_s) / denom : kInf;
  out.count = std::floor(out.bound);
  return out;
}

}  // namespace relaysec
