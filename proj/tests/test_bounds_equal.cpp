#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "relaysec/bounds_equal.hpp"
#include "relaysec/errors.hpp"
#include "relaysec/orderstats.hpp"

using namespace relaysec;

namespace {
constexpr double kE1 = std::numbers::e - 1.0;
}

TEST_CASE("psi") {
  CHECK(psi(7, 1.0, 0.0) == 1.0);
  CHECK(psi(1, 3.0, 0.4) == 1.0);
  CHECK(psi(2, 1.0, 1.0) == doctest::Approx(0.2824535638505403436).epsilon(1e-14));
}

TEST_CASE("transmission bound") {
  CHECK(transmission_bound_equal(5, 2, 1.0, 0.0) == 0.0);
  CHECK(transmission_q_equal(5, 2, 1.0, 0.05) ==
        doctest::Approx(3.4421586054531904815e-7).epsilon(1e-12));
  CHECK(transmission_bound_equal(5, 2, 1.0, 0.05) ==
        doctest::Approx(6.8843160260607944535e-7).epsilon(1e-12));
  CHECK_THROWS_AS(transmission_bound_equal(3, 4, 1.0, 0.1), ParameterError);
  for (double tau : {0.01, 0.2, 1.0, 3.0}) {
    const double v = transmission_bound_equal(10, 3, 2.0, tau);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("k = 1 collapse and k = n mixture") {
  for (std::size_t n : {2U, 5U, 12U}) {
    for (int i = 1; i <= 40; ++i) {
      const double tau = 0.025 * i;
      const double ps = psi(n, 0.8, tau);
      CHECK(std::fabs(transmission_q_equal(n, 1, 0.8, tau) - std::pow(1.0 - ps, n)) < 1e-12);
      // Q at k = n equals the uniform rank mixture, i.e. the parent law at x with e^{-2x} = psi
      const double x = -std::log(ps) / 2.0;
      std::vector<CdfFn> ranks;
      for (std::size_t j = 1; j <= n; ++j) {
        ranks.emplace_back([j, n](double y) { return kth_largest_cdf(y, j, n); });
      }
      CHECK(std::fabs(transmission_q_equal(n, n, 0.8, tau) - mixture_cdf(ranks, x)) < 1e-12);
      CHECK(std::fabs(transmission_q_equal(n, n, 0.8, tau) - (1.0 - ps)) < 1e-12);
    }
  }
}

TEST_CASE("secrecy bound") {
  CHECK(secrecy_bound_equal(5, 0, kE1, 0.3).raw == 0.0);
  const auto no_jam = secrecy_bound_equal(5, 1, kE1, 0.0);
  CHECK(no_jam.raw == doctest::Approx(1.0));
  CHECK_FALSE(no_jam.saturated);
  const auto three = secrecy_bound_equal(5, 3, kE1, 0.0);
  CHECK(three.raw == doctest::Approx(2.0 * 3 - 9.0));
  CHECK(three.saturated);
  CHECK(three.effective() == 1.0);

  CHECK(jamming_factor_equal(5, kE1, 0.857146) ==
        doctest::Approx(0.10000711432678742027).epsilon(1e-12));
  CHECK(jamming_factor_equal(5, kE1, 0.857146) ==
        doctest::Approx(std::exp(-4.0 * (1.0 - std::exp(-0.857146)))).epsilon(1e-12));
  const auto s = secrecy_bound_equal(5, 1, kE1, 0.857146);
  CHECK(s.raw == doctest::Approx(0.19001280573760371084).epsilon(1e-12));
  CHECK_FALSE(s.saturated);
}

TEST_CASE("tau window") {
  const auto tmax = tau_max_equal(5, 1, 1.0, 0.19);
  REQUIRE(tmax.has_value());
  CHECK(*tmax == doctest::Approx(0.11476090125660519425).epsilon(1e-13));
  CHECK(*tmax == doctest::Approx(std::sqrt(-std::log(0.9) / 8.0)).epsilon(1e-13));
  CHECK_FALSE(tau_max_equal(5, 2, 1.0, 0.19).has_value());
  CHECK(std::isinf(*tau_max_equal(5, 1, 1.0, 1.0)));
  CHECK(*tau_max_equal(5, 1, 1.0, 1.0 - 1e-12) > 1.0);
  CHECK_THROWS_AS(tau_max_equal(1, 1, 1.0, 0.2), ParameterError);
  CHECK_THROWS_AS(tau_max_equal(5, 1, 1.0, 0.0), ParameterError);

  const auto tmin = tau_min_equal(5, 1, kE1, 0.19);
  REQUIRE(tmin.has_value());
  CHECK(*tmin == doctest::Approx(0.85718791034629321604).epsilon(1e-13));
  CHECK_FALSE(tau_min_equal(5, 1000, kE1, 0.19).has_value());
  CHECK(*tau_min_equal(5, 1, kE1, 1.0) == 0.0);
  CHECK(*tau_min_equal(5, 1, kE1, 0.999999) < *tau_min_equal(5, 1, kE1, 0.5));
  CHECK_THROWS_AS(tau_min_equal(1, 1, kE1, 0.2), ParameterError);

  const auto w = tau_window_equal(5, 1, 1, 1.0, kE1, 0.19, 0.19);
  CHECK_FALSE(w.feasible);
  const auto ok = tau_window_equal(5, 1, 1, 1.0, kE1, 0.8, 0.8);
  CHECK(ok.feasible == (*ok.tau_min <= *ok.tau_max));
}

TEST_CASE("maximum tolerable eavesdroppers") {
  const auto t = max_eaves_equal(5, 1, 1.0, kE1, 0.19, 0.19);
  REQUIRE(t.has_value());
  CHECK(t->bound == doctest::Approx(0.15825597088359333726).epsilon(1e-12));
  CHECK(t->count == 0.0);
  CHECK(std::fabs(t->bound - 0.1583) / 0.1583 < 1e-3);
  CHECK_FALSE(max_eaves_equal(5, 2, 1.0, kE1, 0.19, 0.19).has_value());
  CHECK(max_eaves_equal(5, 1, 1.0, 1e300, 0.19, 0.19)->bound > 1e100);
  CHECK(max_eaves_equal(5, 1, 1.0, kE1, 0.19, 1e-12)->bound < 1e-11);

  const auto at = max_eaves_equal_at_tau(5, kE1, 0.857146, 0.19);
  CHECK(at.bound == doctest::Approx(secrecy_budget(0.19) / 0.10000711432678742027).epsilon(1e-12));
}

TEST_CASE("back-substitution chains") {
  for (std::size_t n : {2U, 5U, 10U, 30U}) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(n, 4); ++k) {
      for (double gr : {0.5, 1.0, 2.0}) {
        for (double eps : {0.05, 0.19, 0.5, 0.9}) {
          const auto t = tau_max_equal(n, k, gr, eps);
          if (t && std::isfinite(*t)) {
            CHECK(transmission_bound_equal(n, k, gr, *t) <= eps + 1e-9);
          }
        }
      }
    }
    for (std::size_t m : {1U, 2U, 5U}) {
      for (double ge : {0.5, kE1, 4.0}) {
        for (double eps : {0.05, 0.19, 0.5}) {
          const auto t = tau_min_equal(n, m, ge, eps);
          if (t) {
            const auto s = secrecy_bound_equal(n, m, ge, *t);
            CHECK_FALSE(s.saturated);
            CHECK(s.raw <= eps + 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("jammer-averaged diagnostics") {
  // Jensen: averaging over |R| gives at least the plug-in secrecy factor
  for (double tau : {0.05, 0.3, 1.0}) {
    const double plug = secrecy_bound_equal(6, 1, 1.0, tau).raw;
    CHECK(secrecy_bound_equal_averaged(6, 1, 1.0, tau) >= plug - 1e-15);
  }
  CHECK(transmission_bound_equal_averaged(5, 2, 1.0, 0.0) == 0.0);
  const double v = transmission_bound_equal_averaged(5, 2, 1.0, 0.1);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK(secrecy_bound_equal_averaged(5, 0, 1.0, 0.1) == 0.0);
}

TEST_CASE("secrecy budget") {
  CHECK(secrecy_budget(0.19) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(secrecy_budget(1e-20) == doctest::Approx(5e-21).epsilon(1e-12));
}
