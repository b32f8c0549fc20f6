#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "relaysec/errors.hpp"
#include "relaysec/model.hpp"

using namespace relaysec;

TEST_CASE("default parameters validate") {
  ProtocolParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(std::isinf(p.effective_r()));
}

TEST_CASE("parameter invariants") {
  ProtocolParams p;
  p.k = 6;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.alpha = 1.5;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.delta = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.gamma_r = -1.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.delta = 1.5;  // unit distances would be clamped with equal path loss
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p.path_case = PathLossCase::DistanceDependent;
  p.r = 0.3;
  CHECK_NOTHROW(p.validate());
  CHECK(p.effective_r() == 0.3);
}

TEST_CASE("path loss clamp") {
  CHECK(path_loss(1.0, 2.0, 0.05) == 1.0);
  CHECK(path_loss(1.0, 3.7, 0.05) == doctest::Approx(1.0));
  CHECK(path_loss(0.0, 2.0, 0.05) == doctest::Approx(400.0).epsilon(1e-13));
  CHECK(path_loss(0.5, 4.0, 0.05) == doctest::Approx(16.0).epsilon(1e-13));
  // nonincreasing, continuous at delta
  double prev = path_loss(0.0, 3.0, 0.1);
  for (int i = 1; i <= 100; ++i) {
    const double v = path_loss(i * 0.01, 3.0, 0.1);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(path_loss(0.1 + 1e-12, 3.0, 0.1) == doctest::Approx(path_loss(0.1, 3.0, 0.1)).epsilon(1e-9));
}

TEST_CASE("sinr formula") {
  ProtocolParams p;
  p.es = 1.0;
  p.n0 = 2.0;
  CHECK(sinr(1.0, 1.0, {}, p) == doctest::Approx(1.0));

  p.n0 = 0.0;
  std::vector<Interferer> one{{1.0, 1.0}};
  CHECK(sinr(3.0, 1.0, one, p) == doctest::Approx(3.0));

  p.es = 2.0;
  p.n0 = 1.0;
  p.alpha = 2.0;
  CHECK(sinr(0.5, 2.0, one, p) == doctest::Approx(0.1).epsilon(1e-14));

  p.n0 = 0.0;
  CHECK_THROWS_AS(sinr(1.0, 1.0, {}, p), ConfigurationError);
}

TEST_CASE("sinr is monotone in signal and jammer gains") {
  ProtocolParams p;
  std::vector<Interferer> jam{{0.7, 0.4}, {1.3, 0.9}};
  const double base = sinr(1.0, 0.5, jam, p);
  CHECK(sinr(1.01, 0.5, jam, p) > base);
  auto more = jam;
  more[1].first += 0.01;
  CHECK(sinr(1.0, 0.5, more, p) < base);
}

TEST_CASE("network realization") {
  ProtocolParams p;
  p.path_case = PathLossCase::DistanceDependent;
  p.r = 0.3;
  p.n = 12;
  p.m = 4;

  SUBCASE("positions inside the square, gains positive and reciprocal") {
    Rng rng(1);
    const auto net = realize_network(p, rng);
    REQUIRE(net.relay_positions.size() == 12);
    REQUIRE(net.eaves_positions.size() == 4);
    for (const auto& q : net.relay_positions) {
      CHECK(std::fabs(q.x) <= 0.5);
      CHECK(std::fabs(q.y) <= 0.5);
    }
    const auto a = NodeId::relay(3);
    const auto b = NodeId::eaves(2);
    CHECK(net.gain(a, b) > 0.0);
    CHECK(net.gain(a, b) == net.gain(b, a));
    CHECK(net.gain(a, NodeId::source()) != net.gain(a, NodeId::destination()));
    CHECK(net.dist(NodeId::source(), NodeId::destination()) == doctest::Approx(1.0));
  }

  SUBCASE("fixed seed gives an identical instance") {
    Rng r1(99);
    Rng r2(99);
    const auto n1 = realize_network(p, r1);
    const auto n2 = realize_network(p, r2);
    CHECK(n1.relay_positions == n2.relay_positions);
    CHECK(n1.eaves_positions == n2.eaves_positions);
    for (std::size_t i = 0; i < p.n; ++i) {
      CHECK(n1.gain(NodeId::relay(i), NodeId::source()) == n2.gain(NodeId::relay(i), NodeId::source()));
    }
  }

  SUBCASE("empty relay list") {
    p.n = 0;
    Rng rng(2);
    const auto net = realize_network(p, rng);
    CHECK(net.relay_positions.empty());
    CHECK(net.relay_count() == 0);
  }

  SUBCASE("equal path loss has unit distances and no positions") {
    p.path_case = PathLossCase::EqualPathLoss;
    Rng rng(3);
    const auto net = realize_network(p, rng);
    CHECK(net.relay_positions.empty());
    CHECK(net.dist(NodeId::relay(0), NodeId::eaves(1)) == 1.0);
    CHECK(net.dist(NodeId::relay(0), NodeId::relay(0)) == 0.0);
    CHECK_THROWS_AS((void)net.position(NodeId::relay(0)), ParameterError);
  }
}

TEST_CASE("gain draws are unit-mean exponential") {
  ProtocolParams p;
  const int draws = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    Rng rng(derive_stream(4, static_cast<std::uint64_t>(i), 0));
    const auto net = realize_network(p, rng);
    const double g = net.gain(NodeId::source(), NodeId::relay(0));
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / draws;
  CHECK(std::fabs(mean - 1.0) < 0.01);
  CHECK(std::fabs(sum_sq / draws - mean * mean - 1.0) < 0.02);

  // within one instance, many distinct pairs
  p.n = 400;
  Rng rng(8);
  const auto net = realize_network(p, rng);
  sum = 0.0;
  int count = 0;
  for (std::size_t a = 0; a < p.n; ++a) {
    for (std::size_t b = a + 1; b < p.n; ++b) {
      sum += net.gain(NodeId::relay(a), NodeId::relay(b));
      ++count;
    }
  }
  CHECK(std::fabs(sum / count - 1.0) < 0.01);
}
