#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "relaysec/errors.hpp"
#include "relaysec/protocol.hpp"

using namespace relaysec;

namespace {

NetworkInstance hand_network(std::vector<Point> relays, std::vector<Point> eaves) {
  NetworkInstance net(PathLossCase::DistanceDependent, relays.size(), eaves.size(), 12345);
  net.relay_positions = std::move(relays);
  net.eaves_positions = std::move(eaves);
  return net;
}

void set_min_pair(NetworkInstance& net, std::size_t relay, double g) {
  net.set_gain(NodeId::source(), NodeId::relay(relay), g);
  net.set_gain(NodeId::destination(), NodeId::relay(relay), g + 1.0);
}

ProtocolParams general_params() {
  ProtocolParams p;
  p.path_case = PathLossCase::DistanceDependent;
  p.r = 0.3;
  return p;
}

}  // namespace

TEST_CASE("selection region") {
  auto net = hand_network({{0.0, 0.0}, {0.4, 0.0}, {0.49, 0.49}}, {});
  CHECK(region_filter(net, 0.45) == std::vector<std::size_t>{0, 1});
  CHECK(region_filter(net, 1.0).size() == 3);
  auto off_center = hand_network({{0.1, 0.2}, {-0.3, 0.4}}, {});
  CHECK(region_filter(off_center, 0.0).empty());

  NetworkInstance eq(PathLossCase::EqualPathLoss, 4, 0, 1);
  CHECK(region_filter(eq, 0.0).size() == 4);
}

TEST_CASE("candidate selection") {
  auto net = hand_network({{0, 0}, {0, 0}, {0, 0}, {0, 0}}, {});
  const double g[] = {0.9, 0.1, 0.5, 0.7};
  for (std::size_t i = 0; i < 4; ++i) set_min_pair(net, i, g[i]);
  const std::vector<std::size_t> all{0, 1, 2, 3};

  const auto top2 = select_candidates(net, all, 2);
  CHECK(top2.indices == std::vector<std::size_t>{0, 3});
  CHECK(top2.region_count == 4);

  const auto every = select_candidates(net, {1, 2}, 3);
  CHECK(every.indices.size() == 2);
  CHECK(every.indices == std::vector<std::size_t>{2, 1});

  CHECK(select_candidates(net, {}, 2).indices.empty());

  // ties broken by index
  set_min_pair(net, 2, 0.9);
  CHECK(select_candidates(net, all, 2).indices == std::vector<std::size_t>{0, 2});
}

TEST_CASE("relay pick") {
  Rng rng(3);
  CandidateSet single{{5}, 1};
  CHECK(pick_relay(single, rng) == std::optional<std::size_t>{5});
  CHECK_FALSE(pick_relay(CandidateSet{}, rng).has_value());

  CandidateSet four{{0, 1, 2, 3}, 4};
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[*pick_relay(four, rng)];
  for (int c : counts) CHECK(std::fabs(c / double(n) - 0.25) < 0.01);
}

TEST_CASE("jammer sets") {
  NetworkInstance net(PathLossCase::EqualPathLoss, 6, 0, 77);
  const auto dst = NodeId::destination();
  CHECK(jammer_set(net, dst, 0, 0.0).empty());
  CHECK(jammer_set(net, dst, 0, 1e300).size() == 5);
  for (std::size_t j : jammer_set(net, dst, 2, 0.8)) {
    CHECK(j != 2);
    CHECK(net.gain(NodeId::relay(j), dst) < 0.8);
  }
}

TEST_CASE("expected jammer-set size is (n-1)(1-e^-tau)") {
  ProtocolParams p;
  p.n = 8;
  p.tau = 0.3;
  const int trials = 20000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_stream(21, static_cast<std::uint64_t>(i), 0));
    sum += static_cast<double>(run_trial(p, rng).jam1_size);
  }
  const double pj = 1.0 - std::exp(-0.3);
  const double mean = 7.0 * pj;
  const double sd = std::sqrt(7.0 * pj * (1.0 - pj) / trials);
  CHECK(std::fabs(sum / trials - mean) < 3.0 * sd);
}

TEST_CASE("trial outcome invariants") {
  SUBCASE("no eavesdroppers means no secrecy outage") {
    ProtocolParams p;
    p.m = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
      Rng rng(i);
      CHECK_FALSE(run_trial(p, rng).s_outage);
    }
  }
  SUBCASE("threshold limit") {
    ProtocolParams p;
    p.n = 1;
    p.k = 1;
    p.tau = 0.0;
    p.n0 = 2.0;
    p.gamma_r = 1e-300;
    Rng rng(4);
    const auto o = run_trial(p, rng);
    CHECK(o.jam1_size == 0);
    CHECK_FALSE(o.t_outage);
  }
  SUBCASE("empty region records a transmission outage without radio activity") {
    ProtocolParams p = general_params();
    p.r = 0.0;
    Rng rng(5);
    const auto o = run_trial(p, rng);
    CHECK_FALSE(o.selected_relay.has_value());
    CHECK(o.candidate_count == 0);
    CHECK(o.t_outage);
    CHECK(std::isnan(o.hop1_sinr));
  }
  SUBCASE("selected relay exists iff the candidate set is nonempty") {
    ProtocolParams p = general_params();
    p.r = 0.1;
    for (std::uint64_t i = 0; i < 500; ++i) {
      Rng rng(i);
      const auto o = run_trial(p, rng);
      CHECK(o.selected_relay.has_value() == (o.candidate_count > 0));
      if (!o.selected_relay) CHECK(o.t_outage);
    }
  }
}

TEST_CASE("eavesdropper inside the source capture disc always succeeds") {
  ProtocolParams p = general_params();
  p.d0 = 0.05;
  p.m = 1;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto net = hand_network({{0.0, 0.0}, {0.1, 0.1}, {-0.1, 0.2}, {0.2, -0.1}, {0.0, 0.25}},
                            {kSourcePos});
    Rng pick(seed);
    const auto o = execute_protocol(p, net, pick);
    if (o.selected_relay) {
      CHECK(o.s_outage_hop1);
      CHECK(o.s_outage);
    }
  }
}

TEST_CASE("hop outage composition") {
  CHECK(combine_hop_outages(0.0, 0.0) == 0.0);
  CHECK(combine_hop_outages(1.0, 0.37) == 1.0);
  CHECK(combine_hop_outages(0.3, 0.4) == doctest::Approx(0.58).epsilon(1e-15));
  CHECK_THROWS_AS(combine_hop_outages(-0.1, 0.2), DomainError);
  CHECK_THROWS_AS(combine_hop_outages(0.5, 1.2), DomainError);
}

TEST_CASE("selection is uniform within a fixed candidate set") {
  // one network reused: the candidate set is fixed, only the pick varies
  ProtocolParams p;
  p.n = 6;
  p.k = 3;
  Rng net_rng(31);
  const auto net = realize_network(p, net_rng);
  std::map<std::size_t, int> counts;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_stream(9, static_cast<std::uint64_t>(i), 0));
    ++counts[*execute_protocol(p, net, rng).selected_relay];
  }
  REQUIRE(counts.size() == 3);
  double chi2 = 0.0;
  const double expected = trials / 3.0;
  for (const auto& [relay, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 13.82);  // chi-square, 2 dof, p = 0.001
}

TEST_CASE("k = n with equal path loss selects every relay with frequency 1/n") {
  ProtocolParams p;
  p.n = 5;
  p.k = 5;
  std::vector<int> counts(5, 0);
  const int trials = 50000;
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_stream(10, static_cast<std::uint64_t>(i), 0));
    ++counts[*run_trial(p, rng).selected_relay];
  }
  const double sd = std::sqrt(0.2 * 0.8 / trials);
  for (int c : counts) CHECK(std::fabs(c / double(trials) - 0.2) < 3.5 * sd);
}

TEST_CASE("common random numbers: raising gamma_r never removes an outage") {
  ProtocolParams lo;
  lo.n = 6;
  lo.k = 2;
  lo.gamma_r = 0.5;
  ProtocolParams hi = lo;
  hi.gamma_r = 2.0;
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Rng a(derive_stream(12, i, 0));
    Rng b(derive_stream(12, i, 0));
    const auto oa = run_trial(lo, a);
    const auto ob = run_trial(hi, b);
    REQUIRE(oa.selected_relay == ob.selected_relay);
    if (oa.t_outage) CHECK(ob.t_outage);
  }
}

TEST_CASE("larger tau at a fixed relay never creates a new eavesdropper success") {
  ProtocolParams lo;
  lo.n = 8;
  lo.m = 3;
  lo.k = 8;
  lo.tau = 0.1;
  ProtocolParams hi = lo;
  hi.tau = 0.6;
  int compared = 0;
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Rng a(derive_stream(13, i, 0));
    Rng b(derive_stream(13, i, 0));
    const auto oa = run_trial(lo, a);
    const auto ob = run_trial(hi, b);
    // with k = n the candidate set does not depend on tau, so the pick matches
    REQUIRE(oa.selected_relay == ob.selected_relay);
    CHECK(ob.jam1_size >= oa.jam1_size);
    if (!oa.s_outage_hop1) CHECK_FALSE(ob.s_outage_hop1);
    if (!oa.s_outage_hop2) CHECK_FALSE(ob.s_outage_hop2);
    ++compared;
  }
  CHECK(compared == 3000);
}
