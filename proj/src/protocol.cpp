#include "relaysec/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaysec/errors.hpp"

namespace relaysec {
namespace {

double min_pair_gain(const NetworkInstance& net, std::size_t relay) {
  const auto r = NodeId::relay(relay);
  return std::min(net.gain(NodeId::source(), r), net.gain(NodeId::destination(), r));
}

std::vector<Interferer> interferers_at(const NetworkInstance& net, NodeId receiver,
                                       const std::vector<std::size_t>& jammers) {
  std::vector<Interferer> out;
  out.reserve(jammers.size());
  for (std::size_t j : jammers) {
    const auto id = NodeId::relay(j);
    out.emplace_back(net.gain(id, receiver), net.dist(id, receiver));
  }
  return out;
}

// True when some eavesdropper decodes the transmission of `tx` under the given jammers.
bool eavesdropped(const ProtocolParams& params, const NetworkInstance& net, NodeId tx,
                  const std::vector<std::size_t>& jammers) {
  const bool capture = net.path_case() == PathLossCase::DistanceDependent;
  for (std::size_t e = 0; e < net.eaves_count(); ++e) {
    const auto eid = NodeId::eaves(e);
    const double d = net.dist(tx, eid);
    if (capture && d < params.d0) {
      return true;
    }
    const auto jam = interferers_at(net, eid, jammers);
    if (sinr(net.gain(tx, eid), d, jam, params) >= params.gamma_e) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::size_t> region_filter(const NetworkInstance& net, double r) {
  std::vector<std::size_t> out;
  const std::size_t n = net.relay_count();
  out.reserve(n);
  const bool all = net.path_case() == PathLossCase::EqualPathLoss || std::isinf(r);
  for (std::size_t i = 0; i < n; ++i) {
    if (all || std::hypot(net.relay_positions[i].x, net.relay_positions[i].y) <= r) {
      out.push_back(i);
    }
  }
  return out;
}

CandidateSet select_candidates(const NetworkInstance& net, const std::vector<std::size_t>& region,
                               std::size_t k) {
  CandidateSet set;
  set.region_count = region.size();
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(region.size());
  for (std::size_t i : region) {
    ranked.emplace_back(min_pair_gain(net, i), i);
  }
  const std::size_t take = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                    ranked.end(), [](const auto& a, const auto& b) {
                      return a.first > b.first || (a.first == b.first && a.second < b.second);
                    });
  set.indices.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    set.indices.push_back(ranked[i].second);
  }
  return set;
}

std::optional<std::size_t> pick_relay(const CandidateSet& candidates, Rng& rng) {
  if (candidates.indices.empty()) {
    return std::nullopt;
  }
  return candidates.indices[rng.index(candidates.indices.size())];
}

std::vector<std::size_t> jammer_set(const NetworkInstance& net, NodeId receiver,
                                    std::size_t exclude, double tau) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < net.relay_count(); ++j) {
    if (j != exclude && net.gain(NodeId::relay(j), receiver) < tau) {
      out.push_back(j);
    }
  }
  return out;
}

TrialOutcome execute_protocol(const ProtocolParams& params, const NetworkInstance& net, Rng& rng) {
  TrialOutcome out;
  const auto region = region_filter(net, params.effective_r());
  const auto candidates = select_candidates(net, region, params.k);
  out.region_count = candidates.region_count;
  out.candidate_count = candidates.indices.size();
  out.selected_relay = pick_relay(candidates, rng);
  if (!out.selected_relay) {
    out.t_outage = true;
    out.hop1_sinr = std::numeric_limits<double>::quiet_NaN();
    out.hop2_sinr = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const std::size_t star = *out.selected_relay;
  const auto relay = NodeId::relay(star);
  const auto src = NodeId::source();
  const auto dst = NodeId::destination();

  const auto r1 = jammer_set(net, relay, star, params.tau);
  const auto r2 = jammer_set(net, dst, star, params.tau);
  out.jam1_size = r1.size();
  out.jam2_size = r2.size();

  out.hop1_sinr = sinr(net.gain(src, relay), net.dist(src, relay), interferers_at(net, relay, r1),
                       params);
  out.hop2_sinr = sinr(net.gain(relay, dst), net.dist(relay, dst), interferers_at(net, dst, r2),
                       params);
  out.t_outage_hop1 = out.hop1_sinr < params.gamma_r;
  out.t_outage_hop2 = out.hop2_sinr < params.gamma_r;
  out.t_outage = out.t_outage_hop1 || out.t_outage_hop2;

  out.s_outage_hop1 = eavesdropped(params, net, src, r1);
  out.s_outage_hop2 = eavesdropped(params, net, relay, r2);
  out.s_outage = out.s_outage_hop1 || out.s_outage_hop2;
  return out;
}

TrialOutcome run_trial(const ProtocolParams& params, Rng& rng) {
  const auto net = realize_network(params, rng);
  return execute_protocol(params, net, rng);
}

double combine_hop_outages(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw DomainError("hop outage probabilities must lie in [0, 1]");
  }
  return p1 + p2 - p1 * p2;
}

}  // namespace relaysec
