#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "relaysec/model.hpp"
#include "relaysec/rng.hpp"

namespace relaysec {

struct CandidateSet {
  /// Sorted by descending min-pair gain, ties by relay index.
  std::vector<std::size_t> indices;
  std::size_t region_count = 0;
};

struct TrialOutcome {
  std::optional<std::size_t> selected_relay;
  std::size_t region_count = 0;
  std::size_t candidate_count = 0;
  std::size_t jam1_size = 0;
  std::size_t jam2_size = 0;
  bool t_outage_hop1 = false;
  bool t_outage_hop2 = false;
  bool s_outage_hop1 = false;
  bool s_outage_hop2 = false;
  bool t_outage = false;
  bool s_outage = false;
  /// NaN when no relay was selected.
  double hop1_sinr = 0.0;
  double hop2_sinr = 0.0;
};

/// Relays within distance r of the S-D midpoint; every relay with equal path loss.
std::vector<std::size_t> region_filter(const NetworkInstance& net, double r);

CandidateSet select_candidates(const NetworkInstance& net, const std::vector<std::size_t>& region,
                               std::size_t k);

/// Uniform pick; nullopt when the candidate set is empty.
std::optional<std::size_t> pick_relay(const CandidateSet& candidates, Rng& rng);

/// Relays other than `exclude` whose gain to `receiver` is strictly below tau.
std::vector<std::size_t> jammer_set(const NetworkInstance& net, NodeId receiver,
                                    std::size_t exclude, double tau);

/// Runs the selection and both hops on a given network; rng drives the relay pick only.
TrialOutcome execute_protocol(const ProtocolParams& params, const NetworkInstance& net, Rng& rng);

/// Realizes a fresh network from rng and executes the protocol on it.
TrialOutcome run_trial(const ProtocolParams& params, Rng& rng);

/// p1 + p2 - p1 p2
double combine_hop_outages(double p1, double p2);

}  // namespace relaysec
