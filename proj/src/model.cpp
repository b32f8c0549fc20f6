#include "relaysec/model.hpp"

#include <cmath>
#include <string>

#include "relaysec/errors.hpp"

namespace relaysec {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw ParameterError(message);
  }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ProtocolParams::validate() const {
  require(n >= 1, "n must be at least 1");
  require(k >= 1 && k <= n, "k must satisfy 1 <= k <= n");
  require(!std::isnan(r) && r >= 0.0, "r must be nonnegative (or inf)");
  require(std::isfinite(tau) && tau >= 0.0, "tau must be finite and nonnegative");
  require(positive(gamma_r), "gamma_r must be positive");
  require(positive(gamma_e), "gamma_e must be positive");
  require(std::isfinite(alpha) && alpha >= 2.0, "alpha must be at least 2");
  require(std::isfinite(d0) && d0 >= 0.0, "d0 must be nonnegative");
  require(positive(es), "es must be positive");
  require(std::isfinite(n0) && n0 >= 0.0, "n0 must be nonnegative");
  require(positive(delta), "delta must be positive");
  if (path_case == PathLossCase::EqualPathLoss) {
    require(delta <= 1.0, "delta must not exceed 1 with equal path loss (unit distances)");
  }
}

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double path_loss(double d, double alpha, double delta) {
  return std::pow(std::max(d, delta), -alpha);
}

double sinr(double signal_gain, double signal_dist, std::span<const Interferer> jammers,
            const ProtocolParams& params) {
  double interference = 0.0;
  for (const auto& [g, d] : jammers) {
    interference += params.es * g * path_loss(d, params.alpha, params.delta);
  }
  const double denom = interference + params.n0 / 2.0;
  if (!(denom > 0.0)) {
    throw ConfigurationError("SINR denominator is zero: set n0 > 0 or allow jamming");
  }
  return params.es * signal_gain * path_loss(signal_dist, params.alpha, params.delta) / denom;
}

NetworkInstance::NetworkInstance(PathLossCase path_case, std::size_t n, std::size_t m,
                                 std::uint64_t gain_key)
    : path_case_(path_case), n_(n), m_(m), gain_key_(gain_key) {}

Point NetworkInstance::position(NodeId node) const {
  if (path_case_ == PathLossCase::EqualPathLoss) {
    throw ParameterError("positions are undefined with equal path loss");
  }
  switch (node.role) {
    case NodeId::Role::Source:
      return kSourcePos;
    case NodeId::Role::Destination:
      return kDestinationPos;
    case NodeId::Role::Relay:
      return relay_positions.at(node.index);
    case NodeId::Role::Eavesdropper:
      return eaves_positions.at(node.index);
  }
  return {};
}

double NetworkInstance::dist(NodeId a, NodeId b) const {
  if (path_case_ == PathLossCase::EqualPathLoss) {
    return a == b ? 0.0 : 1.0;
  }
  return distance(position(a), position(b));
}

std::uint64_t NetworkInstance::ordinal(NodeId node) const {
  switch (node.role) {
    case NodeId::Role::Source:
      return 0;
    case NodeId::Role::Destination:
      return 1;
    case NodeId::Role::Relay:
      return 2 + node.index;
    case NodeId::Role::Eavesdropper:
      return 2 + n_ + node.index;
  }
  return 0;
}

std::uint64_t NetworkInstance::pair_key(NodeId a, NodeId b) const {
  std::uint64_t lo = ordinal(a);
  std::uint64_t hi = ordinal(b);
  if (lo > hi) {
    std::swap(lo, hi);
  }
  return lo * (2 + n_ + m_) + hi;
}

void NetworkInstance::set_gain(NodeId a, NodeId b, double value) {
  if (!(std::isfinite(value) && value >= 0.0)) {
    throw ParameterError("gain must be finite and nonnegative");
  }
  pinned_[pair_key(a, b)] = value;
}

double NetworkInstance::gain(NodeId a, NodeId b) const {
  const std::uint64_t key = pair_key(a, b);
  if (!pinned_.empty()) {
    const auto it = pinned_.find(key);
    if (it != pinned_.end()) {
      return it->second;
    }
  }
  std::uint64_t state = gain_key_ ^ (key * 0xD6E8FEB86659FD93ULL);
  splitmix64(state);
  const std::uint64_t bits = splitmix64(state);
  const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  return -std::log(u);
}

NetworkInstance realize_network(const ProtocolParams& params, Rng& rng) {
  NetworkInstance net(params.path_case, params.n, params.m, rng.next_u64());
  if (params.path_case == PathLossCase::DistanceDependent) {
    net.relay_positions.resize(params.n);
    for (auto& p : net.relay_positions) {
      p.x = rng.uniform(-0.5, 0.5);
      p.y = rng.uniform(-0.5, 0.5);
    }
    net.eaves_positions.resize(params.m);
    for (auto& p : net.eaves_positions) {
      p.x = rng.uniform(-0.5, 0.5);
      p.y = rng.uniform(-0.5, 0.5);
    }
  }
  return net;
}

}  // namespace relaysec
