#include "relaysec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "relaysec/errors.hpp"
#include "relaysec/protocol.hpp"
#include "relaysec/rng.hpp"

namespace relaysec {
namespace {

constexpr std::uint64_t kTrialDomain = 0;
constexpr std::uint64_t kNetworkDomain = 1;
constexpr std::uint64_t kIndependentBlock = 2048;

struct Tally {
  std::uint64_t t_outages = 0;
  std::uint64_t s_outages = 0;
  std::uint64_t no_candidate = 0;
  std::uint64_t jam1 = 0;
  std::uint64_t jam2 = 0;
  std::vector<std::uint64_t> histogram;

  explicit Tally(std::size_t n) : histogram(n, 0) {}

  void record(const TrialOutcome& o) {
    t_outages += o.t_outage ? 1 : 0;
    s_outages += o.s_outage ? 1 : 0;
    if (o.selected_relay) {
      ++histogram[*o.selected_relay];
      jam1 += o.jam1_size;
      jam2 += o.jam2_size;
    } else {
      ++no_candidate;
    }
  }

  void merge(const Tally& other) {
    t_outages += other.t_outages;
    s_outages += other.s_outages;
    no_candidate += other.no_candidate;
    jam1 += other.jam1;
    jam2 += other.jam2;
    for (std::size_t i = 0; i < histogram.size(); ++i) {
      histogram[i] += other.histogram[i];
    }
  }
};

void run_block(const ProtocolParams& params, std::uint64_t seed, std::uint64_t coherence,
               std::uint64_t first, std::uint64_t last, Tally& tally) {
  if (coherence <= 1) {
    for (std::uint64_t i = first; i < last; ++i) {
      Rng rng(derive_stream(seed, i, kTrialDomain));
      tally.record(run_trial(params, rng));
    }
    return;
  }
  Rng net_rng(derive_stream(seed, first / coherence, kNetworkDomain));
  const auto net = realize_network(params, net_rng);
  for (std::uint64_t i = first; i < last; ++i) {
    Rng rng(derive_stream(seed, i, kTrialDomain));
    tally.record(execute_protocol(params, net, rng));
  }
}

}  // namespace

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) {
    throw ParameterError("Wilson interval needs at least one trial");
  }
  if (successes > trials) {
    throw ParameterError("successes exceed trials");
  }
  const auto nd = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nd;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nd;
  const double center = (p + z2 / (2.0 * nd)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

double standard_error(double p, std::uint64_t trials) {
  if (trials == 0) {
    throw ParameterError("standard error needs at least one trial");
  }
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

LoadBalance load_balance(std::span<const std::uint64_t> histogram) {
  if (histogram.empty()) {
    throw ParameterError("load balance needs a nonempty histogram");
  }
  LoadBalance out;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (auto c : histogram) {
    const auto f = static_cast<double>(c);
    sum += f;
    sum_sq += f * f;
  }
  if (sum == 0.0) {
    out.jain = std::numeric_limits<double>::quiet_NaN();
    out.entropy = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const auto bins = static_cast<double>(histogram.size());
  out.defined = true;
  out.jain = sum * sum / (bins * sum_sq);
  if (histogram.size() == 1) {
    out.entropy = 1.0;
    return out;
  }
  double h = 0.0;
  for (auto c : histogram) {
    if (c > 0) {
      const double f = static_cast<double>(c) / sum;
      h -= f * std::log(f);
    }
  }
  out.entropy = std::clamp(h / std::log(bins), 0.0, 1.0);
  return out;
}

EstimateReport estimate(const ProtocolParams& params, std::uint64_t trials, std::uint64_t seed,
                        const EstimateOptions& options) {
  params.validate();
  if (trials == 0) {
    throw ParameterError("trials must be at least 1");
  }
  const std::uint64_t block = options.coherence > 1 ? options.coherence : kIndependentBlock;
  const std::uint64_t blocks = (trials + block - 1) / block;
  unsigned workers = options.workers == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                          : options.workers;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

  Tally total(params.n);
  std::atomic<std::uint64_t> next_block{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex merge_mutex;

  auto worker = [&] {
    Tally local(params.n);
    try {
      for (;;) {
        const std::uint64_t b = next_block.fetch_add(1);
        if (b >= blocks || failed.load()) {
          break;
        }
        const std::uint64_t first = b * block;
        run_block(params, seed, options.coherence, first, std::min(first + block, trials), local);
      }
    } catch (...) {
      std::lock_guard lock(merge_mutex);
      if (!error) {
        error = std::current_exception();
      }
      failed.store(true);
      return;
    }
    std::lock_guard lock(merge_mutex);
    total.merge(local);
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }

  EstimateReport out;
  out.params = params;
  out.trials = trials;
  out.seed = seed;
  out.t_outages = total.t_outages;
  out.s_outages = total.s_outages;
  out.no_candidate = total.no_candidate;
  const auto nd = static_cast<double>(trials);
  out.p_t_hat = static_cast<double>(total.t_outages) / nd;
  out.p_s_hat = static_cast<double>(total.s_outages) / nd;
  out.ci_t = wilson_interval(total.t_outages, trials);
  out.ci_s = wilson_interval(total.s_outages, trials);
  out.no_candidate_rate = static_cast<double>(total.no_candidate) / nd;
  const std::uint64_t relayed = trials - total.no_candidate;
  if (relayed > 0) {
    out.mean_jam1 = static_cast<double>(total.jam1) / static_cast<double>(relayed);
    out.mean_jam2 = static_cast<double>(total.jam2) / static_cast<double>(relayed);
  }
  out.selection_histogram = std::move(total.histogram);
  const auto lb = load_balance(out.selection_histogram);
  out.jain_index = lb.jain;
  out.norm_entropy = lb.entropy;
  return out;
}

MetricComparison compare_metric(double estimate, double se, std::optional<double> bound) {
  MetricComparison out;
  out.estimate = estimate;
  out.se = se;
  out.bound = bound;
  if (bound) {
    out.slack = *bound - estimate;
    out.pass = estimate <= *bound + 3.0 * se;
  }
  return out;
}

ComparisonRow compare(const EstimateReport& estimates, const BoundReport& bounds) {
  if (!(estimates.params == bounds.params)) {
    throw ParameterError("estimate and bound reports were produced for different parameters");
  }
  ComparisonRow row;
  row.transmission = compare_metric(estimates.p_t_hat,
                                    standard_error(estimates.p_t_hat, estimates.trials),
                                    bounds.bound_t);
  std::optional<double> bound_s;
  if (bounds.bound_s) {
    bound_s = bounds.bound_s->effective();
  }
  row.secrecy = compare_metric(estimates.p_s_hat,
                               standard_error(estimates.p_s_hat, estimates.trials), bound_s);
  return row;
}

}  // namespace relaysec
