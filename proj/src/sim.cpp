#include "qcms/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qcms {

Scenario make_scenario(int n_channels, ChannelSet a, ChannelSet b) {
  if (n_channels < 2) throw std::domain_error("need at least 2 channels in the network");
  for (const ChannelSet* set : {&a, &b}) {
    if (set->empty()) throw std::domain_error("available channel set is empty");
    if (set->back() > n_channels)
      throw std::domain_error("available channels must lie in [1," + std::to_string(n_channels) + "]");
  }
  if (intersection(a, b).empty())
    throw std::domain_error("users share no common channel; rendezvous is impossible");
  return Scenario{n_channels, std::move(a), std::move(b)};
}

std::size_t channels_for_ratio(double theta, int n_channels) {
  if (!(theta >= 0) || !std::isfinite(theta)) throw std::domain_error("channel ratio must be >= 0");
  return static_cast<std::size_t>(std::llround(theta * n_channels));
}

Scenario sample_scenario(int n_channels, double theta_a, double theta_b, std::size_t overlap, Rng& rng) {
  if (n_channels < 2) throw std::domain_error("need at least 2 channels in the network");
  const std::size_t size_a = channels_for_ratio(theta_a, n_channels);
  const std::size_t size_b = channels_for_ratio(theta_b, n_channels);
  if (size_a < 1 || size_b < 1) throw std::domain_error("channel ratio yields an empty set");
  if (overlap < 1) throw std::domain_error("overlap must be at least 1 for rendezvous to be possible");
  if (overlap > std::min(size_a, size_b))
    throw std::domain_error("overlap exceeds a channel set size");
  if (size_a + size_b - overlap > static_cast<std::size_t>(n_channels))
    throw std::domain_error("network too small for the requested sets and overlap");

  std::vector<Channel> pool(static_cast<std::size_t>(n_channels));
  std::iota(pool.begin(), pool.end(), 1);
  std::shuffle(pool.begin(), pool.end(), rng);

  auto common = pool.begin() + static_cast<std::ptrdiff_t>(overlap);
  auto only_a = common + static_cast<std::ptrdiff_t>(size_a - overlap);
  auto only_b = only_a + static_cast<std::ptrdiff_t>(size_b - overlap);

  std::vector<Channel> a(pool.begin(), only_a);
  std::vector<Channel> b(pool.begin(), common);
  b.insert(b.end(), only_a, only_b);
  return Scenario{n_channels, ChannelSet(std::move(a)), ChannelSet(std::move(b))};
}

std::optional<TrialResult> run_trial(const HopSchedule& a, const HopSchedule& b, std::uint64_t drift,
                                     const WildcardPolicy& policy, std::uint64_t t_max) {
  if (a.n_channels() != b.n_channels())
    throw std::domain_error("schedules were built for different channel counts");
  if (t_max < 1) throw std::domain_error("slot budget must be positive");
  auto hit = first_meeting([&](std::uint64_t t) { return channel_at(a, t, policy); },
                           [&](std::uint64_t t) { return channel_at(b, t, policy); }, drift, t_max);
  if (!hit) return std::nullopt;
  return TrialResult{hit->first, hit->second, drift, 0};
}

Channel random_baseline_channel(const ChannelSet& channels, Rng& rng) {
  if (channels.empty()) throw std::domain_error("available channel set is empty");
  std::uniform_int_distribution<std::size_t> pick(0, channels.size() - 1);
  return channels[pick(rng)];
}

std::optional<TrialResult> run_baseline_trial(const ChannelSet& a, const ChannelSet& b, Rng& rng,
                                              std::uint64_t t_max) {
  auto draw_a = [&](std::uint64_t) { return Hop::on(random_baseline_channel(a, rng)); };
  auto draw_b = [&](std::uint64_t) { return Hop::on(random_baseline_channel(b, rng)); };
  auto hit = first_meeting(draw_a, draw_b, 0, t_max);
  if (!hit) return std::nullopt;
  return TrialResult{hit->first, hit->second, 0, 0};
}

std::vector<std::uint32_t> ttr_by_drift(const HopSchedule& a, const HopSchedule& b, std::uint64_t drifts,
                                        std::uint64_t t_max) {
  std::vector<std::uint32_t> ttr(drifts, 0);
  if (drifts == 0 || t_max == 0) return ttr;

  const ChannelSet common = intersection(a.channels(), b.channels());
  std::vector<int> index(static_cast<std::size_t>(a.n_channels()) + 1, -1);
  for (std::size_t i = 0; i < common.size(); ++i) index[common[i]] = static_cast<int>(i);

  // One bit per slot of A's stream for every common channel.
  const std::uint64_t span = drifts + t_max;
  const std::size_t stream_words = span / 64 + 2;
  std::vector<std::vector<std::uint64_t>> stream(common.size(), std::vector<std::uint64_t>(stream_words, 0));
  for (std::uint64_t s = 0; s < span; ++s) {
    Slot slot = a.slot_at(s);
    if (slot.is_wildcard()) continue;
    if (int g = index[slot.channel()]; g >= 0) stream[g][s / 64] |= std::uint64_t{1} << (s % 64);
  }

  const std::size_t drift_words = (drifts + 63) / 64;
  std::vector<std::uint64_t> open(drift_words, ~std::uint64_t{0});
  if (drifts % 64) open.back() = (std::uint64_t{1} << (drifts % 64)) - 1;
  std::uint64_t remaining = drifts;

  for (std::uint64_t t = 0; t < t_max && remaining > 0; ++t) {
    Slot slot = b.slot_at(t);
    if (slot.is_wildcard()) continue;
    const int g = index[slot.channel()];
    if (g < 0) continue;
    const auto& bits = stream[g];
    const std::size_t base = t / 64;
    const unsigned shift = t % 64;
    for (std::size_t w = 0; w < drift_words; ++w) {
      if (!open[w]) continue;
      std::uint64_t window = bits[base + w] >> shift;
      if (shift) window |= bits[base + w + 1] << (64 - shift);
      std::uint64_t hit = open[w] & window;
      if (!hit) continue;
      open[w] &= ~hit;
      remaining -= static_cast<std::uint64_t>(std::popcount(hit));
      while (hit) {
        const int bit = std::countr_zero(hit);
        ttr[w * 64 + static_cast<std::size_t>(bit)] = static_cast<std::uint32_t>(t + 1);
        hit &= hit - 1;
      }
    }
  }
  return ttr;
}

BoundReport verify_bound(const Scenario& scenario, const VerifyOptions& options) {
  if (intersection(scenario.a, scenario.b).empty())
    throw std::domain_error("users share no common channel; rendezvous is impossible");

  BoundReport report;
  report.bound = mttr_bound(scenario.n_a(), scenario.n_b(), scenario.n_channels);
  for (Channel ra : scenario.a) {
    auto sched_a = HopSchedule::build(scenario.n_channels, scenario.a, ra, options.perm);
    std::uint64_t drifts = sched_a.transient_length() + sched_a.full_period();
    if (options.drift_limit && *options.drift_limit < drifts) {
      drifts = *options.drift_limit;
      report.exhaustive = false;
    }
    for (Channel rb : scenario.b) {
      auto sched_b = HopSchedule::build(scenario.n_channels, scenario.b, rb, options.perm);
      auto ttr = ttr_by_drift(sched_a, sched_b, drifts, report.bound);
      report.trials += drifts;
      for (std::uint64_t d = 0; d < drifts; ++d) {
        const bool missed = ttr[d] == 0;
        if (missed) ++report.violations;
        const std::uint64_t value = missed ? report.bound + 1 : ttr[d];
        if (value > report.max_ttr_found || report.worst_ra == 0) {
          report.max_ttr_found = std::max(report.max_ttr_found, value);
          report.worst_ra = ra;
          report.worst_rb = rb;
          report.worst_drift = d;
        }
      }
    }
  }
  return report;
}

void TtrAccumulator::add(std::uint64_t ttr) {
  ++count_;
  sum_ += ttr;
  sum_sq_ += static_cast<unsigned __int128>(ttr) * ttr;
  max_ = std::max(max_, ttr);
}

void TtrAccumulator::merge(const TtrAccumulator& other) {
  count_ += other.count_;
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
  max_ = std::max(max_, other.max_);
  failures_ += other.failures_;
}

SummaryStats TtrAccumulator::summary() const {
  SummaryStats s;
  s.trials = count_;
  s.mttr_observed = max_;
  s.budget_exceeded = failures_;
  if (count_ == 0) return s;
  const auto n = static_cast<long double>(count_);
  const long double mean = static_cast<long double>(sum_) / n;
  s.ettr = static_cast<double>(mean);
  if (count_ > 1) {
    const long double var = (static_cast<long double>(sum_sq_) - n * mean * mean) / (n - 1);
    s.ttr_stddev = static_cast<double>(std::sqrt(std::max<long double>(var, 0)));
    s.ci95_halfwidth = 1.96 * s.ttr_stddev / std::sqrt(static_cast<double>(count_));
  }
  return s;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over (master, index)
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

unsigned worker_count(unsigned requested, std::uint64_t trials) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(trials, 1)));
}

template <class TrialFn>
SummaryStats run_parallel(std::uint64_t trials, unsigned threads, TrialFn trial) {
  const unsigned workers = worker_count(threads, trials);
  std::vector<TtrAccumulator> partial(workers);
  auto work = [&](unsigned id) {
    for (std::uint64_t i = id; i < trials; i += workers) trial(i, partial[id]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
  }
  TtrAccumulator total;
  for (const auto& p : partial) total.merge(p);
  return total.summary();
}

}  // namespace

SummaryStats monte_carlo(const MonteCarloConfig& config, std::uint64_t master_seed) {
  if (config.trials < 1) throw std::domain_error("need at least one trial");
  // Validates the parameters before any work starts.
  Rng probe(master_seed);
  auto first = sample_scenario(config.n_channels, config.theta_a, config.theta_b, config.overlap, probe);
  const std::uint64_t t_max =
      config.t_max ? config.t_max : mttr_bound(first.n_a(), first.n_b(), config.n_channels);

  return run_parallel(config.trials, config.threads, [&](std::uint64_t i, TtrAccumulator& acc) {
    Rng rng(derive_seed(master_seed, i));
    auto sc = sample_scenario(config.n_channels, config.theta_a, config.theta_b, config.overlap, rng);
    const Channel ra = random_baseline_channel(sc.a, rng);
    const Channel rb = random_baseline_channel(sc.b, rng);
    auto perm_a = PermutationPolicy::ascending();
    auto perm_b = PermutationPolicy::ascending();
    if (config.perm == PermutationPolicy::Mode::Shuffled) {
      perm_a = PermutationPolicy::shuffled(rng());
      perm_b = PermutationPolicy::shuffled(rng());
    }
    auto sched_a = HopSchedule::build(sc.n_channels, sc.a, ra, perm_a);
    auto sched_b = HopSchedule::build(sc.n_channels, sc.b, rb, perm_b);
    std::uniform_int_distribution<std::uint64_t> drift(0, config.drift_max);
    const std::uint64_t d = drift(rng);
    auto policy = config.wildcard == WildcardMode::RandomFill ? WildcardPolicy::random_fill(rng)
                                                              : WildcardPolicy::no_match();
    if (auto r = run_trial(sched_a, sched_b, d, policy, t_max))
      acc.add(r->ttr);
    else
      acc.add_failure();
  });
}

SummaryStats baseline_monte_carlo(const ChannelSet& a, const ChannelSet& b, std::uint64_t trials,
                                  std::uint64_t master_seed, unsigned threads) {
  if (intersection(a, b).empty())
    throw std::domain_error("users share no common channel; rendezvous is impossible");
  constexpr std::uint64_t kBudget = 100'000'000;
  return run_parallel(trials, threads, [&](std::uint64_t i, TtrAccumulator& acc) {
    Rng rng(derive_seed(master_seed, i));
    if (auto r = run_baseline_trial(a, b, rng, kBudget))
      acc.add(r->ttr);
    else
      acc.add_failure();
  });
}

}  // namespace qcms
