#pragma once

// Two-user rendezvous trials, exhaustive bound verification and Monte Carlo
// TTR statistics.

#include <cstdint>
#include <optional>
#include <string>

#include "qcms/engine.hpp"
#include "qcms/subseq.hpp"

namespace qcms {

struct Scenario {
  int n_channels = 0;
  ChannelSet a;
  ChannelSet b;

  std::size_t n_a() const { return a.size(); }
  std::size_t n_b() const { return b.size(); }
  std::size_t overlap() const { return intersection(a, b).size(); }
  double theta_a() const { return static_cast<double>(n_a()) / n_channels; }
  double theta_b() const { return static_cast<double>(n_b()) / n_channels; }
};

/// Validates both sets against [1,N] and requires at least one common channel.
Scenario make_scenario(int n_channels, ChannelSet a, ChannelSet b);

/// Set size round(theta * N).
std::size_t channels_for_ratio(double theta, int n_channels);

/// Draws the `overlap` common channels first, then the private remainders,
/// all uniformly without replacement from [1,N].
Scenario sample_scenario(int n_channels, double theta_a, double theta_b, std::size_t overlap, Rng& rng);

struct TrialResult {
  std::uint64_t ttr = 0;  // slots from the later user's start, >= 1
  Channel channel = 0;
  std::uint64_t drift = 0;
  std::uint64_t seed = 0;
};

/// Least t >= 1 with hop_a(t + drift - 1) meeting hop_b(t - 1), searching t <= t_max.
/// Returns (t, channel).
template <class HopA, class HopB>
std::optional<std::pair<std::uint64_t, Channel>> first_meeting(HopA&& hop_a, HopB&& hop_b,
                                                               std::uint64_t drift,
                                                               std::uint64_t t_max) {
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    Hop a = hop_a(t + drift - 1);
    Hop b = hop_b(t - 1);
    if (meets(a, b)) return std::pair{t, a.channel()};
  }
  return std::nullopt;
}

/// User A leads by `drift` slots. Under RandomFill both users draw their
/// wildcards from the policy's generator, A before B in every slot.
/// Returns nullopt if no rendezvous happens within t_max slots.
std::optional<TrialResult> run_trial(const HopSchedule& a, const HopSchedule& b, std::uint64_t drift,
                                     const WildcardPolicy& policy, std::uint64_t t_max);

/// Uniform draw from the set; one call per slot for the random baseline.
Channel random_baseline_channel(const ChannelSet& channels, Rng& rng);

std::optional<TrialResult> run_baseline_trial(const ChannelSet& a, const ChannelSet& b, Rng& rng,
                                              std::uint64_t t_max);

struct BoundReport {
  std::uint64_t max_ttr_found = 0;
  std::uint64_t bound = 0;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;  // trials with no rendezvous within the bound
  bool exhaustive = true;        // false when the drift range was capped
  Channel worst_ra = 0;
  Channel worst_rb = 0;
  std::uint64_t worst_drift = 0;

  bool pass() const { return violations == 0 && max_ttr_found <= bound; }
};

struct VerifyOptions {
  PermutationPolicy perm = PermutationPolicy::ascending();
  /// Caps the number of drifts tested per (R_A, R_B) pair.
  std::optional<std::uint64_t> drift_limit;
};

/// Worst-case TTR with adversarial (NoMatch) wildcards, over every R_A in C_A,
/// R_B in C_B and every drift in [0, transient_A + full_period_A).
BoundReport verify_bound(const Scenario& scenario, const VerifyOptions& options = {});

/// For a fixed pair of schedules: TTR (NoMatch) for every drift in [0, drifts),
/// 0 where no rendezvous happens within t_max. All drifts are swept together
/// with per-channel bitsets.
std::vector<std::uint32_t> ttr_by_drift(const HopSchedule& a, const HopSchedule& b, std::uint64_t drifts,
                                        std::uint64_t t_max);

struct SummaryStats {
  std::uint64_t trials = 0;
  double ettr = 0;
  std::uint64_t mttr_observed = 0;
  double ttr_stddev = 0;
  double ci95_halfwidth = 0;
  std::uint64_t budget_exceeded = 0;  // trials excluded because they never met
};

/// Exact integer accumulation; merging is order-insensitive.
class TtrAccumulator {
 public:
  void add(std::uint64_t ttr);
  void add_failure() { ++failures_; }
  void merge(const TtrAccumulator& other);
  SummaryStats summary() const;

 private:
  std::uint64_t count_ = 0;
  std::uint64_t sum_ = 0;
  unsigned __int128 sum_sq_ = 0;
  std::uint64_t max_ = 0;
  std::uint64_t failures_ = 0;
};

enum class WildcardMode { RandomFill, NoMatch };

struct MonteCarloConfig {
  int n_channels = 200;
  double theta_a = 0.3;
  double theta_b = 0.4;
  std::size_t overlap = 1;
  std::uint64_t trials = 30000;
  std::uint64_t drift_max = 50;
  WildcardMode wildcard = WildcardMode::RandomFill;
  /// Shuffled draws a fresh arrangement per user and trial.
  PermutationPolicy::Mode perm = PermutationPolicy::Mode::Shuffled;
  /// 0 means the guaranteed bound for the scenario sizes.
  std::uint64_t t_max = 0;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Independent per-trial seed derived from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Each trial samples a scenario, picks R_A and R_B uniformly, draws the drift
/// uniformly from [0, drift_max] and runs one trial. Results do not depend on
/// the thread count.
SummaryStats monte_carlo(const MonteCarloConfig& config, std::uint64_t master_seed);

/// Random-baseline mean TTR for fixed sets.
SummaryStats baseline_monte_carlo(const ChannelSet& a, const ChannelSet& b, std::uint64_t trials,
                                  std::uint64_t master_seed, unsigned threads = 0);

}  // namespace qcms
