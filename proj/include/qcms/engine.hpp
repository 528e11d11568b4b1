#pragma once

// A user's hop schedule: the virtual CH matrix traversed row by row.

#include <array>
#include <cstdint>
#include <optional>
#include <random>

#include "qcms/coding.hpp"
#include "qcms/subseq.hpp"

namespace qcms {

using Rng = std::mt19937_64;

/// Channel a user occupies in one slot. A no-match hop stands for an
/// adversarial wildcard and never meets anything, itself included.
class Hop {
 public:
  static Hop on(Channel c) { return Hop(c); }
  static Hop no_match() { return Hop(0); }

  bool is_no_match() const { return channel_ == 0; }
  Channel channel() const { return channel_; }

 private:
  explicit Hop(Channel c) : channel_(c) {}
  Channel channel_;
};

/// True when both hops are real channels and equal.
inline bool meets(Hop a, Hop b) { return !a.is_no_match() && a.channel() == b.channel(); }

/// How wildcard slots are resolved at hop time. RandomFill borrows the
/// caller's generator; the policy never owns random state.
class WildcardPolicy {
 public:
  enum class Mode { RandomFill, NoMatch };

  static WildcardPolicy no_match() { return WildcardPolicy(nullptr); }
  static WildcardPolicy random_fill(Rng& rng) { return WildcardPolicy(&rng); }

  Mode mode() const { return rng_ ? Mode::RandomFill : Mode::NoMatch; }
  Rng* rng() const { return rng_; }

 private:
  explicit WildcardPolicy(Rng* rng) : rng_(rng) {}
  Rng* rng_;
};

class HopSchedule {
 public:
  /// Throws std::domain_error if channels is empty, not within [1,N], or r not in channels.
  static HopSchedule build(int n_channels, ChannelSet channels, Channel r,
                           const PermutationPolicy& perm = PermutationPolicy::ascending());

  int n_channels() const { return n_channels_; }
  const ChannelSet& channels() const { return channels_; }
  Channel selected() const { return selected_; }
  const BootstrapSequence& bootstrap() const { return bootstrap_; }
  std::size_t columns() const { return bootstrap_.length(); }

  /// Subsequence for a column type, if that type occurs in the bootstrap.
  const std::optional<Subsequence>& subsequence(BootstrapSymbol s) const {
    return subsequences_[symbol_index(s)];
  }

  /// Slots before the R column enters its 5-periodic part: 5 * L.
  std::uint64_t transient_length() const { return 5 * columns(); }
  /// lcm(5, K over the lambda types present).
  std::uint64_t row_period() const { return row_period_; }
  /// L * row_period.
  std::uint64_t full_period() const { return row_period_ * columns(); }

  /// Template cell at zero-based slot t (row-major traversal).
  Slot slot_at(std::uint64_t t) const;

 private:
  HopSchedule(int n, ChannelSet channels, Channel r, BootstrapSequence bs)
      : n_channels_(n), channels_(std::move(channels)), selected_(r), bootstrap_(std::move(bs)) {}

  int n_channels_;
  ChannelSet channels_;
  Channel selected_;
  BootstrapSequence bootstrap_;
  std::array<std::optional<Subsequence>, kSymbolCount> subsequences_;
  std::uint64_t row_period_ = 5;
};

/// Position (1-based) inside the R-type subsequence used at 1-based row j of column 1.
inline std::size_t r_column_position(std::uint64_t row) {
  return row <= 5 ? static_cast<std::size_t>(row) : static_cast<std::size_t>((row - 6) % 5 + 6);
}

/// Channel the user tries at zero-based slot t.
Hop channel_at(const HopSchedule& sched, std::uint64_t t, const WildcardPolicy& policy);

/// Worst-case TTR guarantee max{(PA+4)(PB+6), (PA+6)(PB+4)} * L.
std::uint64_t mttr_bound(std::size_t n_a, std::size_t n_b, int n_channels);

}  // namespace qcms
