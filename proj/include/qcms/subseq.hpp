#pragma once

// Column templates of the CH matrix: the R-type subsequence and the five
// lambda-type subsequences.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "qcms/coding.hpp"

namespace qcms {

/// Sorted set of distinct channel indices (all >= 1).
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(std::initializer_list<Channel> channels);
  explicit ChannelSet(std::vector<Channel> channels);

  /// Parses "1-6", "1,7,8,9" or a mix like "1-3,9".
  static ChannelSet parse(std::string_view text);
  /// {lo, lo+1, ..., hi}
  static ChannelSet range(Channel lo, Channel hi);

  std::size_t size() const { return channels_.size(); }
  bool empty() const { return channels_.empty(); }
  bool contains(Channel c) const;
  Channel operator[](std::size_t i) const { return channels_[i]; }
  Channel front() const { return channels_.front(); }
  Channel back() const { return channels_.back(); }
  auto begin() const { return channels_.begin(); }
  auto end() const { return channels_.end(); }
  const std::vector<Channel>& values() const { return channels_; }

  std::string to_string() const;

  friend bool operator==(const ChannelSet&, const ChannelSet&) = default;

 private:
  std::vector<Channel> channels_;
};

ChannelSet intersection(const ChannelSet& a, const ChannelSet& b);

class Slot {
 public:
  static Slot fixed(Channel c) { return Slot(c); }
  static Slot wildcard() { return Slot(0); }

  bool is_wildcard() const { return channel_ == 0; }
  /// Only meaningful for fixed slots.
  Channel channel() const { return channel_; }

  friend bool operator==(const Slot&, const Slot&) = default;

 private:
  explicit Slot(Channel c) : channel_(c) {}
  Channel channel_;
};

struct PermutationPolicy {
  enum class Mode { Ascending, Shuffled };
  Mode mode = Mode::Ascending;
  std::uint64_t seed = 0;

  static PermutationPolicy ascending() { return {}; }
  static PermutationPolicy shuffled(std::uint64_t seed) { return {Mode::Shuffled, seed}; }
};

struct Subsequence {
  /// RMarker for the R-type, D0..D4 for the lambda types.
  BootstrapSymbol kind = BootstrapSymbol::RMarker;
  std::vector<Slot> slots;

  std::size_t length() const { return slots.size(); }
  bool is_r_type() const { return kind == BootstrapSymbol::RMarker; }
  /// e.g. "5,5,5,5,5,*,*,*,*,5"
  std::string to_string() const;
};

/// Length offsets added to P for lambda = 0..4.
inline constexpr int kLambdaOffset[5] = {0, 2, 3, 4, 6};

bool is_prime(std::int64_t n);

/// Least prime >= m. Requires m >= 1.
std::int64_t smallest_prime_geq(std::int64_t m);

/// P = smallest_prime_geq(max(n, 5)).
int base_prime(std::size_t n_channels);

/// K = P + offset(lambda).
int lambda_length(std::size_t n_channels, int lambda);

Subsequence gen_r_type(Channel r);

/// Throws std::domain_error for an empty channel set or lambda outside [0,4].
Subsequence gen_lambda_type(const ChannelSet& channels, int lambda,
                            const PermutationPolicy& perm = PermutationPolicy::ascending());

}  // namespace qcms
