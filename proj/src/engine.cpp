#include "qcms/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qcms {

HopSchedule HopSchedule::build(int n_channels, ChannelSet channels, Channel r,
                               const PermutationPolicy& perm) {
  if (n_channels < 2) throw std::domain_error("need at least 2 channels in the network");
  if (channels.empty()) throw std::domain_error("available channel set is empty");
  if (channels.front() < 1 || channels.back() > n_channels)
    throw std::domain_error("available channels must lie in [1," + std::to_string(n_channels) + "]");
  if (!channels.contains(r))
    throw std::domain_error("selected channel " + std::to_string(r) + " is not available");

  HopSchedule sched(n_channels, std::move(channels), r, build_bootstrap(n_channels, r));
  std::uint64_t period = 5;
  for (auto s : sched.bootstrap_.symbols()) {
    auto& slot = sched.subsequences_[symbol_index(s)];
    if (slot) continue;
    if (s == BootstrapSymbol::RMarker) {
      slot = gen_r_type(r);
    } else {
      slot = gen_lambda_type(sched.channels_, *symbol_digit(s), perm);
      period = std::lcm(period, static_cast<std::uint64_t>(slot->length()));
    }
  }
  sched.row_period_ = period;
  return sched;
}

Slot HopSchedule::slot_at(std::uint64_t t) const {
  const std::uint64_t cols = columns();
  const auto column = static_cast<std::size_t>(t % cols);
  const std::uint64_t row = t / cols + 1;
  const auto& seq = *subsequences_[symbol_index(bootstrap_[column])];
  if (seq.is_r_type()) return seq.slots[r_column_position(row) - 1];
  return seq.slots[static_cast<std::size_t>((row - 1) % seq.length())];
}

Hop channel_at(const HopSchedule& sched, std::uint64_t t, const WildcardPolicy& policy) {
  Slot slot = sched.slot_at(t);
  if (!slot.is_wildcard()) return Hop::on(slot.channel());
  if (policy.mode() == WildcardPolicy::Mode::NoMatch) return Hop::no_match();
  const auto& chans = sched.channels();
  std::uniform_int_distribution<std::size_t> pick(0, chans.size() - 1);
  return Hop::on(chans[pick(*policy.rng())]);
}

std::uint64_t mttr_bound(std::size_t n_a, std::size_t n_b, int n_channels) {
  if (n_a < 1 || n_b < 1) throw std::domain_error("channel set sizes must be positive");
  if (n_channels < 2) throw std::domain_error("need at least 2 channels in the network");
  const std::uint64_t pa = base_prime(n_a);
  const std::uint64_t pb = base_prime(n_b);
  const std::uint64_t len = bootstrap_length(n_channels);
  return std::max((pa + 4) * (pb + 6), (pa + 6) * (pb + 4)) * len;
}

}  // namespace qcms
