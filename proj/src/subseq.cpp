#include "qcms/subseq.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <stdexcept>

namespace qcms {

namespace {

Channel parse_channel(std::string_view token) {
  Channel value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
    throw std::domain_error("bad channel index '" + std::string(token) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

ChannelSet::ChannelSet(std::initializer_list<Channel> channels)
    : ChannelSet(std::vector<Channel>(channels)) {}

ChannelSet::ChannelSet(std::vector<Channel> channels) : channels_(std::move(channels)) {
  std::sort(channels_.begin(), channels_.end());
  if (std::adjacent_find(channels_.begin(), channels_.end()) != channels_.end())
    throw std::domain_error("channel set contains duplicates");
  if (!channels_.empty() && channels_.front() < 1)
    throw std::domain_error("channel indices start at 1");
}

ChannelSet ChannelSet::parse(std::string_view text) {
  std::vector<Channel> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto token = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (token.empty()) throw std::domain_error("empty item in channel list");
    if (auto dash = token.find('-'); dash != std::string_view::npos) {
      Channel lo = parse_channel(trim(token.substr(0, dash)));
      Channel hi = parse_channel(trim(token.substr(dash + 1)));
      if (lo > hi) throw std::domain_error("descending channel range '" + std::string(token) + "'");
      for (Channel c = lo; c <= hi; ++c) out.push_back(c);
    } else {
      out.push_back(parse_channel(token));
    }
  }
  return ChannelSet(std::move(out));
}

ChannelSet ChannelSet::range(Channel lo, Channel hi) {
  std::vector<Channel> out;
  for (Channel c = lo; c <= hi; ++c) out.push_back(c);
  return ChannelSet(std::move(out));
}

bool ChannelSet::contains(Channel c) const {
  return std::binary_search(channels_.begin(), channels_.end(), c);
}

std::string ChannelSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(channels_[i]);
  }
  return out;
}

ChannelSet intersection(const ChannelSet& a, const ChannelSet& b) {
  std::vector<Channel> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return ChannelSet(std::move(out));
}

std::string Subsequence::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ',';
    out += slots[i].is_wildcard() ? std::string("*") : std::to_string(slots[i].channel());
  }
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::int64_t smallest_prime_geq(std::int64_t m) {
  if (m < 1) throw std::domain_error("smallest_prime_geq requires m >= 1");
  while (!is_prime(m)) ++m;
  return m;
}

int base_prime(std::size_t n_channels) {
  return static_cast<int>(smallest_prime_geq(std::max<std::int64_t>(5, static_cast<std::int64_t>(n_channels))));
}

int lambda_length(std::size_t n_channels, int lambda) {
  if (lambda < 0 || lambda > 4) throw std::domain_error("lambda must be in [0,4]");
  return base_prime(n_channels) + kLambdaOffset[lambda];
}

Subsequence gen_r_type(Channel r) {
  Subsequence seq;
  seq.kind = BootstrapSymbol::RMarker;
  seq.slots.reserve(10);
  for (int t = 1; t <= 10; ++t)
    seq.slots.push_back(t <= 5 || t == 10 ? Slot::fixed(r) : Slot::wildcard());
  return seq;
}

Subsequence gen_lambda_type(const ChannelSet& channels, int lambda, const PermutationPolicy& perm) {
  if (channels.empty()) throw std::domain_error("lambda-type subsequence needs channels");
  const int k = lambda_length(channels.size(), lambda);

  std::vector<Channel> order = channels.values();
  if (perm.mode == PermutationPolicy::Mode::Shuffled) {
    // Each lambda gets its own arrangement from the same seed.
    std::seed_seq seq{static_cast<std::uint32_t>(perm.seed), static_cast<std::uint32_t>(perm.seed >> 32),
                      static_cast<std::uint32_t>(lambda)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
  }

  Subsequence seq;
  seq.kind = digit_symbol(lambda);
  seq.slots.reserve(static_cast<std::size_t>(k));
  for (Channel c : order) seq.slots.push_back(Slot::fixed(c));
  seq.slots.resize(static_cast<std::size_t>(k), Slot::wildcard());
  return seq;
}

}  // namespace qcms
