#include "qcms/properties.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qcms/coding.hpp"
#include "qcms/engine.hpp"

namespace qcms {

namespace {

void record(PropertyOutcome& out, bool ok, const std::string& what) {
  ++out.checked;
  if (ok) return;
  if (out.violations++ == 0) out.first_violation = what;
}

// Calls fn(digits) for every concatenation of exactly `pairs` coded pairs.
template <class Fn>
void for_each_concatenation(int pairs, Fn&& fn) {
  std::vector<int> digits(static_cast<std::size_t>(2 * pairs));
  std::uint64_t total = 1;
  for (int i = 0; i < pairs; ++i) total *= 16;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int p = pairs - 1; p >= 0; --p, c /= 16) {
      auto [hi, lo] = code_pair(static_cast<int>(c % 16 / 4), static_cast<int>(c % 4));
      digits[2 * p] = hi;
      digits[2 * p + 1] = lo;
    }
    fn(digits);
  }
}

std::string digits_string(const std::vector<int>& digits) {
  std::string s;
  for (int d : digits) s.push_back(static_cast<char>('0' + d));
  return s;
}

bool is_nonzero_digit(BootstrapSymbol s) {
  auto d = symbol_digit(s);
  return d && *d != 0;
}

}  // namespace

PropertyCaps PropertyCaps::none() {
  PropertyCaps caps;
  caps.coding_pairs = 0;
  caps.bootstrap_ns.clear();
  caps.max_n_roundtrip = 0;
  caps.r_column_drift_max = -1;
  caps.prime_max = 0;
  caps.length_table_max_n = 0;
  caps.pair_coverage_sizes.clear();
  caps.engine_checks = false;
  return caps;
}

bool PropertyReport::pass() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.pass(); });
}

std::uint64_t PropertyReport::violations() const {
  std::uint64_t n = 0;
  for (const auto& o : outcomes) n += o.violations;
  return n;
}

PropertyOutcome check_code_table() {
  PropertyOutcome out{"code_table_bijective"};
  std::vector<std::pair<int, int>> image;
  for (int hi = 0; hi < 4; ++hi)
    for (int lo = 0; lo < 4; ++lo) {
      auto [a, b] = code_pair(hi, lo);
      image.emplace_back(a, b);
      record(out, a != 0 && a != b, "code word " + std::to_string(a) + std::to_string(b));
      record(out, decode_pair(a, b) == std::pair{hi, lo}, "decode of " + std::to_string(hi) + std::to_string(lo));
    }
  std::sort(image.begin(), image.end());
  record(out, std::adjacent_find(image.begin(), image.end()) == image.end(), "duplicate code word");
  return out;
}

PropertyOutcome check_no_triples(int max_pairs) {
  PropertyOutcome out{"no_triple_digits"};
  for (int pairs = 1; pairs <= max_pairs; ++pairs)
    for_each_concatenation(pairs, [&](const std::vector<int>& d) {
      bool ok = true;
      for (std::size_t i = 2; i < d.size(); ++i) ok &= !(d[i] == d[i - 1] && d[i] == d[i - 2]);
      record(out, ok, digits_string(d));
    });
  return out;
}

PropertyOutcome check_even_doubles(int max_pairs) {
  PropertyOutcome out{"doubles_start_even"};
  for (int pairs = 1; pairs <= max_pairs; ++pairs)
    for_each_concatenation(pairs, [&](const std::vector<int>& d) {
      bool ok = true;
      // zero-based index i is 1-based position i+1, which must be even
      for (std::size_t i = 0; i + 1 < d.size(); ++i)
        if (d[i] == d[i + 1]) ok &= (i + 1) % 2 == 0;
      record(out, ok, digits_string(d));
    });
  return out;
}

namespace {

template <class Accept>
PropertyOutcome rotation_overlap(std::string name, const std::vector<int>& ns, Accept accept) {
  PropertyOutcome out{std::move(name)};
  for (int n : ns) {
    std::vector<BootstrapSequence> all;
    for (Channel r = 1; r <= n; ++r) all.push_back(build_bootstrap(n, r));
    const int len = bootstrap_length(n);
    for (std::size_t r1 = 0; r1 < all.size(); ++r1)
      for (std::size_t r2 = 0; r2 < all.size(); ++r2)
        for (int d = 1; d < len; ++d) {
          auto s = rotate(all[r2], d);
          bool zero_vs_digit = false;
          bool digit_vs_zero = false;
          for (int i = 0; i < len; ++i) {
            const auto b1 = all[r1][static_cast<std::size_t>(i)];
            zero_vs_digit |= b1 == BootstrapSymbol::D0 && is_nonzero_digit(s[i]);
            digit_vs_zero |= s[i] == BootstrapSymbol::D0 && is_nonzero_digit(b1);
          }
          std::ostringstream what;
          what << "N=" << n << " R1=" << r1 + 1 << " R2=" << r2 + 1 << " d=" << d;
          record(out, accept(zero_vs_digit, digit_vs_zero), what.str());
        }
  }
  return out;
}

}  // namespace

PropertyOutcome check_rotation_overlap(const std::vector<int>& ns) {
  return rotation_overlap("rotation_overlap", ns, [](bool a, bool b) { return a && b; });
}

PropertyOutcome check_rotation_overlap_either(const std::vector<int>& ns) {
  return rotation_overlap("rotation_overlap_either", ns, [](bool a, bool b) { return a || b; });
}

PropertyOutcome check_roundtrip(int max_n) {
  PropertyOutcome out{"quaternary_roundtrip"};
  for (int n = 2; n <= max_n; ++n)
    for (Channel r = 1; r <= n; ++r) {
      auto q = to_quaternary(r, n);
      int value = 0;
      for (int d : q.digits) value = value * 4 + d;
      bool ok = value == r && q.digits.size() % 2 == 0;
      auto quin = to_quinary(q);
      for (std::size_t i = 0; i < quin.digits.size(); i += 2)
        ok &= decode_pair(quin.digits[i], quin.digits[i + 1]) == std::pair{q.digits[i], q.digits[i + 1]};
      record(out, ok, "N=" + std::to_string(n) + " R=" + std::to_string(r));
    }
  return out;
}

PropertyOutcome check_length_bound(int max_n) {
  PropertyOutcome out{"bootstrap_length_bound"};
  for (int n = 2; n <= max_n; ++n) {
    const int len = bootstrap_length(n);
    bool ok = len % 2 == 1 && static_cast<int>(build_bootstrap(n, n).length()) == len;
    if (n <= 1024) ok &= len <= 9;
    record(out, ok, "N=" + std::to_string(n));
  }
  return out;
}

PropertyOutcome check_length_table(int max_n) {
  PropertyOutcome out{"lambda_length_table"};
  for (int n = 1; n <= max_n; ++n) {
    auto set = ChannelSet::range(1, n);
    const auto p = smallest_prime_geq(std::max(n, 5));
    for (int lambda = 0; lambda <= 4; ++lambda) {
      auto seq = gen_lambda_type(set, lambda);
      bool ok = static_cast<std::int64_t>(seq.length()) == p + kLambdaOffset[lambda];
      std::vector<Channel> fixed;
      for (std::size_t i = 0; i < seq.length(); ++i) {
        const bool should_be_fixed = i < set.size();
        ok &= seq.slots[i].is_wildcard() != should_be_fixed;
        if (!seq.slots[i].is_wildcard()) fixed.push_back(seq.slots[i].channel());
      }
      std::sort(fixed.begin(), fixed.end());
      ok &= fixed == set.values();
      record(out, ok, "n=" + std::to_string(n) + " lambda=" + std::to_string(lambda));
    }
  }
  return out;
}

PropertyOutcome check_r_column_rendezvous(int drift_max) {
  PropertyOutcome out{"r_column_rendezvous"};
  const Channel r = 1;
  const auto seq = gen_r_type(r);
  auto is_r = [&](std::uint64_t pos) {
    const Slot s = seq.slots[r_column_position(pos + 1) - 1];
    return !s.is_wildcard() && s.channel() == r;
  };
  for (int d = 0; d <= drift_max; ++d) {
    bool met = false;
    for (std::uint64_t k = 0; k < 5 && !met; ++k) met = is_r(k + static_cast<std::uint64_t>(d)) && is_r(k);
    record(out, met, "drift=" + std::to_string(d));
  }
  return out;
}

PropertyOutcome check_coprime_lengths(int prime_max) {
  PropertyOutcome out{"coprime_lengths"};
  for (std::int64_t p = 5; p <= prime_max; ++p) {
    if (!is_prime(p)) continue;
    bool ok = true;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) ok &= std::gcd(p + kLambdaOffset[i], p + kLambdaOffset[j]) == 1;
    record(out, ok, "P=" + std::to_string(p));
  }
  return out;
}

PropertyOutcome check_pair_coverage(const Subsequence& a, const Subsequence& b) {
  PropertyOutcome out{"pair_coverage"};
  const std::size_t ka = a.length();
  const std::size_t kb = b.length();
  std::vector<std::pair<Channel, Channel>> expected;
  for (const auto& x : a.slots)
    for (const auto& y : b.slots)
      if (!x.is_wildcard() && !y.is_wildcard()) expected.emplace_back(x.channel(), y.channel());
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());

  for (std::size_t offset = 0; offset < ka * kb; ++offset) {
    std::vector<std::pair<Channel, Channel>> seen;
    for (std::size_t s = 0; s < ka * kb; ++s) {
      const Slot x = a.slots[(s + offset) % ka];
      const Slot y = b.slots[s % kb];
      if (!x.is_wildcard() && !y.is_wildcard()) seen.emplace_back(x.channel(), y.channel());
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    record(out, seen == expected,
           "K=(" + std::to_string(ka) + "," + std::to_string(kb) + ") offset=" + std::to_string(offset));
  }
  return out;
}

PropertyOutcome check_pair_coverage_sizes(const std::vector<int>& sizes) {
  PropertyOutcome out{"pair_coverage"};
  for (int n : sizes)
    if (n < 1) throw std::domain_error("pair coverage sizes must be positive");
  for (int na : sizes)
    for (int nb : sizes) {
      // Disjoint channel ranges so every (x, y) pair is distinguishable.
      auto ca = ChannelSet::range(1, na);
      auto cb = ChannelSet::range(101, 100 + nb);
      for (int la = 0; la <= 4; ++la)
        for (int lb = 0; lb <= 4; ++lb) {
          auto sa = gen_lambda_type(ca, la);
          auto sb = gen_lambda_type(cb, lb);
          if (std::gcd(sa.length(), sb.length()) != 1) continue;
          auto part = check_pair_coverage(sa, sb);
          out.checked += part.checked;
          if (part.violations && out.violations == 0) out.first_violation = part.first_violation;
          out.violations += part.violations;
        }
    }
  return out;
}

PropertyOutcome check_engine_column_r(const std::vector<std::pair<int, ChannelSet>>& cases) {
  PropertyOutcome out{"column_r_positions"};
  for (const auto& [n, set] : cases)
    for (Channel r : set) {
      auto sched = HopSchedule::build(n, set, r);
      const std::uint64_t cols = sched.columns();
      for (std::uint64_t row = 1; row <= 100; ++row) {
        const Hop h = channel_at(sched, (row - 1) * cols, WildcardPolicy::no_match());
        const bool expect_r = row <= 5 || (row >= 10 && row % 5 == 0);
        const bool got_r = !h.is_no_match() && h.channel() == r;
        record(out, expect_r == got_r && (got_r || h.is_no_match()),
               "N=" + std::to_string(n) + " R=" + std::to_string(r) + " row=" + std::to_string(row));
      }
    }
  return out;
}

PropertyOutcome check_engine_periodicity(const std::vector<std::pair<int, ChannelSet>>& cases) {
  PropertyOutcome out{"schedule_periodicity"};
  for (const auto& [n, set] : cases)
    for (Channel r : set) {
      auto sched = HopSchedule::build(n, set, r);
      const std::uint64_t start = sched.transient_length();
      const std::uint64_t period = sched.full_period();
      bool ok = true;
      for (std::uint64_t t = start; t < start + period && ok; ++t) ok = sched.slot_at(t) == sched.slot_at(t + period);
      record(out, ok, "N=" + std::to_string(n) + " R=" + std::to_string(r));
    }
  return out;
}

PropertyReport run_property_suite(const PropertyCaps& caps) {
  PropertyReport report;
  auto add = [&](PropertyOutcome o) {
    if (o.checked > 0) report.outcomes.push_back(std::move(o));
  };
  if (caps.coding_pairs > 0) {
    add(check_code_table());
    add(check_no_triples(caps.coding_pairs));
    add(check_even_doubles(caps.coding_pairs));
  }
  add(check_rotation_overlap(caps.bootstrap_ns));
  add(check_rotation_overlap_either(caps.bootstrap_ns));
  add(check_roundtrip(caps.max_n_roundtrip));
  add(check_length_bound(caps.max_n_roundtrip));
  add(check_length_table(caps.length_table_max_n));
  add(check_r_column_rendezvous(caps.r_column_drift_max));
  add(check_coprime_lengths(caps.prime_max));
  add(check_pair_coverage_sizes(caps.pair_coverage_sizes));
  if (caps.engine_checks) {
    const std::vector<std::pair<int, ChannelSet>> cases{
        {200, ChannelSet::range(1, 6)}, {200, {1, 7, 8, 9}}, {4, {2}}, {16, {1, 16}}};
    add(check_engine_column_r(cases));
    add(check_engine_periodicity(cases));
  }
  return report;
}

}  // namespace qcms
