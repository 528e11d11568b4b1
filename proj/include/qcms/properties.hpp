#pragma once

// Bounded exhaustive checks of the structural properties the rendezvous
// guarantee rests on.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcms/subseq.hpp"

namespace qcms {

struct PropertyCaps {
  /// Concatenations of 1..coding_pairs coded pairs are enumerated.
  int coding_pairs = 4;
  /// Channel counts for the rotation-overlap and round-trip checks.
  std::vector<int> bootstrap_ns{4, 5, 16, 17, 200, 256};
  /// Round trip and length bound run over every N in [2, max_n_roundtrip].
  int max_n_roundtrip = 1024;
  /// Drifts [0, r_column_drift_max] for the R-column check.
  int r_column_drift_max = 100;
  /// Primes in [5, prime_max] for the coprimality check.
  int prime_max = 1000;
  /// Channel-set sizes n in [1, length_table_max_n] for the length table.
  int length_table_max_n = 64;
  /// Channel-set sizes paired up for the pair-coverage check.
  std::vector<int> pair_coverage_sizes{4, 6, 8};
  /// Run column-1 and periodicity checks on a few reference schedules.
  bool engine_checks = true;

  /// Caps that enumerate nothing.
  static PropertyCaps none();
};

struct PropertyOutcome {
  PropertyOutcome() = default;
  explicit PropertyOutcome(std::string n) : name(std::move(n)) {}

  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string first_violation;

  bool pass() const { return violations == 0; }
};

struct PropertyReport {
  std::vector<PropertyOutcome> outcomes;

  bool pass() const;
  std::uint64_t violations() const;
};

PropertyReport run_property_suite(const PropertyCaps& caps = {});

/// The individual checks, usable on their own.
PropertyOutcome check_code_table();
PropertyOutcome check_no_triples(int max_pairs);
PropertyOutcome check_even_doubles(int max_pairs);
/// Both overlaps (0 against 1..4 and 1..4 against 0) must exist for every rotation.
PropertyOutcome check_rotation_overlap(const std::vector<int>& ns);
/// At least one of the two overlaps exists for every rotation.
PropertyOutcome check_rotation_overlap_either(const std::vector<int>& ns);
PropertyOutcome check_roundtrip(int max_n);
PropertyOutcome check_length_bound(int max_n);
PropertyOutcome check_length_table(int max_n);
PropertyOutcome check_r_column_rendezvous(int drift_max);
PropertyOutcome check_coprime_lengths(int prime_max);
/// Pair coverage for two lambda-type subsequences with coprime lengths, all offsets.
PropertyOutcome check_pair_coverage(const Subsequence& a, const Subsequence& b);
PropertyOutcome check_pair_coverage_sizes(const std::vector<int>& sizes);
PropertyOutcome check_engine_column_r(const std::vector<std::pair<int, ChannelSet>>& cases);
PropertyOutcome check_engine_periodicity(const std::vector<std::pair<int, ChannelSet>>& cases);

}  // namespace qcms
