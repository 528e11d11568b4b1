#pragma once

// Quaternary representation of the selected channel, the quaternary -> quinary
// pair code, and construction/rotation of bootstrap sequences.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qcms {

using Channel = int;

/// Base-4 digits of a channel index, most significant first. Always of even length.
struct Quat4Digits {
  std::vector<int> digits;
};

/// Base-5 digits produced by the pair code. Odd (1-based) positions are nonzero
/// and the two digits of every pair differ.
struct Quin5Digits {
  std::vector<int> digits;
};

/// One column type of the CH matrix: the R marker or a quinary digit 0..4.
enum class BootstrapSymbol : std::uint8_t { RMarker, D0, D1, D2, D3, D4 };

inline constexpr int kSymbolCount = 6;

constexpr int symbol_index(BootstrapSymbol s) { return static_cast<int>(s); }

/// Symbol for quinary digit `d` in [0,4]. Throws std::domain_error otherwise.
BootstrapSymbol digit_symbol(int d);

/// Quinary digit carried by `s`, or nullopt for the R marker.
std::optional<int> symbol_digit(BootstrapSymbol s);

char symbol_char(BootstrapSymbol s);

class BootstrapSequence {
 public:
  /// Validates the "R00" prefix, the single R marker and odd length.
  explicit BootstrapSequence(std::vector<BootstrapSymbol> symbols);

  std::size_t length() const { return symbols_.size(); }
  /// Zero-based access.
  BootstrapSymbol operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<BootstrapSymbol>& symbols() const { return symbols_; }

  /// Compact form, e.g. "R001021".
  std::string to_string() const;

  friend bool operator==(const BootstrapSequence&, const BootstrapSequence&) = default;

 private:
  std::vector<BootstrapSymbol> symbols_;
};

/// floor(log4(n)) + 1, the number of base-4 digits of n. Requires n >= 1.
int base4_digit_count(std::int64_t n);

/// Bootstrap length for a network of `n_channels` channels.
int bootstrap_length(int n_channels);

/// Base-4 digits of `r`, zero padded to the digit count of `n_channels` and then
/// to even length. Throws std::domain_error unless 1 <= r <= n_channels.
Quat4Digits to_quaternary(Channel r, int n_channels);

/// Pair code: (hi, lo) -> (hi + 1, lo < hi + 1 ? lo : lo + 1).
std::pair<int, int> code_pair(int hi, int lo);

/// Inverse of code_pair. Throws std::domain_error for pairs outside its image.
std::pair<int, int> decode_pair(int hi5, int lo5);

Quin5Digits to_quinary(const Quat4Digits& q);

BootstrapSequence build_bootstrap(int n_channels, Channel r);

/// Left rotation: output position j holds bs[(j + d) mod L]. Requires 1 <= d <= L-1.
std::vector<BootstrapSymbol> rotate(const BootstrapSequence& bs, int d);

}  // namespace qcms
