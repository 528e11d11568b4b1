#include "qcms/coding.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcms {

BootstrapSymbol digit_symbol(int d) {
  if (d < 0 || d > 4) throw std::domain_error("quinary digit out of range: " + std::to_string(d));
  return static_cast<BootstrapSymbol>(d + 1);
}

std::optional<int> symbol_digit(BootstrapSymbol s) {
  if (s == BootstrapSymbol::RMarker) return std::nullopt;
  return symbol_index(s) - 1;
}

char symbol_char(BootstrapSymbol s) {
  auto d = symbol_digit(s);
  return d ? static_cast<char>('0' + *d) : 'R';
}

BootstrapSequence::BootstrapSequence(std::vector<BootstrapSymbol> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.size() < 3 || symbols_[0] != BootstrapSymbol::RMarker ||
      symbols_[1] != BootstrapSymbol::D0 || symbols_[2] != BootstrapSymbol::D0)
    throw std::domain_error("bootstrap sequence must start with R00");
  if (symbols_.size() % 2 == 0) throw std::domain_error("bootstrap sequence length must be odd");
  if (std::count(symbols_.begin(), symbols_.end(), BootstrapSymbol::RMarker) != 1)
    throw std::domain_error("bootstrap sequence must contain exactly one R marker");
}

std::string BootstrapSequence::to_string() const {
  std::string out;
  out.reserve(symbols_.size());
  for (auto s : symbols_) out.push_back(symbol_char(s));
  return out;
}

int base4_digit_count(std::int64_t n) {
  if (n < 1) throw std::domain_error("base4_digit_count requires n >= 1");
  int count = 0;
  for (; n > 0; n /= 4) ++count;
  return count;
}

int bootstrap_length(int n_channels) {
  if (n_channels < 1) throw std::domain_error("channel count must be positive");
  int lq = base4_digit_count(n_channels);
  return 2 * ((lq + 1) / 2) + 3;
}

Quat4Digits to_quaternary(Channel r, int n_channels) {
  if (r < 1 || r > n_channels)
    throw std::domain_error("channel " + std::to_string(r) + " outside [1," +
                            std::to_string(n_channels) + "]");
  int width = base4_digit_count(n_channels);
  if (width % 2 != 0) ++width;
  Quat4Digits q;
  q.digits.assign(static_cast<std::size_t>(width), 0);
  int value = r;
  for (int i = width - 1; i >= 0 && value > 0; --i, value /= 4) q.digits[i] = value % 4;
  return q;
}

std::pair<int, int> code_pair(int hi, int lo) {
  if (hi < 0 || hi > 3 || lo < 0 || lo > 3)
    throw std::domain_error("quaternary digit out of range");
  int first = hi + 1;
  return {first, lo < first ? lo : lo + 1};
}

std::pair<int, int> decode_pair(int hi5, int lo5) {
  if (hi5 < 1 || hi5 > 4 || lo5 < 0 || lo5 > 4 || hi5 == lo5)
    throw std::domain_error("pair (" + std::to_string(hi5) + "," + std::to_string(lo5) +
                            ") is not a quinary code word");
  return {hi5 - 1, lo5 < hi5 ? lo5 : lo5 - 1};
}

Quin5Digits to_quinary(const Quat4Digits& q) {
  if (q.digits.empty() || q.digits.size() % 2 != 0)
    throw std::domain_error("quaternary string must have positive even length");
  Quin5Digits out;
  out.digits.reserve(q.digits.size());
  for (std::size_t i = 0; i < q.digits.size(); i += 2) {
    auto [a, b] = code_pair(q.digits[i], q.digits[i + 1]);
    out.digits.push_back(a);
    out.digits.push_back(b);
  }
  return out;
}

BootstrapSequence build_bootstrap(int n_channels, Channel r) {
  auto quin = to_quinary(to_quaternary(r, n_channels));
  std::vector<BootstrapSymbol> symbols{BootstrapSymbol::RMarker, BootstrapSymbol::D0,
                                       BootstrapSymbol::D0};
  for (int d : quin.digits) symbols.push_back(digit_symbol(d));
  return BootstrapSequence(std::move(symbols));
}

std::vector<BootstrapSymbol> rotate(const BootstrapSequence& bs, int d) {
  const auto len = static_cast<int>(bs.length());
  if (d < 1 || d > len - 1)
    throw std::domain_error("rotation " + std::to_string(d) + " outside [1," +
                            std::to_string(len - 1) + "]");
  std::vector<BootstrapSymbol> out(bs.length());
  for (int j = 0; j < len; ++j) out[j] = bs[(j + d) % len];
  return out;
}

}  // namespace qcms
