#include "omegaforge/bits.hpp"

#include <bit>

namespace omegaforge {

std::optional<BitString> BitString::try_parse(std::string_view text) {
  if (text == "-") return BitString{};
  for (char c : text) {
    if (c != '0' && c != '1') return std::nullopt;
  }
  return BitString(std::string(text));
}

BitString BitString::parse(std::string_view text) {
  auto parsed = try_parse(text);
  if (!parsed) throw Error("not a bit string: '" + std::string(text) + "'", true);
  return *std::move(parsed);
}

std::uint64_t read_uint(const BitString& bits, std::size_t pos, unsigned n) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < n; ++i) v = (v << 1) | (bits[pos + i] ? 1u : 0u);
  return v;
}

void append_uint(BitString& bits, std::uint64_t value, unsigned n) {
  for (unsigned i = n; i-- > 0;) bits.push_back(((value >> i) & 1u) != 0);
}

unsigned floor_log2(std::uint64_t v) {
  return static_cast<unsigned>(std::bit_width(v)) - 1;
}

BitString gamma_encode(std::uint64_t v) {
  if (v == 0) throw Error("gamma code requires a positive value", true);
  const unsigned width = floor_log2(v);
  BitString out;
  for (unsigned i = 0; i < width; ++i) out.push_back(false);
  append_uint(out, v, width + 1);
  return out;
}

std::optional<std::uint64_t> gamma_decode(const BitString& bits, std::size_t& pos) {
  std::size_t p = pos;
  unsigned zeros = 0;
  while (p < bits.size() && !bits[p]) {
    ++zeros;
    ++p;
  }
  if (p >= bits.size() || zeros > 63) return std::nullopt;
  if (p + zeros + 1 > bits.size()) return std::nullopt;
  const std::uint64_t v = read_uint(bits, p, zeros + 1);
  pos = p + zeros + 1;
  return v;
}

}  // namespace omegaforge
