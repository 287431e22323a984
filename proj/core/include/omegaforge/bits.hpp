#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace omegaforge {

/// Base class for every error the library raises.  `is_usage()` separates
/// malformed requests (bad arguments) from domain failures (corrupted
/// checkpoints, inconsistent inputs).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, bool usage = false)
      : std::runtime_error(what), usage_(usage) {}
  bool is_usage() const noexcept { return usage_; }

 private:
  bool usage_;
};

/// A finite string of binary digits.  Stored as '0'/'1' characters so that
/// doubling, comparison and serialization are plain string operations.
/// Ordering is lexicographic on the digits, so a prefix sorts first.
class BitString {
 public:
  BitString() = default;

  /// Accepts a string of '0'/'1'.  The single character "-" denotes the
  /// empty string (the form used in reports and checkpoints).
  static BitString parse(std::string_view text);
  static std::optional<BitString> try_parse(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] == '1'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  void pop_back() { bits_.pop_back(); }
  void append(const BitString& other) { bits_ += other.bits_; }
  void append_copy_of_self() { bits_.append(bits_); }
  void reserve(std::size_t n) { bits_.reserve(n); }

  BitString prefix(std::size_t n) const { return BitString(bits_.substr(0, n)); }
  BitString suffix_from(std::size_t n) const {
    return BitString(n >= bits_.size() ? std::string{} : bits_.substr(n));
  }
  bool starts_with(const BitString& p) const noexcept {
    return std::string_view(bits_).starts_with(p.bits_);
  }

  /// Raw digits; empty string for the empty bit string.
  const std::string& digits() const noexcept { return bits_; }
  /// Digits, or "-" for the empty bit string.
  std::string display() const { return bits_.empty() ? std::string("-") : bits_; }

  friend BitString operator+(BitString lhs, const BitString& rhs) {
    lhs.append(rhs);
    return lhs;
  }
  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  explicit BitString(std::string digits) : bits_(std::move(digits)) {}
  std::string bits_;
};

/// Programs are bit strings read front to back by the machine.
using Program = BitString;

/// Value of `n` bits starting at `pos`, most significant bit first.
std::uint64_t read_uint(const BitString& bits, std::size_t pos, unsigned n);

/// Appends `value` in `n` bits, most significant bit first.
void append_uint(BitString& bits, std::uint64_t value, unsigned n);

/// floor(log2(v)) for v >= 1.
unsigned floor_log2(std::uint64_t v);

/// Elias-gamma code of v >= 1: floor(log2 v) zeros followed by v in binary.
BitString gamma_encode(std::uint64_t v);

/// Decodes a gamma code starting at `pos`.  On success returns the value and
/// advances `pos`; returns nullopt if the code is truncated.
std::optional<std::uint64_t> gamma_decode(const BitString& bits, std::size_t& pos);

}  // namespace omegaforge
