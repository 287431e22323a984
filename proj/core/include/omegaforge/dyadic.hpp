#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "omegaforge/bits.hpp"

namespace omegaforge {

/// Exact rational of the form n / 2^k with arbitrary-precision n.  Kept in
/// lowest terms (n odd, or n = 0 with k = 0), so equal values compare and
/// print identically.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Dyadic(mpz_class numerator, unsigned exponent);

  /// 2^-k.
  static Dyadic unit(unsigned k);
  /// Parses "n/2^k" or a plain integer "n".
  static Dyadic parse(std::string_view text);
  /// Value of the binary fraction 0.b1 b2 ... bn.
  static Dyadic from_binary_fraction(const BitString& bits);

  const mpz_class& numerator() const noexcept { return num_; }
  unsigned exponent() const noexcept { return exp_; }

  /// floor(value * 2^i).
  mpz_class floor_scaled(unsigned i) const;

  Dyadic& operator+=(const Dyadic& rhs);
  Dyadic& operator-=(const Dyadic& rhs);
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  /// "n/2^k" with k in lowest terms.
  std::string to_string() const;
  double to_double() const;

 private:
  void normalize();
  mpz_class num_{0};
  unsigned exp_ = 0;
};

}  // namespace omegaforge
