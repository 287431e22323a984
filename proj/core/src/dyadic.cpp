#include "omegaforge/dyadic.hpp"

#include <cmath>

namespace omegaforge {

Dyadic::Dyadic(mpz_class numerator, unsigned exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  normalize();
}

Dyadic Dyadic::unit(unsigned k) { return Dyadic(mpz_class(1), k); }

Dyadic Dyadic::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string num_text(text.substr(0, slash));
  unsigned exp = 0;
  if (slash != std::string_view::npos) {
    const auto den = text.substr(slash + 1);
    if (!den.starts_with("2^")) throw Error("dyadic denominator must be 2^k: " + std::string(text));
    try {
      std::size_t used = 0;
      const std::string k(den.substr(2));
      const unsigned long v = std::stoul(k, &used);
      if (used != k.size()) throw Error("bad exponent");
      exp = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw Error("bad dyadic exponent: " + std::string(text));
    }
  }
  mpz_class num;
  if (num_text.empty() || num.set_str(num_text, 10) != 0) {
    throw Error("bad dyadic numerator: " + std::string(text));
  }
  return Dyadic(num, exp);
}

Dyadic Dyadic::from_binary_fraction(const BitString& bits) {
  mpz_class n(0);
  if (!bits.empty()) n.set_str(bits.digits(), 2);
  return Dyadic(n, static_cast<unsigned>(bits.size()));
}

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  const auto twos = static_cast<unsigned>(mpz_scan1(num_.get_mpz_t(), 0));
  const unsigned shift = twos < exp_ ? twos : exp_;
  if (shift > 0) {
    mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), shift);
    exp_ -= shift;
  }
}

mpz_class Dyadic::floor_scaled(unsigned i) const {
  mpz_class r;
  if (i >= exp_) {
    mpz_mul_2exp(r.get_mpz_t(), num_.get_mpz_t(), i - exp_);
  } else {
    mpz_fdiv_q_2exp(r.get_mpz_t(), num_.get_mpz_t(), exp_ - i);
  }
  return r;
}

namespace {
// Brings both operands to the larger exponent.
void align(const Dyadic& a, const Dyadic& b, mpz_class& an, mpz_class& bn, unsigned& exp) {
  exp = a.exponent() > b.exponent() ? a.exponent() : b.exponent();
  mpz_mul_2exp(an.get_mpz_t(), a.numerator().get_mpz_t(), exp - a.exponent());
  mpz_mul_2exp(bn.get_mpz_t(), b.numerator().get_mpz_t(), exp - b.exponent());
}
}  // namespace

Dyadic& Dyadic::operator+=(const Dyadic& rhs) {
  mpz_class a, b;
  unsigned e = 0;
  align(*this, rhs, a, b, e);
  num_ = a + b;
  exp_ = e;
  normalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& rhs) {
  mpz_class a, b;
  unsigned e = 0;
  align(*this, rhs, a, b, e);
  num_ = a - b;
  exp_ = e;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  mpz_class an, bn;
  unsigned e = 0;
  align(a, b, an, bn, e);
  const int c = cmp(an, bn);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dyadic::to_string() const {
  return num_.get_str(10) + "/2^" + std::to_string(exp_);
}

double Dyadic::to_double() const {
  return std::ldexp(num_.get_d(), -static_cast<int>(exp_));
}

}  // namespace omegaforge
