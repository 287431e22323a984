#include <doctest.h>

#include "omegaforge/bits.hpp"
#include "omegaforge/dyadic.hpp"
#include "omegaforge/ledger.hpp"
#include "../oracle/reference.hpp"

using namespace omegaforge;

TEST_CASE("BitString parse and display") {
  CHECK(BitString::parse("-").empty());
  CHECK(BitString::parse("").empty());
  CHECK(BitString::parse("0110").digits() == "0110");
  CHECK(BitString::parse("-").display() == "-");
  CHECK_FALSE(BitString::try_parse("012").has_value());
  CHECK_THROWS_AS(BitString::parse("ab"), Error);

  const auto b = BitString::parse("0110");
  CHECK(b.size() == 4);
  CHECK_FALSE(b[0]);
  CHECK(b[1]);
  CHECK(b.prefix(2) == BitString::parse("01"));
  CHECK(b.suffix_from(2) == BitString::parse("10"));
  CHECK(b.suffix_from(9).empty());
  CHECK(b.starts_with(BitString::parse("011")));
  CHECK_FALSE(b.starts_with(BitString::parse("1")));
  CHECK(BitString::parse("0") < BitString::parse("00"));
  CHECK(BitString::parse("00") < BitString::parse("01"));
}

TEST_CASE("read_uint / append_uint round trip, MSB first") {
  BitString b;
  append_uint(b, 5, 3);
  CHECK(b.digits() == "101");
  append_uint(b, 1, 4);
  CHECK(b.digits() == "1010001");
  CHECK(read_uint(b, 0, 3) == 5);
  CHECK(read_uint(b, 3, 4) == 1);
}

TEST_CASE("gamma code matches the reference coder and decodes back") {
  CHECK_THROWS_AS(gamma_encode(0), Error);
  for (std::uint64_t v = 1; v < 2000; ++v) {
    const BitString g = gamma_encode(v);
    REQUIRE(g.digits() == ref::gamma(v));
    REQUIRE(g.size() == 2 * floor_log2(v) + 1);
    std::size_t pos = 0;
    const auto back = gamma_decode(g, pos);
    REQUIRE(back.has_value());
    REQUIRE(*back == v);
    REQUIRE(pos == g.size());
    std::size_t pos2 = 0;
    REQUIRE_FALSE(gamma_decode(g.prefix(g.size() - 1), pos2).has_value());
  }
}

TEST_CASE("floor_log2") {
  CHECK(floor_log2(1) == 0);
  CHECK(floor_log2(2) == 1);
  CHECK(floor_log2(3) == 1);
  CHECK(floor_log2(1024) == 10);
}

TEST_CASE("Dyadic normal form and printing") {
  CHECK(Dyadic(mpz_class(4), 3) == Dyadic(mpz_class(1), 1));
  CHECK(Dyadic(mpz_class(4), 3).to_string() == "1/2^1");
  CHECK(Dyadic().to_string() == "0/2^0");
  CHECK(Dyadic(1).to_string() == "1/2^0");
  CHECK(Dyadic(mpz_class(0), 9) == Dyadic());
  CHECK(Dyadic::unit(20).to_string() == "1/2^20");
}

TEST_CASE("Dyadic parse round trip") {
  for (const char* s : {"0/2^0", "1/2^0", "445245/2^20", "3/2^1", "7/2^70"}) {
    CHECK(Dyadic::parse(s).to_string() == s);
  }
  CHECK(Dyadic::parse("6/2^2") == Dyadic::parse("3/2^1"));
  CHECK(Dyadic::parse("5") == Dyadic(5));
  CHECK_THROWS_AS(Dyadic::parse("1/3"), Error);
  CHECK_THROWS_AS(Dyadic::parse("x"), Error);
}

TEST_CASE("Dyadic arithmetic is exact") {
  Dyadic sum;
  for (unsigned k = 1; k <= 100; ++k) sum += Dyadic::unit(k);
  CHECK(sum + Dyadic::unit(100) == Dyadic(1));
  CHECK(Dyadic(1) - Dyadic::unit(1) == Dyadic::unit(1));
  CHECK(Dyadic::unit(3) < Dyadic::unit(2));
  CHECK(Dyadic::from_binary_fraction(BitString::parse("011")) == Dyadic(mpz_class(3), 3));
  CHECK(Dyadic::from_binary_fraction(BitString::parse("-")) == Dyadic());
  CHECK(Dyadic(mpz_class(3), 3).floor_scaled(1) == 0);
  CHECK(Dyadic(mpz_class(3), 3).floor_scaled(2) == 1);
  CHECK(Dyadic(mpz_class(3), 3).floor_scaled(3) == 3);
  CHECK(Dyadic(mpz_class(3), 3).floor_scaled(5) == 12);
  CHECK(Dyadic::parse("445245/2^20").to_double() == doctest::Approx(0.4246187));
}

TEST_CASE("MassLedger accounts exactly") {
  MassLedger l;
  l.add(MassKind::Halt, 3);
  l.add(MassKind::Refuted, 3);
  l.add(MassKind::Unknown, 2);
  l.add(MassKind::Unknown, 1);
  CHECK(l.total() == Dyadic(1));
  CHECK(l.halt == Dyadic::unit(3));
  CHECK(l.halting_headroom() == l.unknown);

  MassLedger other;
  other.add(MassKind::Halt, 4);
  l += other;
  CHECK(l.halt == Dyadic(mpz_class(3), 4));
}

TEST_CASE("halting cap of undecided subtrees") {
  // At an instruction boundary at most half of the subtree can halt.
  CHECK(subtree_halting_cap(BitString::parse("-")) == Dyadic::unit(1));
  CHECK(subtree_halting_cap(BitString::parse("001")) == Dyadic::unit(1));
  // After "00" the next bit picks HALT (cap 1) or OUT0 (cap 1/2).
  CHECK(subtree_halting_cap(BitString::parse("00")) == Dyadic(mpz_class(3), 2));
  // After "11": SIM (guests 00/01 cap 1, 10/11 invalid) or reserved.
  CHECK(subtree_halting_cap(BitString::parse("11")) == Dyadic::unit(2));
  CHECK(subtree_halting_cap(BitString::parse("111")) == Dyadic());
  CHECK(subtree_halting_cap(BitString::parse("11001")) == Dyadic(1));
}

TEST_CASE("halting cap fixed point W = 3/16 + 5/8 W") {
  // Average over the eight opcodes: HALT 1, SIM 1/2, reserved 0, five others 1/2.
  const Dyadic w = Dyadic::unit(1);
  Dyadic avg = Dyadic(1) + Dyadic::unit(1);            // HALT + SIM
  for (int i = 0; i < 5; ++i) avg += Dyadic::unit(1);  // continuing opcodes
  CHECK(Dyadic(avg.numerator(), avg.exponent() + 3) == w);
}
