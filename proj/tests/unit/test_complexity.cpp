#include <doctest.h>

#include <random>

#include "golden.hpp"
#include "omegaforge/complexity.hpp"
#include "../oracle/reference.hpp"

using namespace omegaforge;

namespace {

BitString B(const char* s) { return BitString::parse(s); }

void check_witness(const ComplexityBound& b) {
  REQUIRE(b.has_witness());
  CHECK(b.witness.size() == b.value);
  const RunOutcome r = run(b.witness, MachineLimits{witness_step_budget(b.subject), 1u << 24});
  CHECK(r.kind == OutcomeKind::Halted);
  CHECK(r.bits_consumed == b.witness.size());
  CHECK(r.output == b.subject);
}

const std::vector<ref::Leaf>& leaves12() {
  static const auto leaves = ref::enumerate(12, 100'000);
  return leaves;
}

}  // namespace

TEST_CASE("complexity_upper: empty output") {
  const auto b = complexity_upper(BitString{});
  CHECK(b.kind == BoundKind::Upper);
  CHECK(b.value == 3);
  CHECK(b.witness == B("000"));
  check_witness(b);
}

TEST_CASE("complexity_upper: 0000 uses OUT/DBL code") {
  const auto b = complexity_upper(B("0000"));
  CHECK(b.value <= 12);
  check_witness(b);
  const auto with_index = complexity_upper(B("0000"), &default_index());
  CHECK(with_index.value == b.value);
  CHECK(with_index.witness == b.witness);
}

TEST_CASE("H(0000) over all programs <= 12 bits matches an exhaustive oracle") {
  const auto best = ref::shortest_programs(leaves12());
  REQUIRE(best.count("0000") == 1);
  const std::string& oracle = best.at("0000");
  const auto exact = complexity_exact(B("0000"), default_index(), 12);
  CHECK(exact.kind == BoundKind::ExactWithin);
  CHECK(exact.value == oracle.size());
  CHECK(exact.witness.digits() == oracle);
  CHECK(exact.value == 12);
  check_witness(exact);
}

TEST_CASE("complexity_exact: length-3 table") {
  const auto empty = complexity_exact(BitString{}, default_index(), 3);
  CHECK(empty.kind == BoundKind::ExactWithin);
  CHECK(empty.value == 3);
  for (const char* x : {"0", "1", "01", "0000"}) {
    CHECK(complexity_exact(B(x), default_index(), 3).kind == BoundKind::AboveBound);
  }
  CHECK_THROWS_AS(complexity_exact(B("0"), default_index(), 21), Error);
}

TEST_CASE("complexity_exact: 1^1024 is out of reach at L = 20") {
  BitString ones;
  for (int i = 0; i < 1024; ++i) ones.push_back(true);
  const auto exact = complexity_exact(ones, default_index(), 20);
  CHECK(exact.kind == BoundKind::AboveBound);
  const auto upper = complexity_upper(ones, &default_index());
  CHECK(upper.value == 36);
  check_witness(upper);
}

TEST_CASE("exact values agree with the reference enumeration for every output of <= 12-bit programs") {
  const auto best = ref::shortest_programs(leaves12());
  for (const auto& [out, prog] : best) {
    const auto b = complexity_exact(BitString::parse(out.empty() ? "-" : out), default_index(), 12);
    REQUIRE(b.has_witness());
    REQUIRE(b.witness.digits() == prog);
  }
}

TEST_CASE("anti-monotonicity in the search bound") {
  for (const char* x : {"-", "0", "1", "0000", "0110", "11111", "0101010101"}) {
    const BitString subject = B(x);
    const auto upper = complexity_upper(subject, &default_index());
    std::optional<std::size_t> prev;
    for (std::size_t l = 3; l <= 20; ++l) {
      const auto b = complexity_exact(subject, default_index(), l);
      if (b.has_witness()) {
        if (prev) CHECK(b.value <= *prev);
        prev = b.value;
        check_witness(b);
      } else {
        CHECK_FALSE(prev.has_value());
      }
      if (upper.value <= l) {
        REQUIRE(b.has_witness());
        CHECK(b.value == upper.value);
      }
    }
  }
}

TEST_CASE("literal witness bound holds for random subjects") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng() % 300;
    BitString x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(rng() & 1);
    const auto b = complexity_upper(x);
    CHECK(b.value <= n + 2 * floor_log2(n + 1) + 6);
    CHECK(literal_program(x).size() == n + 2 * floor_log2(n + 1) + 6);
    check_witness(b);
  }
}

TEST_CASE("straight-line program is minimal among OUT/DBL codes") {
  // Brute force: BFS over OUT0/OUT1/DBL sequences for short subjects.
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& s : ref::all_strings(n)) {
      std::map<std::string, std::size_t> dist{{"", 0}};
      std::vector<std::string> frontier{""};
      while (!dist.count(s)) {
        std::vector<std::string> next;
        for (const auto& cur : frontier) {
          for (const std::string& cand : {cur + "0", cur + "1", cur + cur}) {
            if (cand.size() > s.size() || s.compare(0, cand.size(), cand) != 0) continue;
            if (dist.emplace(cand, dist[cur] + 1).second) next.push_back(cand);
          }
        }
        frontier = std::move(next);
      }
      const Program p = straight_line_program(BitString::parse(s));
      REQUIRE(p.size() == 3 * dist[s] + 3);
    }
  }
}

TEST_CASE("invariance audit: examples") {
  const auto unary = invariance_audit(1, 6, default_index());
  CHECK(unary.holds);
  CHECK(unary.max_gap <= 5);
  CHECK(unary.rows.size() == 6);  // 1^n for n <= 5, plus the empty output
  const auto& empty_row = unary.rows.front();
  CHECK(empty_row.subject.empty());
  CHECK(empty_row.guest_complexity == 1);
  CHECK(empty_row.machine_complexity == 3);

  const auto literal = invariance_audit(0, 8, default_index());
  CHECK(literal.holds);
  for (const auto& row : literal.rows) CHECK(row.subject.size() <= 3);

  CHECK_THROWS_AS(invariance_audit(2, 4, default_index()), Error);
  CHECK_THROWS_AS(invariance_audit(0, 16, default_index()), Error);
}

TEST_CASE("counting check: examples and oracle") {
  const auto c43 = counting_check(4, 3, default_index());
  CHECK(c43.count == 0);
  CHECK(c43.bound == 15);
  CHECK(c43.pass);
  CHECK(counting_check(3, 0, default_index()).count == 0);
  CHECK(counting_check(3, 0, default_index()).bound == 1);

  const auto best = ref::shortest_programs(leaves12());
  std::uint64_t oracle = 0;
  for (const auto& [out, prog] : best) oracle += out.size() == 2 && prog.size() <= 9;
  const auto c29 = counting_check(2, 9, default_index());
  CHECK(c29.count == oracle);
  CHECK(c29.pass);
  CHECK_THROWS_AS(counting_check(2, 21, default_index()), Error);
}

TEST_CASE("irreducibility probe over the certified prefix") {
  const auto report = irreducibility_probe(default_bits().certified, default_index());
  REQUIRE(report.rows.size() == default_bits().certified.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].m == i + 1);
    if (report.rows[i].bound.has_witness()) check_witness(report.rows[i].bound);
  }
}
