#include <doctest.h>

#include <cmath>
#include <random>

#include "omegaforge/complexity.hpp"
#include "omegaforge/explorer.hpp"
#include "omegaforge/lawful.hpp"
#include "omegaforge/theory.hpp"

using namespace omegaforge;

namespace {

const ComplexityIndex& index14() {
  static const NodeStore store = explore(ExploreBudget{14, 100'000}).store;
  static const ComplexityIndex index(store);
  return index;
}

BitString random_bits(std::mt19937_64& rng, std::size_t n) {
  BitString b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(rng() & 1);
  return b;
}

}  // namespace

TEST_CASE("witness validity: every emitted witness prints its subject") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 400; ++trial) {
    // Mix random subjects with highly repetitive ones.
    BitString x = random_bits(rng, rng() % 24);
    if (trial % 3 == 0) {
      const std::size_t doublings = rng() % 8;
      for (std::size_t d = 0; d < doublings; ++d) x.append_copy_of_self();
    }
    for (const ComplexityBound& b : {complexity_upper(x), complexity_upper(x, &index14()),
                                     complexity_exact(x, index14(), 14)}) {
      if (!b.has_witness()) continue;
      REQUIRE(b.witness.size() == b.value);
      const auto r = run(b.witness, MachineLimits{witness_step_budget(x), 1u << 24});
      REQUIRE(r.kind == OutcomeKind::Halted);
      REQUIRE(r.bits_consumed == b.witness.size());
      REQUIRE(r.output == x);
    }
  }
}

TEST_CASE("every indexed shortest program is a valid witness of its output") {
  for (const auto& [out, prog] : index14().entries()) {
    const auto r = run(prog, 100'000);
    REQUIRE(r.kind == OutcomeKind::Halted);
    REQUIRE(r.bits_consumed == prog.size());
    REQUIRE(r.output.digits() == out);
  }
}

TEST_CASE("counting inequality across the index") {
  for (std::size_t n = 0; n <= 8; ++n) {
    for (std::size_t m = 0; m <= 14; ++m) {
      const auto c = counting_check(n, m, index14());
      REQUIRE(c.count <= c.bound);
      REQUIRE(c.pass);
    }
  }
}

TEST_CASE("interpolation: random point sets of up to 16 points") {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 16;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
    const auto c = interpolate(pts);
    REQUIRE(c.knots.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) REQUIRE(c.knots[i] > c.knots[i - 1]);
      const Point at = c.evaluate(c.knots[i]);
      REQUIRE(std::abs(at.x - pts[i].x) <= 1e-9);
      REQUIRE(std::abs(at.y - pts[i].y) <= 1e-9);
    }
  }
}

TEST_CASE("no free compression: description size is at least linear in the point count") {
  std::mt19937_64 rng(1102);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (unsigned precision : {8u, 32u, 53u}) {
    std::uint64_t prev = 0;
    for (std::size_t n = 1; n <= 16; ++n) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
      const auto size = describe_size(interpolate(pts), precision);
      REQUIRE(size >= 2 * n * precision);
      REQUIRE(size > prev);
      prev = size;
    }
  }
}

TEST_CASE("classify: fallback bound and verdict consistency") {
  std::mt19937_64 rng(1203);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    const BitString x = random_bits(rng, n);
    const Ratio threshold{1 + rng() % 4, 1 + rng() % 4};
    const auto v = classify(x, &index14(), threshold);
    REQUIRE(v.raw_size == n);
    REQUIRE(v.rule_size_upper <= n + 2 * floor_log2(n + 1) + 11);
    REQUIRE(v.ratio > 0);
    const bool lawful = v.rule_size_upper * threshold.den <= threshold.num * n;
    REQUIRE((v.verdict == Verdict::Lawful) == lawful);
  }
}

TEST_CASE("assertion lists round trip through their encoding and carrier") {
  std::mt19937_64 rng(1304);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Assertion> as;
    std::vector<bool> used(64, false);
    const std::size_t count = rng() % 10;
    while (as.size() < count) {
      const std::size_t k = 1 + rng() % 63;
      if (used[k]) continue;
      used[k] = true;
      as.push_back({k, static_cast<bool>(rng() & 1)});
    }
    REQUIRE(decode_assertions(encode_assertions(as)) == as);
    const TheoryArtifact t = make_theory(as);
    REQUIRE(theory_from_carrier(t.carrier, 10'000'000).assertions == as);
  }
}
