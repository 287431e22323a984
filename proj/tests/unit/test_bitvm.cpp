#include <doctest.h>

#include "omegaforge/bitvm.hpp"
#include "../oracle/reference.hpp"

using namespace omegaforge;

namespace {

BitString B(const char* s) { return BitString::parse(s); }

ref::Kind to_ref(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Halted: return ref::Kind::Halted;
    case OutcomeKind::NeedsBit: return ref::Kind::NeedsBit;
    case OutcomeKind::Invalid: return ref::Kind::Invalid;
    default: return ref::Kind::OutOfSteps;
  }
}

}  // namespace

TEST_CASE("decode_step reads exactly one instruction") {
  const auto halt = decode_step(B("000"), 0);
  REQUIRE(std::holds_alternative<Instruction>(halt));
  CHECK(std::get<Instruction>(halt).op == Opcode::Halt);
  CHECK(std::get<Instruction>(halt).width() == 3);

  CHECK(std::holds_alternative<NeedsBit>(decode_step(B("11"), 0)));
  CHECK(std::holds_alternative<InvalidEncoding>(decode_step(B("111"), 0)));

  const auto dj = decode_step(B("0001011101"), 3);
  REQUIRE(std::holds_alternative<Instruction>(dj));
  const auto ins = std::get<Instruction>(dj);
  CHECK(ins.op == Opcode::DecJnz);
  CHECK(ins.reg == Register::B);
  CHECK(ins.jump == 5);
  CHECK(ins.width() == 7);

  CHECK(std::holds_alternative<NeedsBit>(decode_step(B("101011"), 0)));
  CHECK(std::holds_alternative<InvalidEncoding>(decode_step(B("11010"), 0)));
  CHECK(std::holds_alternative<InvalidEncoding>(decode_step(B("11011"), 0)));
  CHECK(std::holds_alternative<NeedsBit>(decode_step(B("1101"), 0)));
}

TEST_CASE("instruction widths") {
  CHECK(asm_::halt().width() == 3);
  CHECK(asm_::out(true).width() == 3);
  CHECK(asm_::dbl().width() == 3);
  CHECK(asm_::inc(Register::A).width() == 4);
  CHECK(asm_::decjnz(Register::A, 7).width() == 7);
  CHECK(asm_::sim(Guest::Unary).width() == 5);
}

TEST_CASE("encode and decode are inverse over every valid instruction") {
  std::vector<Instruction> all{asm_::halt(), asm_::out(false), asm_::out(true), asm_::dbl(),
                               asm_::inc(Register::A), asm_::inc(Register::B),
                               asm_::sim(Guest::Literal), asm_::sim(Guest::Unary)};
  for (int r = 0; r < 2; ++r) {
    for (std::uint8_t k = 0; k < 8; ++k) all.push_back(asm_::decjnz(Register(r), k));
  }
  for (const auto& ins : all) {
    BitString bits;
    encode_instruction(bits, ins);
    CHECK(bits.size() == ins.width());
    const auto back = decode_step(bits, 0);
    REQUIRE(std::holds_alternative<Instruction>(back));
    CHECK(std::get<Instruction>(back) == ins);
  }
}

TEST_CASE("run: examples") {
  const auto h = run(B("-"), 10);
  CHECK(h.kind == OutcomeKind::NeedsBit);

  const auto halt = run(B("000"), 10);
  CHECK(halt.kind == OutcomeKind::Halted);
  CHECK(halt.output.empty());
  CHECK(halt.bits_consumed == 3);
  CHECK(halt.steps == 1);

  const auto ones = run(B("010011011000"), 100);
  CHECK(ones.kind == OutcomeKind::Halted);
  CHECK(ones.output == B("1111"));
  CHECK(ones.bits_consumed == 12);

  const auto loop = run(B("10001010001"), 1'000'000);
  CHECK(loop.kind == OutcomeKind::Diverges);
  CHECK(loop.proof == DivergenceProof::Cycle);
  CHECK(loop.bits_consumed == 11);
}

TEST_CASE("run: DBL of empty output stays empty") {
  const auto r = run(B("011011000"), 10);
  CHECK(r.kind == OutcomeKind::Halted);
  CHECK(r.output.empty());
}

TEST_CASE("run: jump before instruction 0 is invalid only when taken") {
  // INC A; DECJNZ A,2 -> target index -1.
  const Program bad = asm_::assemble(std::vector{asm_::inc(Register::A), asm_::decjnz(Register::A, 2)});
  CHECK(run(bad, 100).kind == OutcomeKind::Invalid);
  // DECJNZ B,7 with B = 0 falls through, then HALT.
  const Program ok = asm_::assemble(std::vector{asm_::decjnz(Register::B, 7), asm_::halt()});
  CHECK(run(ok, 100).kind == OutcomeKind::Halted);
}

TEST_CASE("run: reserved encodings are invalid") {
  CHECK(run(B("111"), 10).kind == OutcomeKind::Invalid);
  CHECK(run(B("11010"), 10).kind == OutcomeKind::Invalid);
  CHECK(run(B("11011"), 10).kind == OutcomeKind::Invalid);
  CHECK(run(B("001111"), 10).kind == OutcomeKind::Invalid);
}

TEST_CASE("run: budget exhaustion is unknown, not a verdict") {
  // INC A x3 then HALT needs 4 steps.
  const Program p = asm_::assemble(std::vector{asm_::inc(Register::A), asm_::inc(Register::A),
                                               asm_::inc(Register::A), asm_::halt()});
  CHECK(run(p, 3).kind == OutcomeKind::Unknown);
  CHECK(run(p, 4).kind == OutcomeKind::Halted);
  CHECK(run(p, 4).steps == 4);
}

TEST_CASE("run: counted loop halts") {
  // INC A x3; DECJNZ A,0 spins A down to 0; OUT1; HALT.
  const Program p = asm_::assemble(std::vector{asm_::inc(Register::A), asm_::inc(Register::A),
                                               asm_::inc(Register::A), asm_::decjnz(Register::A, 0),
                                               asm_::out(true), asm_::halt()});
  const auto r = run(p, 1000);
  CHECK(r.kind == OutcomeKind::Halted);
  CHECK(r.output == B("1"));
  CHECK(r.steps == 3 + 4 + 2);
}

TEST_CASE("run: monotone loop is proved divergent") {
  // INC A; INC A; DECJNZ A,2: A grows by one per pass and never reaches 0.
  const Program p = asm_::assemble(
      std::vector{asm_::inc(Register::A), asm_::inc(Register::A), asm_::decjnz(Register::A, 2)});
  const auto r = run(p, 1'000'000);
  CHECK(r.kind == OutcomeKind::Diverges);
  CHECK(r.proof == DivergenceProof::MonotoneCycle);
  CHECK(ref::run(p.digits(), 1'000'000).kind == ref::Kind::OutOfSteps);
}

TEST_CASE("prove_divergence: [INC A; INC A; DECJNZ A back 1] agrees with a long run") {
  const Program p = asm_::assemble(
      std::vector{asm_::inc(Register::A), asm_::inc(Register::A), asm_::decjnz(Register::A, 1)});
  const auto [outcome, trace] = run_traced(p, 1000);
  const DivergenceProof proof = prove_divergence(trace);
  const ref::Result brute = ref::run(p.digits(), 10'000'000);
  CHECK(proof != DivergenceProof::None);
  CHECK(brute.kind == ref::Kind::OutOfSteps);
}

TEST_CASE("prove_divergence: a zero branch that exits yields no proof") {
  // INC A; DECJNZ B,1: B = 0, the zero branch falls through to a bit request.
  const Program p =
      asm_::assemble(std::vector{asm_::inc(Register::A), asm_::decjnz(Register::B, 1)});
  const auto [outcome, trace] = run_traced(p, 1000);
  CHECK(outcome.kind == OutcomeKind::NeedsBit);
  CHECK(prove_divergence(trace) == DivergenceProof::None);
}

TEST_CASE("run_guest: examples") {
  auto lit_empty = run_guest(0, B("1"));
  CHECK(lit_empty.kind == OutcomeKind::Halted);
  CHECK(lit_empty.output.empty());

  auto lit = run_guest(0, B("01101"));
  CHECK(lit.kind == OutcomeKind::Halted);
  CHECK(lit.output == B("01"));
  CHECK(lit.bits_consumed == 5);

  auto un = run_guest(1, B("110"));
  CHECK(un.kind == OutcomeKind::Halted);
  CHECK(un.output == B("11"));

  CHECK(run_guest(0, B("011")).kind == OutcomeKind::NeedsBit);
  CHECK(run_guest(1, B("111")).kind == OutcomeKind::NeedsBit);
  CHECK_THROWS_AS(run_guest(2, B("0")), Error);
}

TEST_CASE("simulation_prefix") {
  CHECK(simulation_prefix(0) == B("11000"));
  CHECK(simulation_prefix(1) == B("11001"));
  CHECK(simulation_prefix(0).size() == kSimPrefixBits);
  CHECK_THROWS_AS(simulation_prefix(2), Error);
  CHECK_THROWS_AS(simulation_prefix(3), Error);
}

TEST_CASE("simulation identity over every stream of length <= 12") {
  for (std::uint8_t g = 0; g < 2; ++g) {
    const Program pi = simulation_prefix(g);
    for (std::size_t len = 0; len <= 12; ++len) {
      for (const auto& s : ref::all_strings(len)) {
        const BitString p = BitString::parse(s.empty() ? "-" : s);
        const RunOutcome host = run(pi + p, 1'000'000);
        const RunOutcome guest = run_guest(g, p);
        const ref::Result oracle = ref::run_guest(g, s);
        REQUIRE(host.kind == guest.kind);
        REQUIRE(to_ref(guest.kind) == oracle.kind);
        if (guest.kind == OutcomeKind::Halted) {
          REQUIRE(host.output == guest.output);
          REQUIRE(guest.output.digits() == oracle.output);
          REQUIRE(host.bits_consumed == guest.bits_consumed + kSimPrefixBits);
        }
      }
    }
  }
}

TEST_CASE("machine agrees with the reference interpreter on every program <= 14 bits") {
  constexpr std::uint64_t kBudget = 2000;
  std::size_t checked = 0;
  for (std::size_t len = 0; len <= 14; ++len) {
    for (const auto& s : ref::all_strings(len)) {
      const RunOutcome got = run(BitString::parse(s.empty() ? "-" : s), kBudget);
      const ref::Result want = ref::run(s, kBudget);
      if (got.kind == OutcomeKind::Diverges) {
        REQUIRE(want.kind == ref::Kind::OutOfSteps);
        continue;
      }
      REQUIRE(to_ref(got.kind) == want.kind);
      REQUIRE(got.bits_consumed == want.consumed);
      if (got.kind != OutcomeKind::NeedsBit) REQUIRE(got.steps == want.steps);
      if (got.kind == OutcomeKind::Halted) REQUIRE(got.output.digits() == want.output);
      ++checked;
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("resumed machine matches a fresh run") {
  for (const auto& s : ref::all_strings(10)) {
    const Program full = BitString::parse(s);
    Machine m;
    RunOutcome last;
    for (std::size_t n = 0; n <= full.size(); ++n) {
      last = m.advance(full.prefix(n));
      if (last.kind != OutcomeKind::NeedsBit) break;
    }
    const RunOutcome fresh = run(full, MachineLimits{});
    REQUIRE(last.kind == fresh.kind);
    REQUIRE(last.steps == fresh.steps);
    REQUIRE(last.bits_consumed == fresh.bits_consumed);
    REQUIRE(last.output == fresh.output);
  }
}

TEST_CASE("machine_version is a stable 8-digit hex tag") {
  CHECK(machine_version().size() == 8);
  CHECK(machine_version() == machine_version());
}
