#include "omegaforge/ledger.hpp"

#include <variant>

#include "omegaforge/bitvm.hpp"

namespace omegaforge {

void MassLedger::add(MassKind kind, std::size_t length) {
  const Dyadic mass = Dyadic::unit(static_cast<unsigned>(length));
  switch (kind) {
    case MassKind::Halt: halt += mass; break;
    case MassKind::Refuted: refuted += mass; break;
    case MassKind::Unknown: unknown += mass; break;
  }
}

MassLedger& MassLedger::operator+=(const MassLedger& other) {
  if (unknown_halt_cap || other.unknown_halt_cap) {
    unknown_halt_cap = halting_headroom() + other.halting_headroom();
  }
  halt += other.halt;
  refuted += other.refuted;
  unknown += other.unknown;
  return *this;
}

namespace {

Dyadic half_of(const Dyadic& d) { return Dyadic(d.numerator(), d.exponent() + 1); }

// Cap for a decode that has read `partial` of the next instruction.
Dyadic decode_cap(BitString& partial) {
  const auto decoded = decode_step(partial, 0);
  if (std::holds_alternative<InvalidEncoding>(decoded)) return Dyadic(0);
  if (const auto* ins = std::get_if<Instruction>(&decoded)) {
    if (ins->op == Opcode::Halt || ins->op == Opcode::Sim) return Dyadic(1);
    return Dyadic::unit(1);
  }
  partial.push_back(false);
  Dyadic sum = decode_cap(partial);
  partial.pop_back();
  partial.push_back(true);
  sum += decode_cap(partial);
  partial.pop_back();
  return half_of(sum);
}

}  // namespace

Dyadic subtree_halting_cap(const BitString& program) {
  std::size_t pos = 0;
  for (;;) {
    const auto decoded = decode_step(program, pos);
    if (std::holds_alternative<InvalidEncoding>(decoded)) return Dyadic(0);
    if (std::holds_alternative<NeedsBit>(decoded)) {
      BitString partial = program.suffix_from(pos);
      return decode_cap(partial);
    }
    const auto& ins = std::get<Instruction>(decoded);
    if (ins.op == Opcode::Sim || ins.op == Opcode::Halt) return Dyadic(1);
    pos += ins.width();
  }
}

}  // namespace omegaforge
