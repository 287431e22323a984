#include "omegaforge/bitvm.hpp"

#include <zlib.h>

#include <cstdio>

namespace omegaforge {

unsigned Instruction::width() const noexcept {
  switch (op) {
    case Opcode::Inc: return 4;
    case Opcode::DecJnz: return 7;
    case Opcode::Sim: return 5;
    default: return 3;
  }
}

DecodeResult decode_step(const Program& program, std::size_t frontier) {
  if (frontier + kOpcodeBits > program.size()) return NeedsBit{};
  const auto code = read_uint(program, frontier, kOpcodeBits);
  const std::size_t operands = frontier + kOpcodeBits;
  Instruction ins;
  switch (code) {
    case 0b000: ins.op = Opcode::Halt; return ins;
    case 0b001: ins.op = Opcode::Out0; return ins;
    case 0b010: ins.op = Opcode::Out1; return ins;
    case 0b011: ins.op = Opcode::Dbl; return ins;
    case 0b100:
      if (operands + 1 > program.size()) return NeedsBit{};
      ins.op = Opcode::Inc;
      ins.reg = program[operands] ? Register::B : Register::A;
      return ins;
    case 0b101:
      if (operands + 4 > program.size()) return NeedsBit{};
      ins.op = Opcode::DecJnz;
      ins.reg = program[operands] ? Register::B : Register::A;
      ins.jump = static_cast<std::uint8_t>(read_uint(program, operands + 1, 3));
      return ins;
    case 0b110: {
      if (operands + 2 > program.size()) return NeedsBit{};
      const auto guest = static_cast<std::uint8_t>(read_uint(program, operands, 2));
      if (!is_registered_guest(guest)) return InvalidEncoding{"reserved guest code", 5};
      ins.op = Opcode::Sim;
      ins.guest = guest;
      return ins;
    }
    default: return InvalidEncoding{"reserved opcode 111", 3};
  }
}

void encode_instruction(BitString& out, const Instruction& ins) {
  switch (ins.op) {
    case Opcode::Halt: append_uint(out, 0b000, 3); break;
    case Opcode::Out0: append_uint(out, 0b001, 3); break;
    case Opcode::Out1: append_uint(out, 0b010, 3); break;
    case Opcode::Dbl: append_uint(out, 0b011, 3); break;
    case Opcode::Inc:
      append_uint(out, 0b100, 3);
      out.push_back(ins.reg == Register::B);
      break;
    case Opcode::DecJnz:
      append_uint(out, 0b101, 3);
      out.push_back(ins.reg == Register::B);
      append_uint(out, ins.jump & 7u, 3);
      break;
    case Opcode::Sim:
      append_uint(out, 0b110, 3);
      append_uint(out, ins.guest & 3u, 2);
      break;
    case Opcode::Invalid: append_uint(out, 0b111, 3); break;
  }
}

namespace asm_ {
Instruction halt() { return {Opcode::Halt}; }
Instruction out(bool bit) { return {bit ? Opcode::Out1 : Opcode::Out0}; }
Instruction dbl() { return {Opcode::Dbl}; }
Instruction inc(Register r) { return {Opcode::Inc, r}; }
Instruction decjnz(Register r, std::uint8_t k) { return {Opcode::DecJnz, r, k}; }
Instruction sim(Guest g) {
  return {Opcode::Sim, Register::A, 0, static_cast<std::uint8_t>(g)};
}
Program assemble(std::span<const Instruction> code) {
  Program p;
  for (const auto& ins : code) encode_instruction(p, ins);
  return p;
}
}  // namespace asm_

const char* to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Halted: return "HALTED";
    case OutcomeKind::NeedsBit: return "NEEDS_BIT";
    case OutcomeKind::Invalid: return "INVALID";
    case OutcomeKind::Diverges: return "DIVERGES";
    case OutcomeKind::Unknown: return "UNKNOWN";
  }
  return "?";
}

const char* to_string(DivergenceProof proof) {
  switch (proof) {
    case DivergenceProof::None: return "NONE";
    case DivergenceProof::Cycle: return "CYCLE";
    case DivergenceProof::MonotoneCycle: return "MONOTONE_CYCLE";
  }
  return "?";
}

// ---------------------------------------------------------------------------

void DivergenceDetector::reset(std::uint64_t frontier) {
  last_.clear();
  frontier_ = frontier;
  zero_a_ = zero_b_ = 0;
  primed_ = true;
  has_saved_ = false;
  power_ = 1;
  lam_ = 0;
}

void DivergenceDetector::note_branch(Branch branch) noexcept {
  if (branch == Branch::ZeroA) ++zero_a_;
  if (branch == Branch::ZeroB) ++zero_b_;
}

DivergenceProof DivergenceDetector::observe(std::size_t pc, std::uint64_t a, std::uint64_t b,
                                            std::uint64_t frontier) {
  if (!primed_ || frontier != frontier_) reset(frontier);

  if (has_saved_ && saved_pc_ == pc && saved_a_ == a && saved_b_ == b) {
    return DivergenceProof::Cycle;
  }
  if (++lam_ == power_) {
    saved_pc_ = pc;
    saved_a_ = a;
    saved_b_ = b;
    has_saved_ = true;
    power_ *= 2;
    lam_ = 0;
  }

  if (pc >= last_.size()) last_.resize(pc + 1);
  Visit& v = last_[pc];
  if (v.seen) {
    if (v.a == a && v.b == b) return DivergenceProof::Cycle;
    const bool a_ok = (zero_a_ == v.zero_a) ? a >= v.a : a == v.a;
    const bool b_ok = (zero_b_ == v.zero_b) ? b >= v.b : b == v.b;
    if (a_ok && b_ok) return DivergenceProof::MonotoneCycle;
  }
  v = Visit{a, b, zero_a_, zero_b_, true};
  return DivergenceProof::None;
}

DivergenceProof prove_divergence(std::span<const TraceEntry> trace) {
  DivergenceDetector detector;
  for (const auto& e : trace) {
    if (auto proof = detector.observe(e.pc, e.reg_a, e.reg_b, e.frontier);
        proof != DivergenceProof::None) {
      return proof;
    }
    detector.note_branch(e.branch);
  }
  return DivergenceProof::None;
}

// ---------------------------------------------------------------------------

bool GuestMachine::feed(bool bit) {
  if (guest_ == Guest::Unary) {
    if (bit) {
      output_.push_back(true);
      return false;
    }
    halted_ = true;
    return true;
  }

  auto start_payload = [this] {
    payload_left_ = value_ - 1;
    phase_ = Phase::Payload;
    if (payload_left_ == 0) halted_ = true;
    return halted_;
  };

  switch (phase_) {
    case Phase::Zeros:
      if (!bit) {
        if (++zeros_ >= 64) overflow_ = true;
        return false;
      }
      value_ = 1;
      value_bits_left_ = zeros_;
      if (value_bits_left_ == 0) return start_payload();
      phase_ = Phase::Value;
      return false;
    case Phase::Value:
      value_ = (value_ << 1) | (bit ? 1u : 0u);
      if (--value_bits_left_ == 0) return start_payload();
      return false;
    case Phase::Payload:
      output_.push_back(bit);
      if (--payload_left_ == 0) halted_ = true;
      return halted_;
  }
  return false;
}

// ---------------------------------------------------------------------------

RunOutcome Machine::finish(OutcomeKind kind, std::string detail, DivergenceProof proof) {
  RunOutcome out;
  out.kind = kind;
  if (kind == OutcomeKind::Halted) out.output = state_.output;
  out.bits_consumed = state_.frontier;
  out.steps = state_.steps;
  out.proof = proof;
  out.detail = std::move(detail);
  terminal_ = out;
  return out;
}

RunOutcome Machine::step_guest(const Program& program) {
  for (;;) {
    if (state_.steps >= limits_.max_steps) return finish(OutcomeKind::Unknown, "step budget");
    if (state_.frontier >= program.size()) {
      RunOutcome pending;
      pending.kind = OutcomeKind::NeedsBit;
      pending.bits_consumed = state_.frontier;
      pending.steps = state_.steps;
      return pending;
    }
    const bool bit = program[state_.frontier];
    ++state_.frontier;
    ++state_.steps;
    if (guest_->feed(bit)) {
      if (state_.output.size() + guest_->output().size() > limits_.max_output_bits) {
        return finish(OutcomeKind::Unknown, "output limit");
      }
      state_.output.append(guest_->output());
      return finish(OutcomeKind::Halted);
    }
    if (guest_->overflowed()) return finish(OutcomeKind::Invalid, "literal length overflow");
  }
}

RunOutcome Machine::advance(const Program& program) {
  if (terminal_) return *terminal_;
  MachineState& s = state_;
  for (;;) {
    if (guest_) return step_guest(program);
    if (s.steps >= limits_.max_steps) return finish(OutcomeKind::Unknown, "step budget");

    if (s.pc == code_.size()) {
      auto decoded = decode_step(program, s.frontier);
      if (std::holds_alternative<NeedsBit>(decoded)) {
        RunOutcome pending;
        pending.kind = OutcomeKind::NeedsBit;
        pending.bits_consumed = s.frontier;
        pending.steps = s.steps;
        return pending;
      }
      if (auto* bad = std::get_if<InvalidEncoding>(&decoded)) {
        ++s.steps;
        s.frontier += bad->width;
        return finish(OutcomeKind::Invalid, bad->reason);
      }
      const auto ins = std::get<Instruction>(decoded);
      code_.push_back(ins);
      s.frontier += ins.width();
    }

    if (auto proof = detector_.observe(s.pc, s.reg_a, s.reg_b, s.frontier);
        proof != DivergenceProof::None) {
      // The recurring state closes the trace so the proof can be replayed.
      if (trace_) trace_->push_back(TraceEntry{s.pc, s.reg_a, s.reg_b, s.frontier, Branch::None});
      return finish(OutcomeKind::Diverges, {}, proof);
    }

    const Instruction ins = code_[s.pc];
    TraceEntry entry{s.pc, s.reg_a, s.reg_b, s.frontier, Branch::None};
    ++s.steps;
    switch (ins.op) {
      case Opcode::Halt:
        if (trace_) trace_->push_back(entry);
        return finish(OutcomeKind::Halted);
      case Opcode::Out0:
      case Opcode::Out1:
        if (s.output.size() + 1 > limits_.max_output_bits) {
          return finish(OutcomeKind::Unknown, "output limit");
        }
        s.output.push_back(ins.op == Opcode::Out1);
        ++s.pc;
        break;
      case Opcode::Dbl:
        if (s.output.size() * 2 > limits_.max_output_bits) {
          return finish(OutcomeKind::Unknown, "output limit");
        }
        s.output.append_copy_of_self();
        ++s.pc;
        break;
      case Opcode::Inc:
        ++(ins.reg == Register::A ? s.reg_a : s.reg_b);
        ++s.pc;
        break;
      case Opcode::DecJnz: {
        auto& reg = ins.reg == Register::A ? s.reg_a : s.reg_b;
        if (reg > 0) {
          if (ins.jump > s.pc) return finish(OutcomeKind::Invalid, "jump before instruction 0");
          --reg;
          s.pc -= ins.jump;
          entry.branch = ins.reg == Register::A ? Branch::PositiveA : Branch::PositiveB;
        } else {
          ++s.pc;
          entry.branch = ins.reg == Register::A ? Branch::ZeroA : Branch::ZeroB;
        }
        break;
      }
      case Opcode::Sim:
        guest_.emplace(static_cast<Guest>(ins.guest));
        ++s.pc;
        break;
      case Opcode::Invalid:
        return finish(OutcomeKind::Invalid, "reserved opcode 111");
    }
    detector_.note_branch(entry.branch);
    if (trace_) trace_->push_back(entry);
  }
}

RunOutcome run(const Program& program, const MachineLimits& limits) {
  Machine m(limits);
  return m.advance(program);
}

RunOutcome run(const Program& program, std::uint64_t step_budget) {
  return run(program, MachineLimits{step_budget});
}

std::pair<RunOutcome, std::vector<TraceEntry>> run_traced(const Program& program,
                                                          std::uint64_t step_budget) {
  std::vector<TraceEntry> trace;
  Machine m(MachineLimits{step_budget});
  m.set_trace(&trace);
  auto outcome = m.advance(program);
  return {std::move(outcome), std::move(trace)};
}

bool is_registered_guest(std::uint8_t guest_code) noexcept {
  return guest_code == static_cast<std::uint8_t>(Guest::Literal) ||
         guest_code == static_cast<std::uint8_t>(Guest::Unary);
}

RunOutcome run_guest(std::uint8_t guest_code, const BitString& stream,
                     std::uint64_t step_budget) {
  if (!is_registered_guest(guest_code)) {
    throw Error("unknown guest code " + std::to_string(guest_code), true);
  }
  GuestMachine guest(static_cast<Guest>(guest_code));
  RunOutcome out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (out.steps >= step_budget) {
      out.kind = OutcomeKind::Unknown;
      out.detail = "step budget";
      return out;
    }
    ++out.steps;
    out.bits_consumed = i + 1;
    if (guest.feed(stream[i])) {
      out.kind = OutcomeKind::Halted;
      out.output = guest.output();
      return out;
    }
    if (guest.overflowed()) {
      out.kind = OutcomeKind::Invalid;
      out.detail = "literal length overflow";
      return out;
    }
  }
  out.kind = OutcomeKind::NeedsBit;
  return out;
}

Program simulation_prefix(std::uint8_t guest_code) {
  if (!is_registered_guest(guest_code)) {
    throw Error("unknown guest code " + std::to_string(guest_code), true);
  }
  Program p;
  append_uint(p, 0b110, 3);
  append_uint(p, guest_code, 2);
  return p;
}

const std::string& machine_version() {
  static const std::string version = [] {
    // Everything that can change a node's classification belongs here.
    const std::string descriptor =
        "bitvm/1;ops=000:HALT,001:OUT0,010:OUT1,011:DBL,100r:INC,101rkkk:DECJNZ(idx-k),"
        "110gg:SIM,111:INVALID;guests=00:literal-gamma,01:unary;"
        "steps=1/instr,1/guest-bit,budget-before-decode;"
        "divergence=cycle+brent,monotone-with-zero-equality;max_output_bits=16777216";
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(descriptor.data()),
                           static_cast<uInt>(descriptor.size()));
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return std::string(buf);
  }();
  return version;
}

}  // namespace omegaforge
