#pragma once

// The self-delimiting binary machine.  Programs are read on demand, one
// instruction at a time; the machine never looks past the last bit it needs,
// so the set of programs it halts on with exact consumption is prefix-free.
//
// Encoding (first bit read is most significant in every field):
//
//   000            HALT
//   001            OUT0
//   010            OUT1
//   011            DBL      output := output ++ output
//   100 r          INC r
//   101 r kkk      DECJNZ r,k   if r > 0: r -= 1, jump to (index - k)
//   110 gg         SIM g    remaining bits are read by guest machine g
//   111            reserved (INVALID)
//
// Guests: 00 literal (gamma(n+1) then n payload bits), 01 unary (1s up to
// the first 0).  Guest codes 10 and 11 are reserved.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "omegaforge/bits.hpp"

namespace omegaforge {

enum class Opcode : std::uint8_t { Halt, Out0, Out1, Dbl, Inc, DecJnz, Sim, Invalid };
enum class Register : std::uint8_t { A = 0, B = 1 };

/// Two-bit guest machine codes behind the SIM opcode.
enum class Guest : std::uint8_t { Literal = 0b00, Unary = 0b01 };

constexpr unsigned kOpcodeBits = 3;
constexpr unsigned kSimPrefixBits = 5;

struct Instruction {
  Opcode op = Opcode::Halt;
  Register reg = Register::A;
  std::uint8_t jump = 0;   // DECJNZ distance field (0-7)
  std::uint8_t guest = 0;  // SIM guest code (0-3)

  unsigned width() const noexcept;
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct NeedsBit {};
struct InvalidEncoding {
  std::string reason;
  std::size_t width = 0;  // bits read before the fault was recognised
};
using DecodeResult = std::variant<Instruction, NeedsBit, InvalidEncoding>;

/// Decodes the instruction starting at bit `frontier` of `program`.
DecodeResult decode_step(const Program& program, std::size_t frontier);

/// Appends the encoding of `ins` to `out`.  Used to assemble test programs
/// and witnesses.
void encode_instruction(BitString& out, const Instruction& ins);

namespace asm_ {
Instruction halt();
Instruction out(bool bit);
Instruction dbl();
Instruction inc(Register r);
Instruction decjnz(Register r, std::uint8_t k);
Instruction sim(Guest g);
Program assemble(std::span<const Instruction> code);
}  // namespace asm_

enum class OutcomeKind : std::uint8_t { Halted, NeedsBit, Invalid, Diverges, Unknown };
enum class DivergenceProof : std::uint8_t { None, Cycle, MonotoneCycle };

const char* to_string(OutcomeKind kind);
const char* to_string(DivergenceProof proof);

struct RunOutcome {
  OutcomeKind kind = OutcomeKind::NeedsBit;
  BitString output;
  std::uint64_t bits_consumed = 0;
  std::uint64_t steps = 0;
  DivergenceProof proof = DivergenceProof::None;
  std::string detail;
};

struct MachineState {
  std::size_t pc = 0;
  std::uint64_t reg_a = 0;
  std::uint64_t reg_b = 0;
  std::uint64_t frontier = 0;
  BitString output;
  std::uint64_t steps = 0;
};

/// Branch taken by the instruction executed from a trace entry.
enum class Branch : std::uint8_t { None, PositiveA, PositiveB, ZeroA, ZeroB };

/// Control state on arrival at an instruction, and the branch it then took.
struct TraceEntry {
  std::size_t pc = 0;
  std::uint64_t reg_a = 0;
  std::uint64_t reg_b = 0;
  std::uint64_t frontier = 0;
  Branch branch = Branch::None;
};

/// Online nontermination prover for one run.  Only states with the same
/// frontier are compared, so a proof never spans a bit read.
///
/// CYCLE: an exact control state (pc, A, B, frontier) recurs.  Detected both
/// against the previous visit to the same pc and by Brent's algorithm.
///
/// MONOTONE_CYCLE: a (pc, frontier) recurs with registers that did not
/// shrink, where every DECJNZ in between took its positive branch.  A
/// register whose DECJNZ took the zero branch in between is also accepted
/// when its value is unchanged, since the same branch is then forced again.
class DivergenceDetector {
 public:
  /// Call on arrival at `pc`, before executing it.
  DivergenceProof observe(std::size_t pc, std::uint64_t a, std::uint64_t b,
                          std::uint64_t frontier);
  void note_branch(Branch branch) noexcept;
  void reset(std::uint64_t frontier);

 private:
  struct Visit {
    std::uint64_t a = 0, b = 0, zero_a = 0, zero_b = 0;
    bool seen = false;
  };
  std::vector<Visit> last_;
  std::uint64_t frontier_ = 0;
  std::uint64_t zero_a_ = 0, zero_b_ = 0;
  bool primed_ = false;

  std::size_t saved_pc_ = 0;
  std::uint64_t saved_a_ = 0, saved_b_ = 0;
  std::uint64_t power_ = 1, lam_ = 0;
  bool has_saved_ = false;
};

/// Runs the detector over a recorded trace.
DivergenceProof prove_divergence(std::span<const TraceEntry> trace);

/// Resumable guest machine; fed one bit at a time.
class GuestMachine {
 public:
  explicit GuestMachine(Guest guest) : guest_(guest) {}
  /// Returns true once the guest has halted.  Feeding a halted guest is a
  /// logic error.
  bool feed(bool bit);
  bool halted() const noexcept { return halted_; }
  const BitString& output() const noexcept { return output_; }
  /// Set when a literal length field no longer fits in 64 bits.
  bool overflowed() const noexcept { return overflow_; }

 private:
  enum class Phase : std::uint8_t { Zeros, Value, Payload };
  Guest guest_;
  Phase phase_ = Phase::Zeros;
  unsigned zeros_ = 0;
  unsigned value_bits_left_ = 0;
  std::uint64_t value_ = 0;
  std::uint64_t payload_left_ = 0;
  bool halted_ = false;
  bool overflow_ = false;
  BitString output_;
};

struct MachineLimits {
  std::uint64_t max_steps = 1'000'000;
  /// Outputs longer than this end the run as UNKNOWN (a resource limit, not
  /// a verdict).
  std::uint64_t max_output_bits = std::uint64_t{1} << 24;
};

/// A suspended or finished run.  `advance` continues from where the previous
/// call stopped; the program passed must extend the bits already consumed.
/// Copying a Machine forks the run, which the explorer uses to share a
/// parent's work between its two children.
class Machine {
 public:
  explicit Machine(MachineLimits limits = {}) : limits_(limits) {}

  RunOutcome advance(const Program& program);

  const MachineState& state() const noexcept { return state_; }
  std::span<const Instruction> code() const noexcept { return code_; }
  /// Records every executed instruction into `sink` (nullptr to stop).
  void set_trace(std::vector<TraceEntry>* sink) noexcept { trace_ = sink; }

 private:
  RunOutcome finish(OutcomeKind kind, std::string detail = {},
                    DivergenceProof proof = DivergenceProof::None);
  RunOutcome step_guest(const Program& program);

  MachineLimits limits_;
  MachineState state_;
  std::vector<Instruction> code_;
  std::optional<GuestMachine> guest_;
  DivergenceDetector detector_;
  std::optional<RunOutcome> terminal_;
  std::vector<TraceEntry>* trace_ = nullptr;
};

/// Runs `program` from scratch.
RunOutcome run(const Program& program, std::uint64_t step_budget);
RunOutcome run(const Program& program, const MachineLimits& limits);

/// Runs `program` and also returns its execution trace.
std::pair<RunOutcome, std::vector<TraceEntry>> run_traced(const Program& program,
                                                          std::uint64_t step_budget);

/// Runs guest `guest_code` directly on `stream`.  One step per bit read.
/// Throws Error for reserved guest codes.
RunOutcome run_guest(std::uint8_t guest_code, const BitString& stream,
                     std::uint64_t step_budget = UINT64_MAX);

/// The 5-bit prefix (SIM opcode + guest code) that makes the machine behave
/// as the guest on the rest of its input.
Program simulation_prefix(std::uint8_t guest_code);

bool is_registered_guest(std::uint8_t guest_code) noexcept;

/// Hash of the machine definition, divergence rules and limits that affect
/// classification.  Checkpoints from a different version are rejected.
const std::string& machine_version();

}  // namespace omegaforge
