#pragma once

// Independent reference implementations used as test oracles.  Nothing
// here includes the library: programs and outputs are plain '0'/'1'
// strings, and the machine is re-derived from the opcode table.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ref {

enum class Kind { Halted, NeedsBit, Invalid, OutOfSteps };

struct Result {
  Kind kind = Kind::NeedsBit;
  std::string output;
  std::size_t consumed = 0;
  std::uint64_t steps = 0;
  bool output_truncated = false;  // output grew too large to keep
};

/// Whole-program interpreter: no divergence proofs, only a step budget.
Result run(const std::string& program, std::uint64_t budget);

/// Guest 0 (gamma length + payload) or guest 1 (unary) on a bit stream.
Result run_guest(int guest, const std::string& stream);

/// Leaves of the program tree down to max_len: every program on which the
/// machine does something other than ask for another bit, plus the
/// programs of length max_len that still ask.
struct Leaf {
  std::string program;
  Result result;
};
std::vector<Leaf> enumerate(std::size_t max_len, std::uint64_t budget);

/// Shortest (then lexicographically smallest) exactly-consuming halting
/// program for each output, among the given leaves.
std::map<std::string, std::string> shortest_programs(const std::vector<Leaf>& leaves);

/// All bit strings of exactly n bits, in increasing order.
std::vector<std::string> all_strings(std::size_t n);

/// Elias gamma code of v >= 1.
std::string gamma(std::uint64_t v);

}  // namespace ref
