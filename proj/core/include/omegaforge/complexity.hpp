#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "omegaforge/explorer.hpp"

namespace omegaforge {

enum class BoundKind {
  ExactWithin,   // no program of length <= search_bound does better
  Upper,         // a witness exists; shorter programs were not ruled out
  AboveBound,    // no program of length <= search_bound produces the subject
  Undetermined,  // nothing found, but budget-limited programs remain open
};
const char* to_string(BoundKind kind);

struct ComplexityBound {
  BitString subject;
  BoundKind kind = BoundKind::Upper;
  std::size_t value = 0;  // |witness|; meaningless without a witness
  Program witness;
  std::size_t search_bound = 0;

  bool has_witness() const noexcept {
    return kind == BoundKind::ExactWithin || kind == BoundKind::Upper;
  }
};

/// Shortest known program per output over a closed exploration.  Ties go
/// to the lexicographically smallest program.
class ComplexityIndex {
 public:
  explicit ComplexityIndex(const NodeStore& store);

  std::size_t bound() const noexcept { return bound_; }
  const Program* shortest(const BitString& output) const;
  /// Length of the shortest program that ran out of step budget (or hit
  /// the output limit) and so might still halt with any output.
  std::optional<std::size_t> shortest_pending() const noexcept { return pending_; }
  const std::unordered_map<std::string, Program>& entries() const noexcept { return best_; }

 private:
  std::size_t bound_ = 0;
  std::optional<std::size_t> pending_;
  std::unordered_map<std::string, Program> best_;
};

/// Step budget used when verifying constructed witnesses for `subject`.
std::uint64_t witness_step_budget(const BitString& subject);

/// Literal-guest program printing `payload`:
/// SIM 00, gamma(|payload| + 1), payload.
Program literal_program(const BitString& payload);

/// Shortest OUT/DBL straight-line program (plus HALT) printing `subject`.
Program straight_line_program(const BitString& subject);

/// Best witness among the literal guest, the unary guest (all-ones
/// subjects), OUT/DBL straight-line code and `index`, verified by running it.
ComplexityBound complexity_upper(const BitString& subject, const ComplexityIndex* index = nullptr);

/// Minimum over all halting programs of length <= bound.  Throws Error if
/// bound exceeds the index's exploration depth.
ComplexityBound complexity_exact(const BitString& subject, const ComplexityIndex& index,
                                 std::size_t bound);

struct InvarianceRow {
  BitString subject;
  std::size_t guest_complexity = 0;
  Program guest_witness;
  std::optional<std::size_t> machine_complexity;
  Program machine_witness;
};

struct InvarianceReport {
  std::uint8_t guest = 0;
  std::size_t bound = 0;
  std::vector<InvarianceRow> rows;  // sorted by (guest_complexity, subject)
  long max_gap = 0;                 // max over rows of H_U - H_guest
  bool holds = true;                // H_U <= H_guest + 5 everywhere
};

/// Enumerates every guest program of length <= bound and checks that the
/// machine's own complexity of each reachable output is within the
/// simulation prefix length of the guest's.  `machine_index` must cover
/// programs of length bound + 5.
InvarianceReport invariance_audit(std::uint8_t guest, std::size_t bound,
                                  const ComplexityIndex& machine_index);

struct CountingReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t count = 0;
  std::uint64_t bound = 0;  // 2^(m+1) - 1
  bool pass = true;
};

/// Counts distinct outputs of length n with complexity <= m and checks the
/// count against the number of programs of length <= m.
CountingReport counting_check(std::size_t n, std::size_t m, const ComplexityIndex& index);

struct ProbeRow {
  std::size_t m = 0;
  BitString prefix;
  ComplexityBound bound;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  bool non_decreasing = true;
};

/// Exact complexity of every prefix of `certified` within the index depth.
/// A subject above the bound counts as bound + 1 for the monotonicity flag.
ProbeReport irreducibility_probe(const BitString& certified, const ComplexityIndex& index);

}  // namespace omegaforge
