#pragma once

// A theory artifact is a program whose output encodes a finite list of
// assertions "bit k of Omega is b".  Output encoding:
//
//   1 b1 b2 ... bk                         bits 1..k, in order (prefix form)
//   0 gamma(count+1) { gamma(k) b }*       any other list (list form)
//
// The prefix form is used exactly when the list is 1..k in order.  The
// carrier built here prints the encoding through the literal guest.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "omegaforge/complexity.hpp"
#include "omegaforge/omega.hpp"

namespace omegaforge {

struct Assertion {
  std::uint64_t index = 1;  // 1-based; bit 1 has weight 1/2
  bool value = false;
  friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct TheoryArtifact {
  std::vector<Assertion> assertions;
  Program carrier;
};

BitString encode_assertions(const std::vector<Assertion>& assertions);
/// Throws Error on malformed input or repeated indices.
std::vector<Assertion> decode_assertions(const BitString& encoding);

/// Builds a theory with a literal-guest carrier.  Indices must be positive
/// and distinct.
TheoryArtifact make_theory(std::vector<Assertion> assertions);

/// Runs `carrier` and decodes its output.  Throws Error if it does not halt
/// (with exact consumption) within `step_budget`.
TheoryArtifact theory_from_carrier(const Program& carrier, std::uint64_t step_budget);

/// Reads a theory file: either a line "carrier <bits>" or lines "<k> <b>".
/// Blank lines and lines starting with '#' are ignored.
TheoryArtifact parse_theory_file(std::string_view text, std::uint64_t step_budget);

/// The theory asserting exactly the given certified bits.
TheoryArtifact certified_theory(const BitString& certified);

/// m + 2 floor(log2(m (ceil(log2 m) + 1) + 1)) + 11: the size the carrier of
/// certified_theory() must stay within.
std::size_t certified_theory_size_limit(std::size_t m);

enum class AssertionStatus { Confirmed, Contradicted, Unverifiable };
const char* to_string(AssertionStatus status);

struct AssertionCheck {
  Assertion assertion;
  AssertionStatus status = AssertionStatus::Unverifiable;
};

struct TheoryAudit {
  std::size_t assertion_count = 0;
  std::vector<AssertionCheck> checks;
  std::size_t confirmed = 0;
  std::size_t contradicted = 0;
  std::size_t unverifiable = 0;
  bool sound = true;  // no assertion contradicts a certified bit

  std::size_t carrier_size = 0;
  ComplexityBound theory_complexity;  // upper bound on H of the carrier output
  long c_prime_observed = 0;          // assertion_count - theory_complexity.value

  TheoryArtifact converse;  // asserts every certified bit
  std::size_t converse_size = 0;
  std::size_t converse_limit = 0;
  bool converse_within_limit = true;
};

TheoryAudit theory_audit(const TheoryArtifact& theory, const OmegaBits& certified,
                         const ComplexityIndex* index = nullptr);

}  // namespace omegaforge
