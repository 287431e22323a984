#pragma once

#include <cstddef>
#include <optional>

#include "omegaforge/bits.hpp"
#include "omegaforge/dyadic.hpp"

namespace omegaforge {

enum class MassKind { Halt, Refuted, Unknown };

/// Exact accounting of Kraft mass over the program tree.  Each leaf of
/// length n contributes 2^-n to exactly one of halt/refuted/unknown, so the
/// three always sum to 1 over a closed tree.  Merging ledgers is addition,
/// which makes the result independent of merge order.
///
/// `unknown_halt_cap` is a sound upper bound on how much of the unknown mass
/// can still turn out to halt (see subtree_halting_cap).  When absent the
/// whole unknown mass is assumed able to halt.
struct MassLedger {
  Dyadic halt;
  Dyadic refuted;
  Dyadic unknown;
  std::optional<Dyadic> unknown_halt_cap;

  void add(MassKind kind, std::size_t length);
  MassLedger& operator+=(const MassLedger& other);
  Dyadic total() const { return halt + refuted + unknown; }
  /// The portion of unknown mass that may still halt.
  Dyadic halting_headroom() const {
    return unknown_halt_cap && *unknown_halt_cap < unknown ? *unknown_halt_cap : unknown;
  }

  friend bool operator==(const MassLedger&, const MassLedger&) = default;
};

/// Upper bound on the fraction of an undecided node's subtree that can
/// halt, computed from the program bits alone.
///
/// The machine can only halt by executing a freshly decoded HALT (or by a
/// guest it hands over to), and every opcode bit beyond the program is
/// uniform.  Per decoded instruction: 3/16 halts or hands over to a guest,
/// 3/16 is a reserved encoding, 5/8 continues and at best reaches the next
/// decode.  So from an instruction boundary the cap is W = 3/16 + 5/8 W =
/// 1/2; inside a partly read instruction it is the average over the missing
/// bits; once a guest has taken over it is 1.
Dyadic subtree_halting_cap(const BitString& program);

}  // namespace omegaforge
