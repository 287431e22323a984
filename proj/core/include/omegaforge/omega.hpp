#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omegaforge/checkpoint.hpp"
#include "omegaforge/explorer.hpp"
#include "omegaforge/ledger.hpp"

namespace omegaforge {

/// Leading bits of the halting probability pinned down by a ledger.
/// certified[0] carries weight 1/2.
struct OmegaBits {
  BitString certified;
  Dyadic lower;
  Dyadic upper;

  /// "0.b1b2..." (or "0." when nothing is certified).
  std::string as_fraction_text() const;
};

/// lower = halt mass, upper = lower + the halting headroom of the unknown
/// mass.  Bit i is certified iff floor(lower * 2^i) == floor(upper * 2^i);
/// certification stops at the first failure and never runs past the finer
/// of the two endpoints' denominators.
OmegaBits certify_bits(const MassLedger& ledger);

enum class OracleVerdict { Halts, Diverges, NotConverged };
const char* to_string(OracleVerdict verdict);

struct OracleOptions {
  /// Dovetailing stages before giving up with NotConverged.
  std::size_t max_stages = 8;
  unsigned threads = 1;
};

/// Decides halting for every program of length <= N from N certified bits.
///
/// Explores under a growing (length, steps) ladder until the halting mass
/// reaches the value of b1..bN.  From then on no undiscovered program of
/// length <= N can halt: it would push the halting probability to at least
/// 0.b1..bN + 2^-N, contradicting the first N bits.
class HaltingOracle {
 public:
  HaltingOracle(OmegaBits bits, OracleOptions options = {});

  /// Throws Error when |query| exceeds N.
  OracleVerdict query(const Program& query);

  std::size_t bits_known() const noexcept { return bits_.certified.size(); }
  /// Budget at which the target mass was reached, once it has been.
  std::optional<ExploreBudget> settled_budget() const;
  std::size_t stages_run() const noexcept { return stages_; }

 private:
  void settle();

  OmegaBits bits_;
  OracleOptions options_;
  Dyadic target_;
  bool settled_ = false;
  bool failed_ = false;
  std::size_t stages_ = 0;
  std::optional<NodeStore> store_;
};

OracleVerdict halting_oracle_from_omega(const OmegaBits& bits, const Program& query,
                                        const OracleOptions& options = {});

struct BlockFrequencies {
  unsigned block_size = 1;
  std::uint64_t windows = 0;
  /// Observed blocks only, keyed by their digits.
  std::map<std::string, std::uint64_t> counts;
  double frequency(const std::string& block) const;
};

/// Overlapping-window block counts.  block_size must be 1..4 and at most
/// the length of `bits`.
BlockFrequencies block_frequency_report(const BitString& bits, unsigned block_size);

struct ProgressRow {
  ExploreBudget budget;
  std::size_t certified_count = 0;
  BitString certified;
  Dyadic lower;
  Dyadic upper;
  Dyadic unknown_mass;
};

struct ProgressReport {
  std::vector<ProgressRow> rows;
  /// True when every row whose budget refines an earlier row's certifies
  /// at least as many bits.
  bool monotone = true;
};

/// One row per checkpoint, in the order given.  Throws Error when the
/// checkpoints come from different machine versions.
ProgressReport progress_report(const std::vector<Checkpoint>& checkpoints);

}  // namespace omegaforge
