#include "omegaforge/omega.hpp"

#include <algorithm>

namespace omegaforge {

std::string OmegaBits::as_fraction_text() const { return "0." + certified.digits(); }

OmegaBits certify_bits(const MassLedger& ledger) {
  OmegaBits out;
  out.lower = ledger.halt;
  out.upper = ledger.halt + ledger.halting_headroom();
  const unsigned limit = std::max(out.lower.exponent(), out.upper.exponent());
  for (unsigned i = 1; i <= limit; ++i) {
    const mpz_class lo = out.lower.floor_scaled(i);
    if (lo != out.upper.floor_scaled(i)) break;
    out.certified.push_back(mpz_odd_p(lo.get_mpz_t()) != 0);
  }
  return out;
}

const char* to_string(OracleVerdict verdict) {
  switch (verdict) {
    case OracleVerdict::Halts: return "HALTS";
    case OracleVerdict::Diverges: return "DIVERGES";
    case OracleVerdict::NotConverged: return "NOT_CONVERGED";
  }
  return "?";
}

HaltingOracle::HaltingOracle(OmegaBits bits, OracleOptions options)
    : bits_(std::move(bits)),
      options_(options),
      target_(Dyadic::from_binary_fraction(bits_.certified)) {}

void HaltingOracle::settle() {
  if (settled_ || failed_) return;
  const std::size_t n = std::max<std::size_t>(bits_known(), 1);
  std::uint64_t steps = 64;
  for (std::size_t stage = 0; stage < options_.max_stages; ++stage) {
    const ExploreBudget budget{std::min<std::size_t>(n + 4 * stage, 62), steps};
    ExploreOptions opts;
    opts.threads = options_.threads;
    auto result = explore(budget, opts);
    ++stages_;
    if (result.ledger.halt >= target_) {
      store_ = std::move(result.store);
      settled_ = true;
      return;
    }
    // The true value can never reach the target: the bits were not ours.
    if (result.ledger.halt + result.ledger.halting_headroom() < target_) break;
    if (steps < (std::uint64_t{1} << 40)) steps *= 8;
  }
  failed_ = true;
}

OracleVerdict HaltingOracle::query(const Program& query) {
  if (query.size() > bits_known()) {
    throw Error("query of length " + std::to_string(query.size()) + " exceeds the " +
                    std::to_string(bits_known()) + " certified bits",
                true);
  }
  settle();
  if (!settled_) return OracleVerdict::NotConverged;
  const NodeRecord* rec = store_->find(query);
  return rec != nullptr && rec->status == NodeStatus::Halt ? OracleVerdict::Halts
                                                           : OracleVerdict::Diverges;
}

std::optional<ExploreBudget> HaltingOracle::settled_budget() const {
  if (!store_) return std::nullopt;
  return store_->budget();
}

OracleVerdict halting_oracle_from_omega(const OmegaBits& bits, const Program& query,
                                        const OracleOptions& options) {
  HaltingOracle oracle(bits, options);
  return oracle.query(query);
}

double BlockFrequencies::frequency(const std::string& block) const {
  const auto it = counts.find(block);
  if (it == counts.end() || windows == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(windows);
}

BlockFrequencies block_frequency_report(const BitString& bits, unsigned block_size) {
  if (block_size < 1 || block_size > 4) throw Error("block size must be between 1 and 4", true);
  if (bits.size() < block_size) {
    throw Error("prefix of " + std::to_string(bits.size()) + " bits is shorter than block size " +
                std::to_string(block_size));
  }
  BlockFrequencies out;
  out.block_size = block_size;
  out.windows = bits.size() - block_size + 1;
  for (std::size_t i = 0; i < out.windows; ++i) {
    ++out.counts[bits.digits().substr(i, block_size)];
  }
  return out;
}

ProgressReport progress_report(const std::vector<Checkpoint>& checkpoints) {
  ProgressReport report;
  for (const auto& cp : checkpoints) {
    if (cp.machine_version != checkpoints.front().machine_version) {
      throw Error("checkpoints come from different machine versions (" +
                  checkpoints.front().machine_version + " and " + cp.machine_version + ")");
    }
    const MassLedger ledger = cp.store.ledger();
    const OmegaBits bits = certify_bits(ledger);
    ProgressRow row;
    row.budget = cp.store.budget();
    row.certified_count = bits.certified.size();
    row.certified = bits.certified;
    row.lower = bits.lower;
    row.upper = bits.upper;
    row.unknown_mass = ledger.unknown;
    report.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < report.rows.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (report.rows[j].budget.refines(report.rows[i].budget) &&
          report.rows[j].certified_count < report.rows[i].certified_count) {
        report.monotone = false;
      }
    }
  }
  return report;
}

}  // namespace omegaforge
