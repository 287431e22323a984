#include "omegaforge/explorer.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <thread>

namespace omegaforge {

const char* to_string(NodeStatus status) {
  switch (status) {
    case NodeStatus::Halt: return "HALT";
    case NodeStatus::DivergeCycle: return "DIVERGE_CYCLE";
    case NodeStatus::DivergeMono: return "DIVERGE_MONO";
    case NodeStatus::Invalid: return "INVALID";
    case NodeStatus::Unknown: return "UNKNOWN";
    case NodeStatus::Expanded: return "EXPANDED";
  }
  return "?";
}

std::optional<NodeStatus> parse_node_status(std::string_view text) {
  for (auto s : {NodeStatus::Halt, NodeStatus::DivergeCycle, NodeStatus::DivergeMono,
                 NodeStatus::Invalid, NodeStatus::Unknown, NodeStatus::Expanded}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

bool is_diverge(NodeStatus status) noexcept {
  return status == NodeStatus::DivergeCycle || status == NodeStatus::DivergeMono;
}

std::optional<MassKind> mass_kind(NodeStatus status) noexcept {
  switch (status) {
    case NodeStatus::Halt: return MassKind::Halt;
    case NodeStatus::DivergeCycle:
    case NodeStatus::DivergeMono:
    case NodeStatus::Invalid: return MassKind::Refuted;
    case NodeStatus::Unknown: return MassKind::Unknown;
    case NodeStatus::Expanded: return std::nullopt;
  }
  return std::nullopt;
}

void ExploreBudget::validate() const {
  if (max_steps < 1) throw Error("max_steps must be at least 1", true);
  if (max_len > 62) throw Error("max_len above 62 is not supported", true);
}

NodeRecord classify_outcome(const Program& program, const RunOutcome& outcome,
                            const ExploreBudget& budget) {
  NodeRecord rec;
  rec.program = program;
  rec.steps = outcome.steps;
  switch (outcome.kind) {
    case OutcomeKind::Halted:
      if (outcome.bits_consumed == program.size()) {
        rec.status = NodeStatus::Halt;
        rec.output = outcome.output;
      } else {
        rec.status = NodeStatus::Invalid;
      }
      break;
    case OutcomeKind::NeedsBit:
      rec.status = program.size() < budget.max_len ? NodeStatus::Expanded : NodeStatus::Unknown;
      break;
    case OutcomeKind::Invalid: rec.status = NodeStatus::Invalid; break;
    case OutcomeKind::Diverges:
      rec.status = outcome.proof == DivergenceProof::Cycle ? NodeStatus::DivergeCycle
                                                           : NodeStatus::DivergeMono;
      break;
    case OutcomeKind::Unknown: rec.status = NodeStatus::Unknown; break;
  }
  return rec;
}

NodeRecord classify_node(const Program& program, const ExploreBudget& budget) {
  return classify_outcome(program, run(program, budget.max_steps), budget);
}

// ---------------------------------------------------------------------------

NodeStore::NodeStore(ExploreBudget budget, std::vector<NodeRecord> records)
    : budget_(budget), records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.program < b.program; });
  const auto dup = std::adjacent_find(
      records_.begin(), records_.end(),
      [](const NodeRecord& a, const NodeRecord& b) { return a.program == b.program; });
  if (dup != records_.end()) throw Error("duplicate node " + dup->program.display());
}

const NodeRecord* NodeStore::find(const Program& program) const {
  auto it = std::lower_bound(
      records_.begin(), records_.end(), program,
      [](const NodeRecord& r, const Program& p) { return r.program < p; });
  if (it == records_.end() || it->program != program) return nullptr;
  return &*it;
}

std::span<const NodeRecord> NodeStore::subtree(const Program& prefix) const {
  auto first = std::lower_bound(
      records_.begin(), records_.end(), prefix,
      [](const NodeRecord& r, const Program& p) { return r.program < p; });
  auto last = first;
  while (last != records_.end() && last->program.starts_with(prefix)) ++last;
  return {first, last};
}

MassLedger NodeStore::ledger() const {
  constexpr std::size_t kMaxDepth = 64;
  std::array<std::array<std::uint64_t, kMaxDepth>, 3> counts{};
  for (const auto& r : records_) {
    if (auto kind = mass_kind(r.status)) ++counts[static_cast<int>(*kind)][r.program.size()];
  }
  // Sum count * 2^-len per bucket with a common denominator.
  auto fold = [&](const std::array<std::uint64_t, kMaxDepth>& c) {
    mpz_class num(0);
    for (std::size_t len = 0; len < kMaxDepth; ++len) {
      if (c[len] == 0) continue;
      mpz_class term(static_cast<unsigned long>(c[len]));
      mpz_mul_2exp(term.get_mpz_t(), term.get_mpz_t(), kMaxDepth - 1 - len);
      num += term;
    }
    return Dyadic(num, kMaxDepth - 1);
  };
  MassLedger ledger;
  Dyadic cap;
  for (const auto& r : records_) {
    if (r.status != NodeStatus::Unknown) continue;
    const Dyadic c = subtree_halting_cap(r.program);
    cap += Dyadic(c.numerator(), c.exponent() + static_cast<unsigned>(r.program.size()));
  }
  ledger.unknown_halt_cap = cap;
  ledger.halt = fold(counts[static_cast<int>(MassKind::Halt)]);
  ledger.refuted = fold(counts[static_cast<int>(MassKind::Refuted)]);
  ledger.unknown = fold(counts[static_cast<int>(MassKind::Unknown)]);
  return ledger;
}

bool NodeStore::is_closed() const {
  if (records_.empty() || !records_.front().program.empty()) return false;
  for (const auto& r : records_) {
    if (!r.program.empty()) {
      const auto* parent = find(r.program.prefix(r.program.size() - 1));
      if (parent == nullptr || parent->status != NodeStatus::Expanded) return false;
    }
    if (r.status == NodeStatus::Expanded) {
      if (r.program.size() >= budget_.max_len) return false;
      Program child = r.program;
      child.push_back(false);
      if (find(child) == nullptr) return false;
      child.pop_back();
      child.push_back(true);
      if (find(child) == nullptr) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::size_t split_depth(const ExploreBudget& budget) noexcept {
  return std::min<std::size_t>(budget.max_len, 10);
}

namespace {

struct Job {
  Program program;
  Machine machine;
};

// Depth-first from `program`, with `machine` suspended at the parent's bit
// request (or fresh, at the root).
void explore_from(Program& program, Machine machine, const ExploreBudget& budget,
                  std::size_t stop_depth, std::vector<NodeRecord>& out,
                  std::vector<Job>* jobs) {
  const RunOutcome outcome = machine.advance(program);
  out.push_back(classify_outcome(program, outcome, budget));
  if (out.back().status != NodeStatus::Expanded) return;

  for (bool bit : {false, true}) {
    program.push_back(bit);
    if (jobs != nullptr && program.size() == stop_depth) {
      jobs->push_back(Job{program, machine});
    } else {
      explore_from(program, machine, budget, stop_depth, out, jobs);
    }
    program.pop_back();
  }
}

}  // namespace

ExploreResult explore(const ExploreBudget& budget, const ExploreOptions& options) {
  budget.validate();
  if (options.resume != nullptr && !(options.resume->budget() == budget)) {
    throw Error("resume checkpoint was written for a different budget", true);
  }
  const MachineLimits limits{budget.max_steps};
  const std::size_t depth = split_depth(budget);

  std::vector<NodeRecord> top;
  std::vector<Job> jobs;
  if (depth == 0) {
    jobs.push_back(Job{Program{}, Machine(limits)});
  } else {
    Program root;
    explore_from(root, Machine(limits), budget, depth, top, &jobs);
  }

  std::vector<std::vector<NodeRecord>> results(jobs.size());
  std::vector<char> done(jobs.size(), 0);
  std::size_t reused = 0;
  if (options.resume != nullptr) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (options.resume->find(jobs[i].program) == nullptr) continue;
      const auto sub = options.resume->subtree(jobs[i].program);
      results[i].assign(sub.begin(), sub.end());
      done[i] = 1;
      ++reused;
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> finished{reused};
  std::atomic<std::size_t> newly_finished{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      if (options.cancel != nullptr && options.cancel->load()) return;
      if (newly_finished.load() >= options.stop_after_jobs) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      if (done[i]) continue;
      std::vector<NodeRecord> local;
      Program program = jobs[i].program;
      explore_from(program, std::move(jobs[i].machine), budget, 0, local, nullptr);
      results[i] = std::move(local);
      done[i] = 1;
      newly_finished.fetch_add(1);
      const std::size_t n = finished.fetch_add(1) + 1;
      if (options.on_progress) {
        std::lock_guard lock(progress_mutex);
        options.on_progress(ExploreProgress{n, jobs.size()});
      }
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExploreResult result;
  result.jobs_total = jobs.size();
  std::vector<NodeRecord> all = std::move(top);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!done[i]) continue;
    ++result.jobs_done;
    std::move(results[i].begin(), results[i].end(), std::back_inserter(all));
  }
  result.complete = result.jobs_done == result.jobs_total;
  result.store = NodeStore(budget, std::move(all));
  result.ledger = result.store.ledger();
  return result;
}

}  // namespace omegaforge
