#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "omegaforge/bitvm.hpp"
#include "omegaforge/ledger.hpp"

namespace omegaforge {

enum class NodeStatus : std::uint8_t {
  Halt,
  DivergeCycle,
  DivergeMono,
  Invalid,
  Unknown,
  Expanded,
};

const char* to_string(NodeStatus status);
std::optional<NodeStatus> parse_node_status(std::string_view text);
bool is_diverge(NodeStatus status) noexcept;
/// Bucket a leaf's mass belongs to.  Expanded nodes carry none of their own.
std::optional<MassKind> mass_kind(NodeStatus status) noexcept;

struct NodeRecord {
  Program program;
  NodeStatus status = NodeStatus::Unknown;
  BitString output;  // Halt only
  std::uint64_t steps = 0;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct ExploreBudget {
  std::size_t max_len = 20;
  std::uint64_t max_steps = 1'000'000;

  /// Throws Error on an unusable budget.
  void validate() const;
  /// True when every coordinate is at least as large as `other`'s.
  bool refines(const ExploreBudget& other) const noexcept {
    return max_len >= other.max_len && max_steps >= other.max_steps;
  }
  friend bool operator==(const ExploreBudget&, const ExploreBudget&) = default;
};

/// Maps a run outcome on `program` to the node status the explorer records.
/// A halt that leaves trailing bits unread is not a self-delimiting program
/// of this length and is recorded INVALID.
NodeRecord classify_outcome(const Program& program, const RunOutcome& outcome,
                            const ExploreBudget& budget);

/// Runs `program` from scratch and classifies it.
NodeRecord classify_node(const Program& program, const ExploreBudget& budget);

/// Records of one exploration, sorted by program bits.  Sorted bit order is
/// the depth-first preorder with 0 before 1, so every subtree is a
/// contiguous range.
class NodeStore {
 public:
  NodeStore() = default;
  /// Sorts `records`; throws Error on duplicate programs.
  NodeStore(ExploreBudget budget, std::vector<NodeRecord> records);

  const ExploreBudget& budget() const noexcept { return budget_; }
  std::span<const NodeRecord> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  const NodeRecord* find(const Program& program) const;
  /// All records whose program starts with `prefix`.
  std::span<const NodeRecord> subtree(const Program& prefix) const;

  /// Folds every leaf into a ledger.
  MassLedger ledger() const;

  /// True when no node is expanded below max_len without both children,
  /// and no leaf is missing its parent.
  bool is_closed() const;

 private:
  ExploreBudget budget_;
  std::vector<NodeRecord> records_;
};

struct ExploreProgress {
  std::size_t jobs_done = 0;
  std::size_t jobs_total = 0;
};

struct ExploreOptions {
  unsigned threads = 1;
  /// A partial exploration with the same budget; its completed subtrees are
  /// reused as-is.
  const NodeStore* resume = nullptr;
  /// Stop (leaving a partial store) after this many subtree jobs finish.
  std::size_t stop_after_jobs = SIZE_MAX;
  /// Polled between jobs; setting it stops the run early.
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const ExploreProgress&)> on_progress;
};

struct ExploreResult {
  NodeStore store;
  MassLedger ledger;
  bool complete = false;
  std::size_t jobs_total = 0;
  std::size_t jobs_done = 0;
};

/// Classifies every program in the prefix tree down to `budget.max_len`.
/// Work is split into disjoint subtrees at a depth fixed by the budget; the
/// sorted merge makes the store independent of thread count and schedule.
ExploreResult explore(const ExploreBudget& budget, const ExploreOptions& options = {});

/// Depth at which explore() splits the tree into jobs.
std::size_t split_depth(const ExploreBudget& budget) noexcept;

}  // namespace omegaforge
