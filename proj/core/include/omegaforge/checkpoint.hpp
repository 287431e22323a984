#pragma once

// Checkpoint text format:
//
//   OMEGAFORGE/1
//   machine <8 hex digits>
//   budget max_len=<n> max_steps=<n>
//   [partial]
//   <bits> <STATUS> <output-bits|-> <steps>      one per node, sorted by bits
//   ...
//   checksum <8 hex digits>                       crc32 of lines 2 .. n-1
//
// The empty program is written "-".  A "partial" line marks an interrupted
// exploration holding only completed subtrees.

#include <filesystem>
#include <string>
#include <string_view>

#include "omegaforge/explorer.hpp"

namespace omegaforge {

class CheckpointError : public Error {
 public:
  using Error::Error;
};

struct Checkpoint {
  std::string machine_version;
  NodeStore store;
  bool complete = true;
  std::string checksum;
};

std::string serialize_checkpoint(const NodeStore& store, bool complete);

/// Parses and validates a checkpoint: magic, checksum, record syntax and
/// ordering.  Does not check the machine version; see load_checkpoint.
Checkpoint parse_checkpoint(std::string_view text);

/// Reads `path` and additionally rejects checkpoints written by a different
/// machine version.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Writes to a temporary sibling then renames over `path`.
void save_checkpoint(const std::filesystem::path& path, const NodeStore& store, bool complete);

/// Conventional file name for a budget inside a checkpoint directory.
std::filesystem::path checkpoint_path(const std::filesystem::path& dir,
                                      const ExploreBudget& budget);

/// The checksum line's value: crc32 of the machine, budget and partial
/// lines plus the records, as 8 lowercase hex digits.
std::string checkpoint_checksum(const NodeStore& store, bool complete);

}  // namespace omegaforge
