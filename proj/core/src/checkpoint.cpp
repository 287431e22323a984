#include "omegaforge/checkpoint.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace omegaforge {

namespace {

constexpr std::string_view kMagic = "OMEGAFORGE/1";

std::string hex32(unsigned long v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", v & 0xffffffffUL);
  return buf;
}

unsigned long crc_of(std::string_view text) {
  return crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(text.data()),
               static_cast<uInt>(text.size()));
}

std::string serialize_records(const NodeStore& store) {
  std::string out;
  out.reserve(store.size() * 32);
  for (const auto& r : store.records()) {
    out += r.program.display();
    out += ' ';
    out += to_string(r.status);
    out += ' ';
    out += r.status == NodeStatus::Halt ? r.output.display() : std::string("-");
    out += ' ';
    out += std::to_string(r.steps);
    out += '\n';
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(sep, start);
    if (end == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

[[noreturn]] void fail(const std::string& what) { throw CheckpointError("checkpoint: " + what); }

// Everything the checksum covers: the machine, budget and partial lines
// followed by the records.
std::string checksummed_body(const NodeStore& store, bool complete) {
  std::string out = "machine " + machine_version() + '\n';
  out += "budget max_len=" + std::to_string(store.budget().max_len) +
         " max_steps=" + std::to_string(store.budget().max_steps) + '\n';
  if (!complete) out += "partial\n";
  out += serialize_records(store);
  return out;
}

}  // namespace

std::string checkpoint_checksum(const NodeStore& store, bool complete) {
  return hex32(crc_of(checksummed_body(store, complete)));
}

std::string serialize_checkpoint(const NodeStore& store, bool complete) {
  const std::string body = checksummed_body(store, complete);
  std::string out;
  out.reserve(body.size() + 32);
  out += kMagic;
  out += '\n';
  out += body;
  out += "checksum " + hex32(crc_of(body)) + '\n';
  return out;
}

Checkpoint parse_checkpoint(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 4) fail("truncated file");
  if (lines[0] != kMagic) fail("bad magic '" + std::string(lines[0]) + "'");

  Checkpoint cp;
  if (!lines[1].starts_with("machine ")) fail("missing machine line");
  cp.machine_version = std::string(lines[1].substr(8));

  ExploreBudget budget;
  {
    const auto fields = split(lines[2], ' ');
    if (fields.size() != 3 || fields[0] != "budget" || !fields[1].starts_with("max_len=") ||
        !fields[2].starts_with("max_steps=") ||
        !parse_number(fields[1].substr(8), budget.max_len) ||
        !parse_number(fields[2].substr(10), budget.max_steps)) {
      fail("bad budget line");
    }
  }

  std::size_t first = 3;
  cp.complete = true;
  if (lines[3] == "partial") {
    cp.complete = false;
    ++first;
  }
  const std::string_view trailer = lines.back();
  if (!trailer.starts_with("checksum ")) fail("missing checksum line");
  cp.checksum = std::string(trailer.substr(9));

  // The checksum covers every line between the magic and the trailer,
  // exactly as written.
  const char* body_begin = lines[1].data();
  const std::string_view body(body_begin, static_cast<std::size_t>(trailer.data() - body_begin));
  const std::string actual = hex32(crc_of(body));
  if (actual != cp.checksum) {
    fail("checksum mismatch (file says " + cp.checksum + ", records hash to " + actual + ")");
  }

  std::vector<NodeRecord> records;
  records.reserve(lines.size() - first - 1);
  for (std::size_t i = first; i + 1 < lines.size(); ++i) {
    const auto fields = split(lines[i], ' ');
    if (fields.size() != 4) fail("bad record on line " + std::to_string(i + 1));
    NodeRecord r;
    auto program = BitString::try_parse(fields[0]);
    auto status = parse_node_status(fields[1]);
    auto output = BitString::try_parse(fields[2]);
    if (!program || !status || !output || !parse_number(fields[3], r.steps)) {
      fail("bad record on line " + std::to_string(i + 1));
    }
    r.program = std::move(*program);
    r.status = *status;
    r.output = std::move(*output);
    if (!records.empty() && !(records.back().program < r.program)) {
      fail("records out of order on line " + std::to_string(i + 1));
    }
    if (r.program.size() > budget.max_len) {
      fail("record on line " + std::to_string(i + 1) + " is longer than max_len");
    }
    if (r.status != NodeStatus::Halt && !r.output.empty()) {
      fail("output on a non-halting record on line " + std::to_string(i + 1));
    }
    records.push_back(std::move(r));
  }
  cp.store = NodeStore(budget, std::move(records));
  if (cp.complete && !cp.store.is_closed()) fail("complete checkpoint is not a closed tree");
  return cp;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Checkpoint cp = parse_checkpoint(buf.str());
  if (cp.machine_version != machine_version()) {
    throw CheckpointError("checkpoint " + path.string() + " was written by machine version " +
                          cp.machine_version + ", this build is " + machine_version());
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const NodeStore& store, bool complete) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << serialize_checkpoint(store, complete);
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir,
                                      const ExploreBudget& budget) {
  return dir / ("explore-L" + std::to_string(budget.max_len) + "-S" +
                std::to_string(budget.max_steps) + ".ckpt");
}

}  // namespace omegaforge
