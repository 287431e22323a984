#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "omegaforge/bitvm.hpp"
#include "omegaforge/checkpoint.hpp"
#include "omegaforge/complexity.hpp"
#include "omegaforge/explorer.hpp"
#include "omegaforge/lawful.hpp"
#include "omegaforge/omega.hpp"
#include "omegaforge/theory.hpp"

namespace omegaforge::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kCheckpointEnv = "OMEGAFORGE_CHECKPOINT_DIR";

struct Settings {
  std::size_t max_len = 20;
  std::uint64_t max_steps = 1'000'000;
  fs::path checkpoint_dir = "omegaforge-checkpoints";
  std::string format = "json";
  Ratio threshold{1, 2};
  unsigned precision = 32;
  unsigned threads = 1;

  ExploreBudget budget() const { return {max_len, max_steps}; }
};

struct Flags {
  std::optional<std::string> config;
  std::optional<std::size_t> max_len;
  std::optional<std::uint64_t> max_steps;
  std::optional<std::string> checkpoint_dir;
  std::optional<std::string> format;
  std::optional<std::string> threshold;
  std::optional<unsigned> precision;
  std::optional<unsigned> threads;
};

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    throw Error("invalid " + std::string(what) + ": '" + std::string(text) + "'", true);
  }
  return value;
}

Ratio parse_ratio(std::string_view text) {
  Ratio r;
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    r.num = parse_number<std::uint64_t>(text, "threshold");
    r.den = 1;
  } else {
    r.num = parse_number<std::uint64_t>(text.substr(0, slash), "threshold");
    r.den = parse_number<std::uint64_t>(text.substr(slash + 1), "threshold");
  }
  if (r.den == 0) throw Error("threshold denominator must be positive", true);
  return r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

void apply_setting(Settings& s, std::string_view key, std::string_view value) {
  if (key == "max_len") {
    s.max_len = parse_number<std::size_t>(value, key);
  } else if (key == "max_steps") {
    s.max_steps = parse_number<std::uint64_t>(value, key);
  } else if (key == "checkpoint_dir") {
    s.checkpoint_dir = std::string(value);
  } else if (key == "format") {
    s.format = std::string(value);
  } else if (key == "threshold") {
    s.threshold = parse_ratio(value);
  } else if (key == "precision") {
    s.precision = parse_number<unsigned>(value, key);
  } else if (key == "threads") {
    s.threads = parse_number<unsigned>(value, key);
  } else {
    throw Error("unknown configuration key '" + std::string(key) + "'", true);
  }
}

void apply_config_file(Settings& s, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path.string(), true);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected key=value", true);
    }
    apply_setting(s, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
}

// Flags beat the config file, which beats the environment, which beats
// the built-in defaults.
Settings resolve(const Flags& f) {
  Settings s;
  if (const char* env = std::getenv(kCheckpointEnv); env != nullptr && *env != '\0') {
    s.checkpoint_dir = env;
  }
  if (f.config) apply_config_file(s, *f.config);
  if (f.max_len) s.max_len = *f.max_len;
  if (f.max_steps) s.max_steps = *f.max_steps;
  if (f.checkpoint_dir) s.checkpoint_dir = *f.checkpoint_dir;
  if (f.format) s.format = *f.format;
  if (f.threshold) s.threshold = parse_ratio(*f.threshold);
  if (f.precision) s.precision = *f.precision;
  if (f.threads) s.threads = *f.threads;

  if (s.format != "json" && s.format != "csv") {
    throw Error("format must be json or csv, not '" + s.format + "'", true);
  }
  if (s.precision < 1) throw Error("precision must be at least 1 bit", true);
  if (s.threads < 1) throw Error("threads must be at least 1", true);
  s.budget().validate();
  return s;
}

// Accepts plain bits, "-" for the empty string, or "<bits>^<count>".
BitString parse_subject(std::string_view text) {
  const auto caret = text.find('^');
  const auto base = BitString::try_parse(text.substr(0, caret));
  if (!base) throw Error("not a bit string: '" + std::string(text) + "'", true);
  if (caret == std::string_view::npos) return *base;
  const auto count = parse_number<std::size_t>(text.substr(caret + 1), "repeat count");
  if (count * std::max<std::size_t>(base->size(), 1) > (std::size_t{1} << 24)) {
    throw Error("repeated subject is too long", true);
  }
  BitString out;
  out.reserve(base->size() * count);
  for (std::size_t i = 0; i < count; ++i) out.append(*base);
  return out;
}

std::uint8_t parse_guest(std::string_view text) {
  if (text == "00" || text == "0") return 0;
  if (text == "01" || text == "1") return 1;
  if (text == "10" || text == "2" || text == "11" || text == "3") {
    throw Error("guest " + std::string(text) + " is reserved", true);
  }
  throw Error("guest must be 00 or 01", true);
}

// ---- report output ---------------------------------------------------

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_null()) {
    s = "";
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += v[i].is_string() ? v[i].get<std::string>() : v[i].dump();
    }
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + '"';
  }
  return s;
}

void flatten(const json& obj, const std::string& prefix, std::vector<std::string>& keys,
             std::vector<std::string>& cells) {
  for (const auto& [k, v] : obj.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, keys, cells);
    } else if (v.is_array() && !v.empty() && v[0].is_object()) {
      continue;  // nested tables only appear in JSON
    } else {
      keys.push_back(key);
      cells.push_back(csv_cell(v));
    }
  }
}

void write_csv_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

// Reports with a "rows" table print that table, each row tagged with the
// schema version; other reports print as one flattened row.
void write_csv(std::ostream& out, const json& report) {
  if (report.contains("rows") && report["rows"].is_array() && !report["rows"].empty()) {
    std::vector<std::string> header{"schema_version"};
    std::vector<std::string> cells;
    std::vector<std::string> row_keys;
    flatten(report["rows"][0], "", row_keys, cells);
    header.insert(header.end(), row_keys.begin(), row_keys.end());
    write_csv_line(out, header);
    for (const auto& row : report["rows"]) {
      std::vector<std::string> keys;
      std::vector<std::string> values{std::to_string(kSchemaVersion)};
      flatten(row, "", keys, values);
      write_csv_line(out, values);
    }
    return;
  }
  std::vector<std::string> keys;
  std::vector<std::string> cells;
  flatten(report, "", keys, cells);
  write_csv_line(out, keys);
  write_csv_line(out, cells);
}

json new_report(std::string_view command) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  return r;
}

json budget_json(const ExploreBudget& b) {
  return json{{"max_len", b.max_len}, {"max_steps", b.max_steps}};
}

json ledger_json(const MassLedger& l) {
  json j{{"halt", l.halt.to_string()},
         {"refuted", l.refuted.to_string()},
         {"unknown", l.unknown.to_string()},
         {"total", l.total().to_string()}};
  j["unknown_halt_cap"] = l.unknown_halt_cap ? json(l.unknown_halt_cap->to_string()) : json();
  return j;
}

json bound_json(const ComplexityBound& b) {
  json j{{"subject", b.subject.digits()}, {"kind", to_string(b.kind)}};
  if (b.has_witness()) {
    j["value"] = b.value;
    j["witness_bits"] = b.witness.digits();
  } else {
    j["value"] = nullptr;
    j["witness_bits"] = nullptr;
  }
  j["search_bound"] = b.search_bound;
  return j;
}

// ---- command context -------------------------------------------------

class Context {
 public:
  Context(Settings settings, std::ostream& out, std::ostream& err,
          const std::atomic<bool>* cancel)
      : settings_(std::move(settings)), out_(out), err_(err), cancel_(cancel) {}

  const Settings& settings() const { return settings_; }
  std::ostream& err() { return err_; }
  const std::atomic<bool>* cancel() const { return cancel_; }

  void emit(const json& report) {
    if (settings_.format == "csv") {
      write_csv(out_, report);
    } else {
      out_ << report.dump(2) << '\n';
    }
  }

  /// A closed store for `budget`: read from the checkpoint directory when
  /// present, otherwise explored (resuming a partial checkpoint) and saved.
  const NodeStore& store(const ExploreBudget& budget) {
    if (store_ && store_->budget() == budget) return *store_;
    budget.validate();
    const fs::path path = checkpoint_path(settings_.checkpoint_dir, budget);
    std::optional<NodeStore> prior;
    if (fs::exists(path)) {
      Checkpoint cp = load_checkpoint(path);
      if (cp.complete) {
        store_ = std::move(cp.store);
        return *store_;
      }
      prior = std::move(cp.store);
    }
    ExploreOptions options;
    options.threads = settings_.threads;
    options.resume = prior ? &*prior : nullptr;
    options.cancel = cancel_;
    ExploreResult result = explore(budget, options);
    fs::create_directories(settings_.checkpoint_dir);
    save_checkpoint(path, result.store, result.complete);
    if (!result.complete) {
      throw Error("interrupted; partial checkpoint saved to " + path.string());
    }
    store_ = std::move(result.store);
    return *store_;
  }

  const NodeStore& store() { return store(settings_.budget()); }

  const ComplexityIndex& index() {
    const NodeStore& s = store();
    if (!index_ || index_budget_ != s.budget()) {
      index_.emplace(s);
      index_budget_ = s.budget();
    }
    return *index_;
  }

  OmegaBits certified() { return certify_bits(store().ledger()); }

 private:
  Settings settings_;
  std::ostream& out_;
  std::ostream& err_;
  const std::atomic<bool>* cancel_;
  std::optional<NodeStore> store_;
  std::optional<ComplexityIndex> index_;
  ExploreBudget index_budget_;
};

json block_json(const BitString& bits, std::optional<unsigned> only) {
  json all = json::object();
  const unsigned lo = only ? *only : 1;
  const unsigned hi = only ? *only : static_cast<unsigned>(std::min<std::size_t>(4, bits.size()));
  for (unsigned k = lo; k <= hi; ++k) {
    const BlockFrequencies f = block_frequency_report(bits, k);
    json freq = json::object();
    for (const auto& [block, count] : f.counts) freq[block] = f.frequency(block);
    all[std::to_string(k)] = json{{"windows", f.windows}, {"frequencies", freq}};
  }
  return all;
}

// ---- commands --------------------------------------------------------

int cmd_vm_run(Context& ctx, const std::string& bits_text) {
  const Program program = parse_subject(bits_text);
  const RunOutcome r = run(program, ctx.settings().max_steps);
  json rep = new_report("vm run");
  rep["machine_version"] = machine_version();
  rep["program"] = program.digits();
  rep["kind"] = to_string(r.kind);
  rep["output"] = r.kind == OutcomeKind::Halted ? json(r.output.digits()) : json();
  rep["bits_consumed"] = r.bits_consumed;
  rep["steps"] = r.steps;
  rep["proof"] = r.kind == OutcomeKind::Diverges ? json(to_string(r.proof)) : json();
  rep["detail"] = r.detail.empty() ? json() : json(r.detail);
  ctx.emit(rep);
  return kExitOk;
}

struct ExploreArgs {
  bool resume = false;
  std::optional<std::size_t> stop_after_jobs;
  bool progress = false;
};

int cmd_explore(Context& ctx, const ExploreArgs& args) {
  const ExploreBudget budget = ctx.settings().budget();
  const fs::path path = checkpoint_path(ctx.settings().checkpoint_dir, budget);
  std::optional<NodeStore> prior;
  if (args.resume && fs::exists(path)) prior = load_checkpoint(path).store;

  ExploreOptions options;
  options.threads = ctx.settings().threads;
  options.resume = prior ? &*prior : nullptr;
  options.cancel = ctx.cancel();
  if (args.stop_after_jobs) options.stop_after_jobs = *args.stop_after_jobs;
  if (args.progress) {
    options.on_progress = [&ctx](const ExploreProgress& p) {
      ctx.err() << "explore: " << p.jobs_done << "/" << p.jobs_total << " subtrees\n";
    };
  }
  const ExploreResult result = explore(budget, options);
  fs::create_directories(ctx.settings().checkpoint_dir);
  save_checkpoint(path, result.store, result.complete);

  std::map<std::string, std::size_t> counts;
  for (const auto& rec : result.store.records()) ++counts[to_string(rec.status)];
  json rep = new_report("explore");
  rep["machine_version"] = machine_version();
  rep["budgets"] = budget_json(budget);
  rep["complete"] = result.complete;
  rep["jobs_done"] = result.jobs_done;
  rep["jobs_total"] = result.jobs_total;
  rep["nodes"] = result.store.size();
  rep["status_counts"] = counts;
  rep["ledger"] = ledger_json(result.ledger);
  rep["checkpoint"] = path.string();
  rep["checksum"] = checkpoint_checksum(result.store, result.complete);
  ctx.emit(rep);

  const bool interrupted = !result.complete && ctx.cancel() != nullptr && ctx.cancel()->load();
  if (interrupted) {
    ctx.err() << "interrupted; partial checkpoint saved to " << path.string()
              << " (rerun with --resume)\n";
    return kExitDomain;
  }
  return kExitOk;
}

int cmd_omega_bits(Context& ctx) {
  const MassLedger ledger = ctx.store().ledger();
  const OmegaBits bits = certify_bits(ledger);
  json rep = new_report("omega bits");
  rep["machine_version"] = machine_version();
  rep["budgets"] = budget_json(ctx.settings().budget());
  rep["lower"] = bits.lower.to_string();
  rep["upper"] = bits.upper.to_string();
  rep["certified_bits"] = bits.certified.digits();
  rep["certified_count"] = bits.certified.size();
  rep["omega"] = bits.as_fraction_text();
  rep["halt_mass"] = ledger.halt.to_string();
  rep["refuted_mass"] = ledger.refuted.to_string();
  rep["unknown_mass"] = ledger.unknown.to_string();
  rep["unknown_halt_cap"] =
      ledger.unknown_halt_cap ? json(ledger.unknown_halt_cap->to_string()) : json();
  rep["block_frequencies"] = block_json(bits.certified, std::nullopt);
  ctx.emit(rep);
  return kExitOk;
}

int cmd_omega_oracle(Context& ctx, const std::string& query_text, std::size_t max_stages) {
  const Program query = parse_subject(query_text);
  OracleOptions options;
  options.max_stages = max_stages;
  options.threads = ctx.settings().threads;
  HaltingOracle oracle(ctx.certified(), options);
  const OracleVerdict verdict = oracle.query(query);
  json rep = new_report("omega oracle");
  rep["machine_version"] = machine_version();
  rep["budgets"] = budget_json(ctx.settings().budget());
  rep["query"] = query.digits();
  rep["bits_known"] = oracle.bits_known();
  rep["verdict"] = to_string(verdict);
  rep["stages_run"] = oracle.stages_run();
  const auto settled = oracle.settled_budget();
  rep["settled_budget"] = settled ? budget_json(*settled) : json();
  ctx.emit(rep);
  if (verdict == OracleVerdict::NotConverged) {
    ctx.err() << "oracle did not converge: the supplied bits look inconsistent\n";
    return kExitDomain;
  }
  return kExitOk;
}

std::vector<std::size_t> parse_ladder(const std::string& text) {
  std::vector<std::size_t> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(parse_number<std::size_t>(trim(rest.substr(0, comma)), "ladder entry"));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (out.empty()) throw Error("empty ladder", true);
  return out;
}

int cmd_omega_progress(Context& ctx, const std::vector<std::string>& files,
                       const std::optional<std::string>& ladder) {
  std::vector<Checkpoint> checkpoints;
  if (ladder) {
    if (!files.empty()) throw Error("give either checkpoint files or --ladder, not both", true);
    for (std::size_t len : parse_ladder(*ladder)) {
      const ExploreBudget b{len, ctx.settings().max_steps};
      Checkpoint cp;
      cp.machine_version = machine_version();
      cp.store = ctx.store(b);
      checkpoints.push_back(std::move(cp));
    }
  } else if (!files.empty()) {
    for (const auto& f : files) checkpoints.push_back(load_checkpoint(f));
  } else {
    const fs::path dir = ctx.settings().checkpoint_dir;
    if (fs::is_directory(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".ckpt") checkpoints.push_back(load_checkpoint(entry.path()));
      }
    }
    std::erase_if(checkpoints, [](const Checkpoint& c) { return !c.complete; });
    std::sort(checkpoints.begin(), checkpoints.end(), [](const auto& a, const auto& b) {
      const auto& x = a.store.budget();
      const auto& y = b.store.budget();
      return std::pair(x.max_len, x.max_steps) < std::pair(y.max_len, y.max_steps);
    });
  }
  if (checkpoints.empty()) throw Error("no checkpoints to report on");

  const ProgressReport report = progress_report(checkpoints);
  json rep = new_report("omega progress");
  rep["machine_version"] = machine_version();
  rep["monotone"] = report.monotone;
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back(json{{"max_len", row.budget.max_len},
                        {"max_steps", row.budget.max_steps},
                        {"certified_count", row.certified_count},
                        {"certified_bits", row.certified.digits()},
                        {"lower", row.lower.to_string()},
                        {"upper", row.upper.to_string()},
                        {"unknown_mass", row.unknown_mass.to_string()}});
  }
  rep["rows"] = rows;
  ctx.emit(rep);
  return kExitOk;
}

int cmd_omega_blocks(Context& ctx, const std::optional<std::string>& bits_text,
                     std::optional<unsigned> block_size) {
  const BitString bits = bits_text ? parse_subject(*bits_text) : ctx.certified().certified;
  if (bits.empty()) throw Error("no bits to analyse (nothing certified at this budget)");
  json rep = new_report("omega blocks");
  rep["bits"] = bits.digits();
  rep["source"] = bits_text ? "argument" : "certified";
  rep["block_frequencies"] = block_json(bits, block_size);
  rep["note"] = "report only; finite prefixes say nothing about normality";
  ctx.emit(rep);
  return kExitOk;
}

int cmd_complexity_of(Context& ctx, const std::string& subject_text) {
  const BitString subject = parse_subject(subject_text);
  json rep = new_report("complexity of");
  rep.update(bound_json(complexity_upper(subject, &ctx.index())));
  ctx.emit(rep);
  return kExitOk;
}

int cmd_complexity_exact(Context& ctx, const std::string& subject_text,
                         std::optional<std::size_t> bound) {
  const BitString subject = parse_subject(subject_text);
  const std::size_t l = bound.value_or(ctx.settings().max_len);
  if (l > ctx.settings().max_len) {
    throw Error("bound " + std::to_string(l) + " exceeds max_len " +
                    std::to_string(ctx.settings().max_len),
                true);
  }
  const ComplexityIndex& index = ctx.index();
  json rep = new_report("complexity exact");
  rep.update(bound_json(complexity_exact(subject, index, l)));
  const auto pending = index.shortest_pending();
  rep["shortest_unresolved"] = pending ? json(*pending) : json();
  ctx.emit(rep);
  return kExitOk;
}

int cmd_complexity_probe(Context& ctx) {
  const OmegaBits bits = ctx.certified();
  const ProbeReport report = irreducibility_probe(bits.certified, ctx.index());
  json rep = new_report("complexity probe");
  rep["machine_version"] = machine_version();
  rep["budgets"] = budget_json(ctx.settings().budget());
  rep["certified_bits"] = bits.certified.digits();
  rep["non_decreasing"] = report.non_decreasing;
  json rows = json::array();
  for (const auto& row : report.rows) {
    const auto& b = row.bound;
    rows.push_back(json{{"m", row.m},
                        {"prefix", row.prefix.digits()},
                        {"kind", to_string(b.kind)},
                        {"H", b.has_witness() ? json(b.value) : json()},
                        {"witness_bits", b.has_witness() ? json(b.witness.digits()) : json()}});
  }
  rep["rows"] = rows;
  ctx.emit(rep);
  return kExitOk;
}

int cmd_invariance(Context& ctx, const std::string& guest_text, std::size_t bound) {
  const std::uint8_t guest = parse_guest(guest_text);
  const InvarianceReport report = invariance_audit(guest, bound, ctx.index());
  json rep = new_report("invariance");
  rep["guest"] = guest == 0 ? "00" : "01";
  rep["bound"] = bound;
  rep["prefix_bits"] = kSimPrefixBits;
  rep["holds"] = report.holds;
  rep["max_gap"] = report.max_gap;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r{{"subject", row.subject.digits()},
           {"guest_complexity", row.guest_complexity},
           {"guest_witness", row.guest_witness.digits()}};
    r["machine_complexity"] = row.machine_complexity ? json(*row.machine_complexity) : json();
    r["machine_witness"] = row.machine_complexity ? json(row.machine_witness.digits()) : json();
    r["gap"] = row.machine_complexity
                   ? json(static_cast<long>(*row.machine_complexity) -
                          static_cast<long>(row.guest_complexity))
                   : json();
    rows.push_back(std::move(r));
  }
  rep["rows"] = rows;
  ctx.emit(rep);
  return report.holds ? kExitOk : kExitDomain;
}

int cmd_counting(Context& ctx, std::size_t n, std::size_t m) {
  const CountingReport report = counting_check(n, m, ctx.index());
  json rep = new_report("counting");
  rep["n"] = report.n;
  rep["m"] = report.m;
  rep["count"] = report.count;
  rep["bound"] = report.bound;
  rep["pass"] = report.pass;
  ctx.emit(rep);
  return report.pass ? kExitOk : kExitDomain;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json theory_json(const TheoryArtifact& t) {
  json list = json::array();
  for (const auto& a : t.assertions) list.push_back(json{{"index", a.index}, {"value", a.value}});
  return json{{"assertions", list},
              {"carrier_bits", t.carrier.digits()},
              {"carrier_size", t.carrier.size()}};
}

int cmd_theory_audit(Context& ctx, const std::string& file) {
  const TheoryArtifact theory =
      parse_theory_file(read_text_file(file), witness_step_budget(BitString{}));
  const OmegaBits bits = ctx.certified();
  const TheoryAudit audit = theory_audit(theory, bits, &ctx.index());
  json rep = new_report("theory audit");
  rep["machine_version"] = machine_version();
  rep["budgets"] = budget_json(ctx.settings().budget());
  rep["theory"] = file;
  rep["certified_bits"] = bits.certified.digits();
  rep["assertion_count"] = audit.assertion_count;
  rep["confirmed"] = audit.confirmed;
  rep["unsound"] = audit.contradicted;
  rep["unverifiable"] = audit.unverifiable;
  rep["sound"] = audit.sound;
  json checks = json::array();
  for (const auto& c : audit.checks) {
    checks.push_back(json{{"index", c.assertion.index},
                          {"value", c.assertion.value},
                          {"status", to_string(c.status)}});
  }
  rep["checks"] = checks;
  rep["carrier_size"] = audit.carrier_size;
  rep["kind"] = to_string(audit.theory_complexity.kind);
  rep["value"] = audit.theory_complexity.value;
  rep["witness_bits"] = audit.theory_complexity.witness.digits();
  rep["c_prime_observed"] = audit.c_prime_observed;
  json converse = theory_json(audit.converse);
  converse["size_limit"] = audit.converse_limit;
  converse["within_limit"] = audit.converse_within_limit;
  rep["converse"] = converse;
  ctx.emit(rep);
  return kExitOk;
}

int cmd_law_interpolate(Context& ctx, const std::string& file, std::size_t samples,
                        const std::optional<std::string>& gnuplot) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read " + file);
  const std::vector<Point> points = read_points_csv(in);
  const CurveDescription curve = interpolate(points);
  double max_residual = 0.0;
  bool increasing = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point p = curve.evaluate(curve.knots[i]);
    max_residual = std::max({max_residual, std::abs(p.x - points[i].x), std::abs(p.y - points[i].y)});
    if (i > 0 && !(curve.knots[i] > curve.knots[i - 1])) increasing = false;
  }
  if (gnuplot) {
    std::ofstream g(*gnuplot);
    if (!g) throw Error("cannot write " + *gnuplot);
    g << curve_samples(curve, samples);
  }
  json rep = new_report("law interpolate");
  rep["points"] = points.size();
  rep["precision_bits"] = ctx.settings().precision;
  rep["coefficients"] = curve.x_coeffs.size() + curve.y_coeffs.size();
  rep["description_size"] = describe_size(curve, ctx.settings().precision);
  rep["raw_size"] = 2 * points.size() * ctx.settings().precision;
  rep["max_knot_residual"] = max_residual;
  rep["knots_increasing"] = increasing;
  rep["knots"] = curve.knots;
  rep["newton_centers"] = curve.centers;
  rep["x_coefficients"] = std::vector<double>(curve.x_coeffs.begin(), curve.x_coeffs.end());
  rep["y_coefficients"] = std::vector<double>(curve.y_coeffs.begin(), curve.y_coeffs.end());
  rep["gnuplot_file"] = gnuplot ? json(*gnuplot) : json();
  ctx.emit(rep);
  return kExitOk;
}

int cmd_law_classify(Context& ctx, const std::string& subject_text) {
  const BitString data = parse_subject(subject_text);
  const Ratio t = ctx.settings().threshold;
  const LawVerdict v = classify(data, &ctx.index(), t);
  json rep = new_report("law classify");
  rep["raw_size"] = v.raw_size;
  rep["rule_size_upper"] = v.rule_size_upper;
  rep["ratio"] = v.ratio;
  rep["threshold"] = std::to_string(t.num) + "/" + std::to_string(t.den);
  rep["verdict"] = to_string(v.verdict);
  rep["witness_bits"] = v.rule.witness.digits();
  rep["search_bound"] = v.rule.search_bound;
  ctx.emit(rep);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel) {
  CLI::App app{"Workbench for the halting probability and program-size complexity of a "
               "self-delimiting binary machine",
               "omegaforge"};
  app.fallthrough();
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--config", flags.config, "key=value configuration file");
  app.add_option("--max-len", flags.max_len, "Longest program explored (default 20)");
  app.add_option("--max-steps", flags.max_steps, "Step budget per program (default 1000000)");
  app.add_option("--checkpoint-dir", flags.checkpoint_dir,
                 std::string("Checkpoint directory (env ") + kCheckpointEnv + ")");
  app.add_option("--format", flags.format, "Report format: json or csv");
  app.add_option("--threshold", flags.threshold, "Lawful ratio threshold, as a/b (default 1/2)");
  app.add_option("--precision", flags.precision, "Bits per curve coefficient (default 32)");
  app.add_option("--threads", flags.threads, "Worker threads; never changes results");

  std::function<int(Context&)> action;

  auto* vm = app.add_subcommand("vm", "Run the machine");
  vm->require_subcommand(1);
  std::string vm_bits;
  auto* vm_run = vm->add_subcommand("run", "Run one program");
  vm_run->add_option("bits", vm_bits, "Program bits")->required();
  vm_run->callback([&] { action = [&](Context& c) { return cmd_vm_run(c, vm_bits); }; });

  ExploreArgs explore_args;
  auto* ex = app.add_subcommand("explore", "Classify every program up to max_len");
  ex->add_flag("--resume", explore_args.resume, "Continue from a partial checkpoint");
  ex->add_option("--stop-after-jobs", explore_args.stop_after_jobs,
                 "Stop after this many subtrees, leaving a partial checkpoint");
  ex->add_flag("--progress", explore_args.progress, "Report progress on stderr");
  ex->callback([&] { action = [&](Context& c) { return cmd_explore(c, explore_args); }; });

  auto* omega = app.add_subcommand("omega", "Halting-probability reports");
  omega->require_subcommand(1);
  omega->add_subcommand("bits", "Certified leading bits")->callback([&] {
    action = [](Context& c) { return cmd_omega_bits(c); };
  });
  std::string oracle_query;
  std::size_t oracle_stages = 8;
  auto* oracle = omega->add_subcommand("oracle", "Decide halting from certified bits");
  oracle->add_option("bits", oracle_query, "Query program")->required();
  oracle->add_option("--max-stages", oracle_stages, "Dovetailing stages before giving up");
  oracle->callback([&] {
    action = [&](Context& c) { return cmd_omega_oracle(c, oracle_query, oracle_stages); };
  });
  std::vector<std::string> progress_files;
  std::optional<std::string> progress_ladder;
  auto* progress = omega->add_subcommand("progress", "Certified bits across budgets");
  progress->add_option("checkpoints", progress_files, "Checkpoint files (default: directory)");
  progress->add_option("--ladder", progress_ladder, "Comma-separated max_len values to run");
  progress->callback([&] {
    action = [&](Context& c) { return cmd_omega_progress(c, progress_files, progress_ladder); };
  });
  std::optional<std::string> block_bits;
  std::optional<unsigned> block_size;
  auto* blocks = omega->add_subcommand("blocks", "Block frequencies of certified bits");
  blocks->add_option("bits", block_bits, "Bits to analyse instead of the certified prefix");
  blocks->add_option("--block-size", block_size, "Single block size (1-4)");
  blocks->callback([&] {
    action = [&](Context& c) { return cmd_omega_blocks(c, block_bits, block_size); };
  });

  auto* cx = app.add_subcommand("complexity", "Program-size complexity");
  cx->require_subcommand(1);
  std::string cx_subject;
  auto* cx_of = cx->add_subcommand("of", "Best known upper bound");
  cx_of->add_option("bits", cx_subject, "Subject bits (b^n repeats)")->required();
  cx_of->callback([&] { action = [&](Context& c) { return cmd_complexity_of(c, cx_subject); }; });
  std::optional<std::size_t> cx_bound;
  auto* cx_exact = cx->add_subcommand("exact", "Exact value within a length bound");
  cx_exact->add_option("bits", cx_subject, "Subject bits (b^n repeats)")->required();
  cx_exact->add_option("--bound", cx_bound, "Length bound (default max_len)");
  cx_exact->callback([&] {
    action = [&](Context& c) { return cmd_complexity_exact(c, cx_subject, cx_bound); };
  });
  cx->add_subcommand("probe", "Complexity of each certified prefix")->callback([&] {
    action = [](Context& c) { return cmd_complexity_probe(c); };
  });

  std::string inv_guest;
  std::size_t inv_bound = 0;
  auto* inv = app.add_subcommand("invariance", "Compare guest and machine complexity");
  inv->add_option("--guest", inv_guest, "Guest code: 00 (literal) or 01 (unary)")->required();
  inv->add_option("--bound", inv_bound, "Longest guest program")->required();
  inv->callback([&] {
    action = [&](Context& c) { return cmd_invariance(c, inv_guest, inv_bound); };
  });

  std::size_t count_n = 0;
  std::size_t count_m = 0;
  auto* counting = app.add_subcommand("counting", "Check the program-counting bound");
  counting->add_option("--n", count_n, "Output length")->required();
  counting->add_option("--m", count_m, "Complexity cap")->required();
  counting->callback([&] {
    action = [&](Context& c) { return cmd_counting(c, count_n, count_m); };
  });

  auto* theory = app.add_subcommand("theory", "Theory artifacts");
  theory->require_subcommand(1);
  std::string theory_file;
  auto* audit = theory->add_subcommand("audit", "Audit a theory against certified bits");
  audit->add_option("file", theory_file, "Theory file")->required();
  audit->callback([&] { action = [&](Context& c) { return cmd_theory_audit(c, theory_file); }; });

  auto* law = app.add_subcommand("law", "Interpolation and lawfulness");
  law->require_subcommand(1);
  std::string law_file;
  std::size_t law_samples = 200;
  std::optional<std::string> law_gnuplot;
  auto* interp = law->add_subcommand("interpolate", "Curve through points in file order");
  interp->add_option("csv", law_file, "x,y point file")->required();
  interp->add_option("--samples", law_samples, "Curve samples for --gnuplot");
  interp->add_option("--gnuplot", law_gnuplot, "Write t x y samples to this file");
  interp->callback([&] {
    action = [&](Context& c) { return cmd_law_interpolate(c, law_file, law_samples, law_gnuplot); };
  });
  std::string law_bits;
  auto* lclassify = law->add_subcommand("classify", "Lawful or lawless by compression");
  lclassify->add_option("bits", law_bits, "Data bits (b^n repeats)")->required();
  lclassify->callback([&] { action = [&](Context& c) { return cmd_law_classify(c, law_bits); }; });

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
    for (auto* leaf : sub->get_subcommands([](const CLI::App*) { return true; })) {
      leaf->fallthrough();
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << '\n' << app.help();
    return kExitUsage;
  }

  try {
    Context ctx(resolve(flags), out, err, cancel);
    return action(ctx);
  } catch (const CheckpointError& e) {
    err << "omegaforge: checkpoint error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    err << "omegaforge: " << e.what() << '\n';
    if (e.is_usage()) {
      err << "run 'omegaforge --help' for usage\n";
      return kExitUsage;
    }
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "omegaforge: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace omegaforge::cli
