#include "omegaforge/complexity.hpp"

#include <algorithm>
#include <map>

namespace omegaforge {

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::ExactWithin: return "EXACT_WITHIN";
    case BoundKind::Upper: return "UPPER";
    case BoundKind::AboveBound: return "ABOVE_BOUND";
    case BoundKind::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

namespace {

bool shorter_then_smaller(const Program& a, const Program& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// z[i] = length of the longest common prefix of s and s[i..].
std::vector<std::size_t> z_function(const std::string& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> z(n, 0);
  if (n > 0) z[0] = n;
  for (std::size_t i = 1, l = 0, r = 0; i < n; ++i) {
    if (i < r) z[i] = std::min(r - i, z[i - l]);
    while (i + z[i] < n && s[z[i]] == s[i + z[i]]) ++z[i];
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
  }
  return z;
}

}  // namespace

ComplexityIndex::ComplexityIndex(const NodeStore& store) : bound_(store.budget().max_len) {
  const auto& budget = store.budget();
  for (const auto& r : store.records()) {
    if (r.status == NodeStatus::Unknown) {
      // A bit request at max_len is a truncation, not an open run.
      const bool truncated = r.program.size() == budget.max_len && r.steps < budget.max_steps;
      if (!truncated && (!pending_ || r.program.size() < *pending_)) pending_ = r.program.size();
      continue;
    }
    if (r.status != NodeStatus::Halt) continue;
    auto [it, inserted] = best_.try_emplace(r.output.digits(), r.program);
    if (!inserted && shorter_then_smaller(r.program, it->second)) it->second = r.program;
  }
}

const Program* ComplexityIndex::shortest(const BitString& output) const {
  const auto it = best_.find(output.digits());
  return it == best_.end() ? nullptr : &it->second;
}

std::uint64_t witness_step_budget(const BitString& subject) {
  return std::max<std::uint64_t>(1'000'000, 8 * subject.size() + 64);
}

Program literal_program(const BitString& payload) {
  Program p = simulation_prefix(static_cast<std::uint8_t>(Guest::Literal));
  p.append(gamma_encode(payload.size() + 1));
  p.append(payload);
  return p;
}

Program straight_line_program(const BitString& subject) {
  const std::size_t n = subject.size();
  const auto z = z_function(subject.digits());
  // remaining[i]: fewest OUT/DBL instructions taking the prefix of length i
  // to the whole subject.
  std::vector<std::size_t> remaining(n + 1, 0);
  auto can_double = [&](std::size_t i) { return i >= 1 && 2 * i <= n && z[i] >= i; };
  for (std::size_t i = n; i-- > 0;) {
    remaining[i] = remaining[i + 1] + 1;
    if (can_double(i)) remaining[i] = std::min(remaining[i], remaining[2 * i] + 1);
  }
  // OUT0/OUT1 encode below DBL, so taking an OUT whenever it is optimal
  // yields the lexicographically smallest minimal program.
  Program p;
  std::size_t i = 0;
  while (i < n) {
    if (remaining[i + 1] + 1 == remaining[i]) {
      encode_instruction(p, asm_::out(subject[i]));
      ++i;
    } else {
      encode_instruction(p, asm_::dbl());
      i *= 2;
    }
  }
  encode_instruction(p, asm_::halt());
  return p;
}

ComplexityBound complexity_upper(const BitString& subject, const ComplexityIndex* index) {
  std::vector<Program> candidates;
  candidates.push_back(literal_program(subject));
  candidates.push_back(straight_line_program(subject));
  if (subject.digits().find('0') == std::string::npos) {
    Program unary = simulation_prefix(static_cast<std::uint8_t>(Guest::Unary));
    unary.append(subject);
    unary.push_back(false);
    candidates.push_back(std::move(unary));
  }
  if (index != nullptr) {
    if (const Program* p = index->shortest(subject)) candidates.push_back(*p);
  }
  const Program best = *std::min_element(candidates.begin(), candidates.end(),
                                         shorter_then_smaller);

  MachineLimits limits;
  limits.max_steps = witness_step_budget(subject);
  limits.max_output_bits = std::max<std::uint64_t>(limits.max_output_bits, subject.size());
  const RunOutcome check = run(best, limits);
  if (check.kind != OutcomeKind::Halted || check.output != subject ||
      check.bits_consumed != best.size()) {
    throw Error("internal: witness " + best.display() + " does not print its subject");
  }

  ComplexityBound out;
  out.subject = subject;
  out.kind = BoundKind::Upper;
  out.value = best.size();
  out.witness = best;
  out.search_bound = index != nullptr ? index->bound() : 0;
  return out;
}

ComplexityBound complexity_exact(const BitString& subject, const ComplexityIndex& index,
                                 std::size_t bound) {
  if (bound > index.bound()) {
    throw Error("search bound " + std::to_string(bound) + " exceeds the explored depth " +
                    std::to_string(index.bound()),
                true);
  }
  ComplexityBound out;
  out.subject = subject;
  out.search_bound = bound;
  const auto pending = index.shortest_pending();
  const Program* best = index.shortest(subject);
  if (best != nullptr && best->size() <= bound) {
    out.value = best->size();
    out.witness = *best;
    out.kind = pending && *pending <= out.value ? BoundKind::Upper : BoundKind::ExactWithin;
    return out;
  }
  out.kind = pending && *pending <= bound ? BoundKind::Undetermined : BoundKind::AboveBound;
  return out;
}

InvarianceReport invariance_audit(std::uint8_t guest, std::size_t bound,
                                  const ComplexityIndex& machine_index) {
  if (!is_registered_guest(guest)) {
    throw Error("unknown guest code " + std::to_string(guest), true);
  }
  if (machine_index.bound() < bound + kSimPrefixBits) {
    throw Error("machine index covers " + std::to_string(machine_index.bound()) +
                    " bits; the audit needs " + std::to_string(bound + kSimPrefixBits),
                true);
  }

  // Shortest (then smallest) guest program per output, over all streams.
  std::map<std::string, Program> guest_best;
  for (std::size_t len = 0; len <= bound; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      Program p;
      append_uint(p, v, static_cast<unsigned>(len));
      const RunOutcome r = run_guest(guest, p);
      if (r.kind != OutcomeKind::Halted || r.bits_consumed != len) continue;
      auto [it, inserted] = guest_best.try_emplace(r.output.digits(), p);
      if (!inserted && shorter_then_smaller(p, it->second)) it->second = p;
    }
  }

  InvarianceReport report;
  report.guest = guest;
  report.bound = bound;
  bool first = true;
  for (const auto& [digits, witness] : guest_best) {
    InvarianceRow row;
    row.subject = BitString::parse(digits.empty() ? "-" : digits);
    row.guest_complexity = witness.size();
    row.guest_witness = witness;
    if (const Program* u = machine_index.shortest(row.subject)) {
      row.machine_complexity = u->size();
      row.machine_witness = *u;
      const long gap = static_cast<long>(u->size()) - static_cast<long>(witness.size());
      report.max_gap = first ? gap : std::max(report.max_gap, gap);
      first = false;
      if (u->size() > witness.size() + kSimPrefixBits) report.holds = false;
    } else {
      report.holds = false;
    }
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
    if (a.guest_complexity != b.guest_complexity) return a.guest_complexity < b.guest_complexity;
    return a.subject < b.subject;
  });
  return report;
}

CountingReport counting_check(std::size_t n, std::size_t m, const ComplexityIndex& index) {
  if (m > index.bound()) {
    throw Error("complexity cap " + std::to_string(m) + " exceeds the explored depth " +
                    std::to_string(index.bound()),
                true);
  }
  if (m > 62) throw Error("complexity cap too large", true);
  CountingReport report;
  report.n = n;
  report.m = m;
  report.bound = (std::uint64_t{1} << (m + 1)) - 1;
  for (const auto& [digits, program] : index.entries()) {
    if (digits.size() == n && program.size() <= m) ++report.count;
  }
  report.pass = report.count <= report.bound;
  return report;
}

ProbeReport irreducibility_probe(const BitString& certified, const ComplexityIndex& index) {
  ProbeReport report;
  std::size_t previous = 0;
  for (std::size_t m = 1; m <= certified.size(); ++m) {
    ProbeRow row;
    row.m = m;
    row.prefix = certified.prefix(m);
    row.bound = complexity_exact(row.prefix, index, index.bound());
    const std::size_t h = row.bound.has_witness() ? row.bound.value : index.bound() + 1;
    if (h < previous) report.non_decreasing = false;
    previous = h;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace omegaforge
