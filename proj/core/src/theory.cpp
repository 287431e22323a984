#include "omegaforge/theory.hpp"

#include <bit>
#include <charconv>
#include <set>
#include <string>

namespace omegaforge {

namespace {

bool is_prefix_list(const std::vector<Assertion>& assertions) {
  for (std::size_t i = 0; i < assertions.size(); ++i) {
    if (assertions[i].index != i + 1) return false;
  }
  return true;
}

void check_indices(const std::vector<Assertion>& assertions) {
  std::set<std::uint64_t> seen;
  for (const auto& a : assertions) {
    if (a.index == 0) throw Error("assertion indices are 1-based");
    if (!seen.insert(a.index).second) {
      throw Error("bit " + std::to_string(a.index) + " is asserted twice");
    }
  }
}

unsigned ceil_log2(std::size_t m) {
  return m <= 1 ? 0 : static_cast<unsigned>(std::bit_width(m - 1));
}

}  // namespace

BitString encode_assertions(const std::vector<Assertion>& assertions) {
  BitString out;
  if (is_prefix_list(assertions)) {
    out.push_back(true);
    for (const auto& a : assertions) out.push_back(a.value);
    return out;
  }
  out.push_back(false);
  out.append(gamma_encode(assertions.size() + 1));
  for (const auto& a : assertions) {
    out.append(gamma_encode(a.index));
    out.push_back(a.value);
  }
  return out;
}

std::vector<Assertion> decode_assertions(const BitString& encoding) {
  if (encoding.empty()) throw Error("empty assertion encoding");
  std::vector<Assertion> out;
  if (encoding[0]) {
    for (std::size_t i = 1; i < encoding.size(); ++i) out.push_back({i, encoding[i]});
    return out;
  }
  std::size_t pos = 1;
  const auto count = gamma_decode(encoding, pos);
  if (!count) throw Error("truncated assertion count");
  for (std::uint64_t i = 0; i + 1 < *count; ++i) {
    const auto index = gamma_decode(encoding, pos);
    if (!index || pos >= encoding.size()) throw Error("truncated assertion");
    out.push_back({*index, encoding[pos++]});
  }
  if (pos != encoding.size()) throw Error("trailing bits after assertion list");
  check_indices(out);
  return out;
}

TheoryArtifact make_theory(std::vector<Assertion> assertions) {
  check_indices(assertions);
  TheoryArtifact t;
  t.carrier = literal_program(encode_assertions(assertions));
  t.assertions = std::move(assertions);
  return t;
}

TheoryArtifact theory_from_carrier(const Program& carrier, std::uint64_t step_budget) {
  const RunOutcome r = run(carrier, step_budget);
  if (r.kind != OutcomeKind::Halted || r.bits_consumed != carrier.size()) {
    throw Error(std::string("theory carrier does not halt within budget (") + to_string(r.kind) +
                ")");
  }
  TheoryArtifact t;
  t.carrier = carrier;
  t.assertions = decode_assertions(r.output);
  return t;
}

TheoryArtifact parse_theory_file(std::string_view text, std::uint64_t step_budget) {
  std::vector<Assertion> assertions;
  std::optional<Program> carrier;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto sp = line.find(' ');
    if (sp == std::string_view::npos) {
      throw Error("theory line " + std::to_string(line_no) + ": expected two fields");
    }
    const auto key = line.substr(0, sp);
    auto rest = line.substr(sp + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (key == "carrier") {
      auto bits = BitString::try_parse(rest);
      if (!bits) throw Error("theory line " + std::to_string(line_no) + ": bad carrier bits");
      carrier = std::move(*bits);
      continue;
    }
    Assertion a;
    const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), a.index);
    if (ec != std::errc{} || p != key.data() + key.size() || (rest != "0" && rest != "1")) {
      throw Error("theory line " + std::to_string(line_no) + ": expected '<k> <0|1>'");
    }
    a.value = rest == "1";
    assertions.push_back(a);
  }
  if (carrier) {
    if (!assertions.empty()) throw Error("theory file mixes a carrier with assertion lines");
    return theory_from_carrier(*carrier, step_budget);
  }
  return make_theory(std::move(assertions));
}

TheoryArtifact certified_theory(const BitString& certified) {
  std::vector<Assertion> assertions;
  for (std::size_t i = 0; i < certified.size(); ++i) assertions.push_back({i + 1, certified[i]});
  return make_theory(std::move(assertions));
}

std::size_t certified_theory_size_limit(std::size_t m) {
  const std::uint64_t inner = static_cast<std::uint64_t>(m) * (ceil_log2(m) + 1) + 1;
  return m + 2 * floor_log2(inner) + 11;
}

const char* to_string(AssertionStatus status) {
  switch (status) {
    case AssertionStatus::Confirmed: return "CONFIRMED";
    case AssertionStatus::Contradicted: return "UNSOUND";
    case AssertionStatus::Unverifiable: return "UNVERIFIABLE";
  }
  return "?";
}

TheoryAudit theory_audit(const TheoryArtifact& theory, const OmegaBits& certified,
                         const ComplexityIndex* index) {
  const RunOutcome r = run(theory.carrier, witness_step_budget(BitString{}));
  if (r.kind != OutcomeKind::Halted || r.bits_consumed != theory.carrier.size()) {
    throw Error("theory carrier does not halt within budget");
  }
  if (decode_assertions(r.output) != theory.assertions) {
    throw Error("theory carrier output does not encode its assertion list");
  }

  TheoryAudit audit;
  audit.assertion_count = theory.assertions.size();
  for (const auto& a : theory.assertions) {
    AssertionCheck check{a, AssertionStatus::Unverifiable};
    if (a.index <= certified.certified.size()) {
      check.status = certified.certified[a.index - 1] == a.value ? AssertionStatus::Confirmed
                                                                 : AssertionStatus::Contradicted;
    }
    switch (check.status) {
      case AssertionStatus::Confirmed: ++audit.confirmed; break;
      case AssertionStatus::Contradicted: ++audit.contradicted; break;
      case AssertionStatus::Unverifiable: ++audit.unverifiable; break;
    }
    audit.checks.push_back(check);
  }
  audit.sound = audit.contradicted == 0;

  audit.carrier_size = theory.carrier.size();
  audit.theory_complexity = complexity_upper(r.output, index);
  audit.c_prime_observed =
      static_cast<long>(audit.assertion_count) - static_cast<long>(audit.theory_complexity.value);

  audit.converse = certified_theory(certified.certified);
  audit.converse_size = audit.converse.carrier.size();
  audit.converse_limit = certified_theory_size_limit(certified.certified.size());
  audit.converse_within_limit = audit.converse_size <= audit.converse_limit;
  return audit;
}

}  // namespace omegaforge
