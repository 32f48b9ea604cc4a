#include "fmtwb/report.hpp"

#include <sstream>

#include "fmtwb/errors.hpp"

namespace fmtwb {

void Record::add(std::string key, std::string value) {
  lines.emplace_back(std::move(key), std::move(value));
}

void Record::add_num(std::string key, std::uint64_t value) {
  add(std::move(key), std::to_string(value));
}

void Record::add_flag(std::string key, bool value) {
  add(std::move(key), value ? "1" : "0");
}

void Record::add_tuple(std::string key, std::span<const Element> tuple) {
  std::string out;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(tuple[i]);
  }
  add(std::move(key), std::move(out));
}

const std::string* Record::find(const std::string& key) const {
  for (const auto& [k, v] : lines)
    if (k == key) return &v;
  return nullptr;
}

const std::string& Record::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) fail(Errc::syntax_error, "record is missing key '" + key + "'");
  return *v;
}

std::vector<std::string> Record::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : lines)
    if (k == key) out.push_back(v);
  return out;
}

std::string Record::serialize() const {
  std::string out = "fmtwb 1\n";
  for (const auto& [k, v] : lines) {
    out += k;
    if (!v.empty()) {
      out += ' ';
      out += v;
    }
    out += '\n';
  }
  return out;
}

Record Record::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "fmtwb 1")
    fail(Errc::syntax_error, "missing 'fmtwb 1' header");
  Record record;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    if (space == std::string::npos)
      record.lines.emplace_back(line, "");
    else
      record.lines.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  return record;
}

std::vector<Element> parse_elements(const std::string& text) {
  std::vector<Element> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(value);
    } catch (const std::exception&) {
      fail(Errc::syntax_error, "bad element '" + token + "'");
    }
  }
  return out;
}

std::uint64_t parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    fail(Errc::syntax_error, "bad number '" + text + "'");
  }
}

namespace {

bool parse_flag(const std::string& text) {
  if (text == "1") return true;
  if (text == "0") return false;
  fail(Errc::syntax_error, "bad flag '" + text + "'");
}

// Splits off the first `count` space-separated tokens as numbers; the
// remainder (after one separating space, if any) stays in `rest`.
std::vector<std::uint64_t> take_numbers(const std::string& text, std::size_t count,
                                        std::string& rest) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t space = text.find(' ', pos);
    const std::string token =
        text.substr(pos, space == std::string::npos ? std::string::npos : space - pos);
    out.push_back(parse_number(token));
    if (space == std::string::npos) {
      pos = text.size();
      break;
    }
    pos = space + 1;
  }
  if (out.size() != count) fail(Errc::syntax_error, "record line is too short");
  rest = text.substr(pos);
  return out;
}

}  // namespace

Record to_record(const VerifyReport& report) {
  Record r;
  r.add("kind", "verify");
  r.add_num("n", static_cast<std::uint64_t>(report.params.n));
  r.add_num("k", static_cast<std::uint64_t>(report.params.k));
  r.add_flag("exhaustive", report.exhaustive);
  r.add_num("sample.count", report.sample_count);
  r.add_num("seed", report.seed);
  r.add("cs3.rule", report.cs3_rule);
  r.add_num("pairs.checked", report.pairs_checked);
  r.add_num("strategy.failures", report.strategy_failures);
  r.add_num("plan.violations", report.plan_violations);
  for (const CheckResult& c : report.checks) {
    std::string line = c.name;
    line += c.pass ? " 1" : " 0";
    line += c.skipped ? " 1" : " 0";
    line += ' ';
    line += std::to_string(c.checked);
    if (!c.detail.empty()) {
      line += ' ';
      line += c.detail;
    }
    r.add("check", std::move(line));
  }
  if (report.first_failure) {
    r.add_tuple("first.failure.witnesses", report.first_failure->first);
    r.add_tuple("first.failure.universal", report.first_failure->second);
  }
  r.add_flag("pass", report.pass);
  return r;
}

VerifyReport verify_report_from_record(const Record& record) {
  if (record.get("kind") != "verify")
    fail(Errc::syntax_error, "record kind is not 'verify'");
  VerifyReport report;
  report.params.n = static_cast<int>(parse_number(record.get("n")));
  report.params.k = static_cast<int>(parse_number(record.get("k")));
  report.exhaustive = parse_flag(record.get("exhaustive"));
  report.sample_count = parse_number(record.get("sample.count"));
  report.seed = parse_number(record.get("seed"));
  report.cs3_rule = record.get("cs3.rule");
  report.pairs_checked = parse_number(record.get("pairs.checked"));
  report.strategy_failures = parse_number(record.get("strategy.failures"));
  report.plan_violations = parse_number(record.get("plan.violations"));
  for (const std::string& line : record.all("check")) {
    const std::size_t name_end = line.find(' ');
    if (name_end == std::string::npos) fail(Errc::syntax_error, "bad check line");
    CheckResult c;
    c.name = line.substr(0, name_end);
    std::string rest;
    const auto nums = take_numbers(line.substr(name_end + 1), 3, rest);
    c.pass = nums[0] == 1;
    c.skipped = nums[1] == 1;
    c.checked = nums[2];
    c.detail = rest;
    report.checks.push_back(std::move(c));
  }
  if (const std::string* w = record.find("first.failure.witnesses")) {
    report.first_failure = {parse_elements(*w),
                            parse_elements(record.get("first.failure.universal"))};
  }
  report.pass = parse_flag(record.get("pass"));
  return report;
}

Record to_record(const GameOutcome& outcome, const GameConfig& cfg) {
  Record r;
  r.add("kind", "game");
  r.add_num("k", static_cast<std::uint64_t>(cfg.k));
  r.add_num("n", static_cast<std::uint64_t>(cfg.n));
  r.add_num("budget", cfg.budget);
  r.add("winner", outcome.winner == Winner::duplicator ? "duplicator" : "spoiler");
  r.add_num("positions", outcome.positions);
  const GameCertificate& cert = outcome.certificate;
  r.add_flag("cert.elided", cert.elided);
  if (cert.elided) return r;
  if (outcome.winner == Winner::duplicator) {
    // Family games record which opponent answers each witness tuple.
    if (!cert.dup_member.empty()) r.add_tuple("cert.member", cert.dup_member);
    r.add_num("cert.b.count", cert.dup_b.size());
    r.add_num("cert.f.count", cert.dup_f.size());
    for (std::size_t i = 0; i < cert.dup_b.size(); ++i) {
      std::string line = std::to_string(i);
      for (Element e : cert.dup_b[i]) line += ' ' + std::to_string(e);
      r.add("cert.b", std::move(line));
    }
    for (std::size_t i = 0; i < cert.dup_f.size(); ++i) {
      std::string line = std::to_string(i);
      for (Element e : cert.dup_f[i]) line += ' ' + std::to_string(e);
      r.add("cert.f", std::move(line));
    }
  } else {
    r.add_tuple("cert.spoiler.a", cert.sp_a);
    r.add_num("cert.e.count", cert.sp_e.size());
    for (std::size_t i = 0; i < cert.sp_e.size(); ++i) {
      std::string line = std::to_string(i);
      for (Element e : cert.sp_e[i]) line += ' ' + std::to_string(e);
      r.add("cert.spoiler.e", std::move(line));
    }
  }
  return r;
}

GameOutcome game_outcome_from_record(const Record& record, GameConfig* cfg) {
  if (record.get("kind") != "game") fail(Errc::syntax_error, "record kind is not 'game'");
  GameConfig local;
  local.k = static_cast<int>(parse_number(record.get("k")));
  local.n = static_cast<int>(parse_number(record.get("n")));
  local.budget = parse_number(record.get("budget"));
  if (cfg) *cfg = local;

  GameOutcome outcome;
  const std::string& winner = record.get("winner");
  if (winner == "duplicator")
    outcome.winner = Winner::duplicator;
  else if (winner == "spoiler")
    outcome.winner = Winner::spoiler;
  else
    fail(Errc::syntax_error, "bad winner '" + winner + "'");
  outcome.positions = parse_number(record.get("positions"));
  outcome.certificate.elided = parse_flag(record.get("cert.elided"));
  if (outcome.certificate.elided) return outcome;

  auto fill = [&](const char* count_key, const char* line_key,
                  std::vector<std::vector<Element>>& table) {
    table.assign(parse_number(record.get(count_key)), {});
    for (const std::string& line : record.all(line_key)) {
      std::string rest;
      const auto index = take_numbers(line, 1, rest);
      if (index[0] >= table.size()) fail(Errc::syntax_error, "certificate index range");
      table[index[0]] = parse_elements(rest);
    }
  };
  if (outcome.winner == Winner::duplicator) {
    if (const std::string* members = record.find("cert.member"))
      outcome.certificate.dup_member = parse_elements(*members);
    fill("cert.b.count", "cert.b", outcome.certificate.dup_b);
    fill("cert.f.count", "cert.f", outcome.certificate.dup_f);
  } else {
    outcome.certificate.sp_a = parse_elements(record.get("cert.spoiler.a"));
    fill("cert.e.count", "cert.spoiler.e", outcome.certificate.sp_e);
  }
  return outcome;
}

Record to_record(const TransferReport& report) {
  Record r;
  r.add("kind", "transfer");
  r.add_num("n", static_cast<std::uint64_t>(report.params.n));
  r.add_num("k", static_cast<std::uint64_t>(report.params.k));
  r.add_num("budget", report.budget);
  r.add_flag("a.models.phi", report.a_models_phi);
  r.add_flag("a.models.prenex", report.a_models_prenex);
  for (std::size_t i = 0; i < report.b_models_phi.size(); ++i) {
    std::string line = std::to_string(i);
    line += report.b_models_phi[i] ? " 1" : " 0";
    line += report.b_models_prenex[i] ? " 1" : " 0";
    r.add("b.models", std::move(line));
  }
  r.add("prenex.class", prefix_class_to_string(report.prenex_class));
  r.add_flag("prefix.ok", report.prefix_ok);
  r.add_flag("games.exhaustive", report.games_exhaustive);
  for (std::size_t i = 0; i < report.games.size(); ++i) {
    std::string line = std::to_string(i);
    line += report.games[i].winner == Winner::duplicator ? " duplicator" : " spoiler";
    line += ' ' + std::to_string(report.games[i].positions);
    line += report.games_certified[i] ? " 1" : " 0";
    r.add("game", std::move(line));
  }
  if (!report.games_exhaustive) {
    r.add_num("strategy.pairs", report.strategy_pairs);
    r.add_flag("strategy.ok", report.strategy_ok);
  }
  r.add_flag("separation", report.separation);
  return r;
}

}  // namespace fmtwb
