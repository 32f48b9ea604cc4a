#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fmtwb/counterexample.hpp"
#include "fmtwb/games.hpp"

namespace fmtwb {

// Line-oriented key/value machine format.  The first line is the version
// header `fmtwb 1`; every other line is `key value` with the key free of
// spaces and the value running to the end of the line (possibly empty).
// Keys may repeat, order is meaningful, serialization is deterministic, and
// identical inputs yield byte-identical output.
struct Record {
  std::vector<std::pair<std::string, std::string>> lines;

  void add(std::string key, std::string value);
  void add_num(std::string key, std::uint64_t value);
  void add_flag(std::string key, bool value);
  void add_tuple(std::string key, std::span<const Element> tuple);

  // First value under the key; get throws SyntaxError when absent.
  const std::string* find(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::vector<std::string> all(const std::string& key) const;

  std::string serialize() const;
  static Record parse(const std::string& text);
};

// Space-separated element list; empty text is the empty tuple.
std::vector<Element> parse_elements(const std::string& text);
std::uint64_t parse_number(const std::string& text);

Record to_record(const VerifyReport& report);
VerifyReport verify_report_from_record(const Record& record);

Record to_record(const GameOutcome& outcome, const GameConfig& cfg);
GameOutcome game_outcome_from_record(const Record& record, GameConfig* cfg = nullptr);

Record to_record(const TransferReport& report);

}  // namespace fmtwb
