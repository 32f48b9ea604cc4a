#include "fmtwb/structure_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "fmtwb/errors.hpp"

namespace fmtwb {

namespace {

std::string strip(const std::string& line) {
  std::string out = line;
  const auto hash = out.find('#');
  if (hash != std::string::npos) out.erase(hash);
  const auto begin = out.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = out.find_last_not_of(" \t\r\n");
  return out.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_line(int lineno, const std::string& what) {
  fail(Errc::syntax_error, what + " (line " + std::to_string(lineno) + ")");
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& text, int lineno, const std::string& what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    bad_line(lineno, "expected an integer for " + what + ", got '" + text + "'");
  }
}

// Tuples appear as (a,b) (c,d) ...; whitespace inside is free.
std::vector<Tuple> parse_tuples(const std::string& text, int arity, int lineno) {
  std::vector<Tuple> out;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  while (i < text.size()) {
    if (text[i] != '(') bad_line(lineno, "expected '(' in tuple list");
    ++i;
    Tuple tuple;
    while (true) {
      skip_space();
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) bad_line(lineno, "expected an element in tuple");
      tuple.push_back(parse_int(text.substr(start, i - start), lineno, "tuple element"));
      skip_space();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i >= text.size() || text[i] != ')') bad_line(lineno, "expected ')' in tuple list");
    ++i;
    if (static_cast<int>(tuple.size()) != arity)
      fail(Errc::arity_error, "tuple of arity " + std::to_string(tuple.size()) +
                                  " where " + std::to_string(arity) +
                                  " was declared (line " + std::to_string(lineno) + ")");
    out.push_back(std::move(tuple));
    skip_space();
  }
  return out;
}

}  // namespace

Structure read_structure(std::istream& in, std::string label) {
  std::string raw;
  int lineno = 0;

  // Significant lines, in order, with their numbers.
  std::vector<std::pair<int, std::string>> lines;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = strip(raw);
    if (!line.empty()) lines.emplace_back(lineno, line);
  }
  if (lines.size() < 2) fail(Errc::syntax_error, "expected vocab and universe lines");

  // vocab R1/a1 ... ; c1 c2 ...
  auto [vline, vtext] = lines[0];
  if (vtext.rfind("vocab", 0) != 0) bad_line(vline, "expected 'vocab ...' first");
  std::string decls = vtext.substr(5);
  std::string constants_part;
  const auto semi = decls.find(';');
  if (semi != std::string::npos) {
    constants_part = decls.substr(semi + 1);
    decls.erase(semi);
  }
  std::vector<RelationSymbol> rels;
  for (const std::string& tok : split_tokens(decls)) {
    const auto slash = tok.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= tok.size())
      bad_line(vline, "expected name/arity, got '" + tok + "'");
    rels.push_back(
        {tok.substr(0, slash), parse_int(tok.substr(slash + 1), vline, "arity")});
  }
  std::vector<std::string> constant_names = split_tokens(constants_part);
  VocabularyPtr vocab;
  try {
    vocab = make_vocabulary(std::move(rels), std::move(constant_names));
  } catch (const Error& e) {
    bad_line(vline, e.what());
  }

  auto [uline, utext] = lines[1];
  {
    std::vector<std::string> toks = split_tokens(utext);
    if (toks.size() != 2 || toks[0] != "universe")
      bad_line(uline, "expected 'universe N'");
    const int n = parse_int(toks[1], uline, "universe size");
    if (n < 1) bad_line(uline, "universe must have at least one element");
    std::vector<Element> universe(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) universe[static_cast<std::size_t>(i)] = i + 1;

    std::vector<std::vector<Tuple>> tables(vocab->relations().size());
    std::vector<bool> table_seen(vocab->relations().size(), false);
    std::map<std::string, Element> constant_values;

    for (std::size_t li = 2; li < lines.size(); ++li) {
      auto [num, text] = lines[li];
      if (text.rfind("rel", 0) == 0) {
        const auto colon = text.find(':');
        if (colon == std::string::npos) bad_line(num, "expected ':' in rel line");
        std::vector<std::string> head = split_tokens(text.substr(3, colon - 3));
        if (head.size() != 1) bad_line(num, "expected one relation name in rel line");
        auto rel = vocab->relation_index(head[0]);
        if (!rel)
          fail(Errc::unknown_symbol,
               "relation " + head[0] + " is not declared (line " + std::to_string(num) + ")");
        if (table_seen[static_cast<std::size_t>(*rel)])
          bad_line(num, "duplicate rel line for " + head[0]);
        table_seen[static_cast<std::size_t>(*rel)] = true;
        tables[static_cast<std::size_t>(*rel)] =
            parse_tuples(text.substr(colon + 1), vocab->arity(*rel), num);
        for (const Tuple& t : tables[static_cast<std::size_t>(*rel)])
          for (Element e : t)
            if (e < 1 || e > n)
              bad_line(num, "element " + std::to_string(e) + " outside universe 1.." +
                                std::to_string(n));
      } else if (text.rfind("const", 0) == 0) {
        std::string rest = text.substr(5);
        const auto eq = rest.find('=');
        if (eq == std::string::npos) bad_line(num, "expected '=' in const line");
        std::vector<std::string> name_toks = split_tokens(rest.substr(0, eq));
        std::vector<std::string> value_toks = split_tokens(rest.substr(eq + 1));
        if (name_toks.size() != 1 || value_toks.size() != 1)
          bad_line(num, "expected 'const name = element'");
        if (!vocab->constant_index(name_toks[0]))
          fail(Errc::unknown_symbol, "constant " + name_toks[0] +
                                         " is not declared (line " + std::to_string(num) + ")");
        const int value = parse_int(value_toks[0], num, "constant value");
        if (value < 1 || value > n)
          bad_line(num, "element " + std::to_string(value) + " outside universe 1.." +
                            std::to_string(n));
        if (!constant_values.emplace(name_toks[0], value).second)
          bad_line(num, "duplicate const line for " + name_toks[0]);
      } else {
        bad_line(num, "expected a rel or const line");
      }
    }

    std::vector<Element> constants;
    for (const std::string& name : vocab->constants()) {
      auto it = constant_values.find(name);
      if (it == constant_values.end())
        fail(Errc::missing_constant, "constant " + name + " is never defined");
      constants.push_back(it->second);
    }
    return Structure(vocab, std::move(universe), std::move(tables), std::move(constants),
                     std::move(label));
  }
}

Structure read_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  return read_structure(in, path);
}

std::string write_structure(const Structure& s) {
  const int n = s.size();
  for (int i = 0; i < n; ++i)
    if (s.universe()[static_cast<std::size_t>(i)] != i + 1)
      fail(Errc::precondition_failed,
           "only universes of the form 1..N can be written in the text format");

  std::ostringstream out;
  out << "vocab";
  for (const auto& r : s.vocab().relations()) out << ' ' << r.name << '/' << r.arity;
  if (!s.vocab().constants().empty()) {
    out << " ;";
    for (const auto& c : s.vocab().constants()) out << ' ' << c;
  }
  out << "\nuniverse " << n << '\n';
  for (std::size_t r = 0; r < s.tables().size(); ++r) {
    out << "rel " << s.vocab().relations()[r].name << ':';
    for (const Tuple& t : s.table(static_cast<int>(r))) {
      out << " (";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out << ',';
        out << t[i];
      }
      out << ')';
    }
    out << '\n';
  }
  for (std::size_t c = 0; c < s.constant_values().size(); ++c)
    out << "const " << s.vocab().constants()[c] << " = " << s.constant_value(c) << '\n';
  return out.str();
}

void write_structure_file(const Structure& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out << write_structure(s);
  if (!out) fail(Errc::io_error, "failed writing " + path);
}

}  // namespace fmtwb
