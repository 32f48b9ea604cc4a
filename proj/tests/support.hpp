// Shared test helpers: deterministic random structures, sentences, and
// relabelings used by the unit and acceptance suites.
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "fmtwb/counterexample.hpp"
#include "fmtwb/formula.hpp"
#include "fmtwb/rng.hpp"
#include "fmtwb/structure.hpp"

namespace fmtwb::testing {

inline std::vector<Tuple> all_tuples(const std::vector<Element>& universe, int arity) {
  std::vector<Tuple> out;
  Tuple current(static_cast<std::size_t>(arity));
  const auto rec = [&](auto&& self, int pos) -> void {
    if (pos == arity) {
      out.push_back(current);
      return;
    }
    for (Element e : universe) {
      current[static_cast<std::size_t>(pos)] = e;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// Uniform structure over vocab: size in [1, max_size], each candidate tuple
// kept with probability 1/2, constants uniform over the universe.
inline Structure random_structure(Rng& rng, const VocabularyPtr& vocab, int max_size) {
  const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size)));
  std::vector<Element> universe(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) universe[static_cast<std::size_t>(i)] = i + 1;
  std::vector<std::vector<Tuple>> tables;
  for (const RelationSymbol& rel : vocab->relations()) {
    std::vector<Tuple> table;
    for (const Tuple& t : all_tuples(universe, rel.arity))
      if (rng.coin()) table.push_back(t);
    tables.push_back(std::move(table));
  }
  std::vector<Element> constants;
  for (std::size_t i = 0; i < vocab->constants().size(); ++i)
    constants.push_back(universe[rng.below(static_cast<std::uint64_t>(m))]);
  return Structure(vocab, std::move(universe), std::move(tables), std::move(constants));
}

// Member of the block vocabulary's order class: universe 1..m under the
// standard order, random successor edges and marks, c = 1, d = m.  Satisfies
// the three order axioms by construction.
inline Structure random_order_structure(Rng& rng, int max_size) {
  const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size)));
  std::vector<Element> universe(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) universe[static_cast<std::size_t>(i)] = i + 1;
  std::vector<Tuple> leq;
  for (int i = 1; i <= m; ++i)
    for (int j = i; j <= m; ++j) leq.push_back({i, j});
  std::vector<Tuple> succ;
  for (int i = 1; i < m; ++i)
    if (rng.coin()) succ.push_back({i, i + 1});
  std::vector<Tuple> marks;
  for (int i = 1; i <= m; ++i)
    if (rng.coin()) marks.push_back({i});
  return Structure(tau(), std::move(universe), {std::move(leq), std::move(succ), std::move(marks)},
                   {1, m});
}

// Random induced substructure whose universe keeps all constant values.
inline Structure random_substructure(Rng& rng, const Structure& s) {
  std::vector<Element> keep = s.constant_values();
  for (Element e : s.universe())
    if (rng.coin()) keep.push_back(e);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) keep.push_back(s.universe()[rng.below(static_cast<std::uint64_t>(s.size()))]);
  return induced_substructure(s, keep);
}

// Renames universe elements by a random injection into a shifted range,
// preserving all relations and constants; the result is isomorphic to s.
inline Structure random_relabel(Rng& rng, const Structure& s) {
  const int m = s.size();
  std::vector<Element> fresh(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < 2 * m; ++i) fresh[static_cast<std::size_t>(i)] = i + 1;
  for (int i = 2 * m - 1; i > 0; --i)
    std::swap(fresh[static_cast<std::size_t>(i)],
              fresh[rng.below(static_cast<std::uint64_t>(i + 1))]);
  std::map<Element, Element> to;
  for (int i = 0; i < m; ++i) to[s.universe()[static_cast<std::size_t>(i)]] = fresh[static_cast<std::size_t>(i)];

  std::vector<Element> universe;
  for (Element e : s.universe()) universe.push_back(to.at(e));
  std::sort(universe.begin(), universe.end());
  std::vector<std::vector<Tuple>> tables;
  for (const auto& table : s.tables()) {
    std::vector<Tuple> mapped;
    for (const Tuple& t : table) {
      Tuple u;
      for (Element e : t) u.push_back(to.at(e));
      mapped.push_back(std::move(u));
    }
    tables.push_back(std::move(mapped));
  }
  std::vector<Element> constants;
  for (Element c : s.constant_values()) constants.push_back(to.at(c));
  return Structure(s.vocab_ptr(), std::move(universe), std::move(tables),
                   std::move(constants));
}

// Random term over vars and the vocabulary's constants.
inline Term random_term(Rng& rng, const Vocabulary& vocab,
                        const std::vector<std::string>& vars) {
  if (!vocab.constants().empty() && rng.below(4) == 0)
    return Term::cons(vocab.constants()[rng.below(vocab.constants().size())]);
  return Term::var(vars[rng.below(vars.size())]);
}

// Random quantifier-free formula of the given depth.
inline FormulaPtr random_matrix(Rng& rng, const Vocabulary& vocab,
                                const std::vector<std::string>& vars, int depth) {
  if (depth <= 0 || rng.below(3) == 0) {
    if (!vocab.relations().empty() && rng.coin()) {
      const std::size_t r = rng.below(vocab.relations().size());
      std::vector<Term> args;
      for (int i = 0; i < vocab.relations()[r].arity; ++i)
        args.push_back(random_term(rng, vocab, vars));
      return Formula::atom(vocab.relations()[r].name, std::move(args));
    }
    return Formula::equals(random_term(rng, vocab, vars), random_term(rng, vocab, vars));
  }
  switch (rng.below(4)) {
    case 0: return Formula::negate(random_matrix(rng, vocab, vars, depth - 1));
    case 1:
      return Formula::conj(random_matrix(rng, vocab, vars, depth - 1),
                           random_matrix(rng, vocab, vars, depth - 1));
    case 2:
      return Formula::disj(random_matrix(rng, vocab, vars, depth - 1),
                           random_matrix(rng, vocab, vars, depth - 1));
    default:
      return Formula::impl(random_matrix(rng, vocab, vars, depth - 1),
                           random_matrix(rng, vocab, vars, depth - 1));
  }
}

// Random sentence: nested quantifiers with random polarity around bodies that
// may themselves mix quantifiers and connectives.
inline FormulaPtr random_sentence(Rng& rng, const Vocabulary& vocab, int quantifiers,
                                  int depth) {
  std::vector<std::string> vars;
  for (int i = 0; i < quantifiers; ++i) vars.push_back("v" + std::to_string(i + 1));
  FormulaPtr body = random_matrix(rng, vocab, vars, depth);
  for (int i = quantifiers - 1; i >= 0; --i) {
    // Conjuncts spliced between quantifiers may only mention variables that
    // remain bound at this depth.
    if (rng.coin() && i + 1 < quantifiers) {
      const std::vector<std::string> outer(vars.begin(), vars.begin() + i + 1);
      body = Formula::conj(body, random_matrix(rng, vocab, outer, 1));
    }
    body = rng.coin() ? Formula::exists(vars[static_cast<std::size_t>(i)], std::move(body))
                      : Formula::forall(vars[static_cast<std::size_t>(i)], std::move(body));
  }
  return body;
}

// Prenex sentence with a pure existential or universal prefix.
inline FormulaPtr random_prefix_sentence(Rng& rng, const Vocabulary& vocab,
                                         int quantifiers, int depth, bool existential) {
  std::vector<std::string> vars;
  for (int i = 0; i < quantifiers; ++i) vars.push_back("v" + std::to_string(i + 1));
  FormulaPtr body = random_matrix(rng, vocab, vars, depth);
  for (int i = quantifiers - 1; i >= 0; --i)
    body = existential ? Formula::exists(vars[static_cast<std::size_t>(i)], std::move(body))
                       : Formula::forall(vars[static_cast<std::size_t>(i)], std::move(body));
  return body;
}

// Symmetric irreflexive edge table from an undirected edge-bit mask over
// vertex pairs (i, j), i < j, in lexicographic pair order.
inline Structure graph_from_mask(const VocabularyPtr& vocab, int vertices,
                                 std::uint64_t mask) {
  std::vector<Element> universe(static_cast<std::size_t>(vertices));
  for (int i = 0; i < vertices; ++i) universe[static_cast<std::size_t>(i)] = i + 1;
  std::vector<Tuple> edges;
  int bit = 0;
  for (int i = 1; i <= vertices; ++i)
    for (int j = i + 1; j <= vertices; ++j, ++bit)
      if (mask >> bit & 1) {
        edges.push_back({i, j});
        edges.push_back({j, i});
      }
  std::sort(edges.begin(), edges.end());
  return Structure(vocab, std::move(universe), {std::move(edges)}, {});
}

}  // namespace fmtwb::testing
