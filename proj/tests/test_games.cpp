#include <vector>

#include "doctest.h"
#include "fmtwb/counterexample.hpp"
#include "fmtwb/errors.hpp"
#include "fmtwb/eval.hpp"
#include "fmtwb/games.hpp"
#include "fmtwb/rng.hpp"
#include "support.hpp"

using namespace fmtwb;

namespace {

VocabularyPtr unary() { return make_vocabulary({{"P", 1}}, {}); }

Structure unary_structure(const std::vector<Element>& marked, int size) {
  std::vector<Element> universe(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) universe[static_cast<std::size_t>(i)] = i + 1;
  std::vector<Tuple> table;
  for (Element e : marked) table.push_back({e});
  return Structure(unary(), std::move(universe), {std::move(table)}, {});
}

// Semantic reference for tiny universes: Spoiler wins the (k, n) game from a
// to b exactly when some prenex sentence with k existentials, n universals,
// and an arbitrary quantifier-free matrix over the atoms P(v) and v = w is
// true in a and false in b.  Matrices are enumerated as truth tables.
bool spoiler_semantically(const Structure& a, const Structure& b, int k, int n) {
  std::vector<std::pair<int, int>> atoms;  // (kind, payload): see below
  // Atom encoding over the concatenated tuple t = (x..., y...):
  //   kind 0: P(t[i]), payload i
  //   kind 1: t[i] = t[j], payload i * 16 + j
  const int vars = k + n;
  for (int i = 0; i < vars; ++i) atoms.push_back({0, i});
  for (int i = 0; i < vars; ++i)
    for (int j = i + 1; j < vars; ++j) atoms.push_back({1, i * 16 + j});

  const auto atom_bits = [&](const Structure& s, const std::vector<Element>& t) {
    unsigned bits = 0;
    for (std::size_t ai = 0; ai < atoms.size(); ++ai) {
      bool value;
      if (atoms[ai].first == 0) {
        const Element e = t[static_cast<std::size_t>(atoms[ai].second)];
        value = s.has_tuple(0, std::vector<Element>{e});
      } else {
        value = t[static_cast<std::size_t>(atoms[ai].second / 16)] ==
                t[static_cast<std::size_t>(atoms[ai].second % 16)];
      }
      if (value) bits |= 1u << ai;
    }
    return bits;
  };

  // truth_table bit v says the matrix holds at atom valuation v.
  const auto models = [&](const Structure& s, std::uint64_t truth_table) {
    std::vector<Element> t(static_cast<std::size_t>(vars));
    const auto forall_y = [&](auto&& self, int pos) -> bool {
      if (pos == vars) return (truth_table >> atom_bits(s, t) & 1) != 0;
      for (Element e : s.universe()) {
        t[static_cast<std::size_t>(pos)] = e;
        if (!self(self, pos + 1)) return false;
      }
      return true;
    };
    const auto exists_x = [&](auto&& self, int pos) -> bool {
      if (pos == k) return forall_y(forall_y, pos);
      for (Element e : s.universe()) {
        t[static_cast<std::size_t>(pos)] = e;
        if (self(self, pos + 1)) return true;
      }
      return false;
    };
    return exists_x(exists_x, 0);
  };

  const std::uint64_t tables = 1ull << (1u << atoms.size());
  for (std::uint64_t tt = 0; tt < tables; ++tt)
    if (models(a, tt) && !models(b, tt)) return true;
  return false;
}

}  // namespace

TEST_CASE("game solver matches the semantic transfer relation on tiny structures") {
  std::vector<Structure> all;
  for (int size = 1; size <= 3; ++size) {
    for (std::uint64_t mask = 0; mask < (1ull << size); ++mask) {
      std::vector<Element> marked;
      for (int e = 1; e <= size; ++e)
        if (mask >> (e - 1) & 1) marked.push_back(e);
      all.push_back(unary_structure(marked, size));
    }
  }
  REQUIRE(all.size() == 14);

  for (const auto& [k, n] : std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {1, 1}}) {
    for (const Structure& a : all)
      for (const Structure& b : all) {
        const GameOutcome outcome = solve_prefix_game(a, b, {k, n, 100000000});
        const bool spoiler = spoiler_semantically(a, b, k, n);
        CHECK((outcome.winner == Winner::spoiler) == spoiler);
        CHECK(check_certificate(a, b, {k, n, 100000000}, outcome));
      }
  }
}

TEST_CASE("duplicator wins reflexively and monotonically") {
  Rng rng(53);
  const VocabularyPtr graph = make_vocabulary({{"E", 2}}, {});
  for (int trial = 0; trial < 20; ++trial) {
    Structure s = testing::random_structure(rng, graph, 4);
    CHECK(solve_prefix_game(s, s, {2, 1, 100000000}).winner == Winner::duplicator);

    Structure t = testing::random_structure(rng, graph, 4);
    const bool big = solve_prefix_game(s, t, {1, 1, 100000000}).winner == Winner::duplicator;
    if (big) {
      CHECK(solve_prefix_game(s, t, {1, 0, 100000000}).winner == Winner::duplicator);
      CHECK(solve_prefix_game(s, t, {0, 1, 100000000}).winner == Winner::duplicator);
      CHECK(solve_prefix_game(s, t, {0, 0, 100000000}).winner == Winner::duplicator);
    }
  }
}

TEST_CASE("duplicator wins transfer prefix sentences") {
  Rng rng(59);
  const VocabularyPtr vocab = unary();
  int transfers = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Structure a = testing::random_structure(rng, vocab, 3);
    Structure b = testing::random_structure(rng, vocab, 3);
    const GameOutcome outcome = solve_prefix_game(a, b, {1, 1, 100000000});
    if (outcome.winner != Winner::duplicator) continue;
    for (int fi = 0; fi < 20; ++fi) {
      // exists v1 forall v2 (matrix)
      std::vector<std::string> vars{"v1", "v2"};
      FormulaPtr matrix = testing::random_matrix(rng, *vocab, vars, 2);
      FormulaPtr f = Formula::exists("v1", Formula::forall("v2", matrix));
      if (evaluate(a, *f)) {
        CHECK(evaluate(b, *f));
        ++transfers;
      }
    }
  }
  CHECK(transfers > 20);
}

TEST_CASE("spoiler separates the marked pair and certificates replay") {
  // Both elements marked on one side, a single unmarked element reachable on
  // the other: the universal pick on the unmarked element has no answer.
  Structure both = unary_structure({1, 2}, 2);
  Structure one = unary_structure({1}, 2);
  const GameConfig cfg{0, 1, 100000000};
  GameOutcome outcome = solve_prefix_game(both, one, cfg);
  CHECK(outcome.winner == Winner::spoiler);
  CHECK(outcome.positions > 0);
  CHECK(check_certificate(both, one, cfg, outcome));
  REQUIRE(outcome.certificate.sp_e.size() == 1);
  CHECK(outcome.certificate.sp_e[0] == std::vector<Element>{2});

  // Tampering with the certificate is caught on replay.
  GameOutcome forged = outcome;
  forged.certificate.sp_e[0] = {1};
  CHECK_FALSE(check_certificate(both, one, cfg, forged));

  // Isomorphic mark placements: the duplicator strategy is the swap map, and
  // bending either the reply or an answer breaks the replay.
  Structure low = unary_structure({1}, 2);
  Structure high = unary_structure({2}, 2);
  const GameConfig dup_cfg{1, 1, 100000000};
  GameOutcome dup = solve_prefix_game(low, high, dup_cfg);
  CHECK(dup.winner == Winner::duplicator);
  CHECK(check_certificate(low, high, dup_cfg, dup));
  REQUIRE(dup.certificate.dup_b.size() == 2);
  CHECK(dup.certificate.dup_b[0] == std::vector<Element>{2});

  GameOutcome bent = dup;
  bent.certificate.dup_f[0] = {1};
  CHECK_FALSE(check_certificate(low, high, dup_cfg, bent));
  GameOutcome rebased = dup;
  rebased.certificate.dup_b[0] = {1};
  CHECK_FALSE(check_certificate(low, high, dup_cfg, rebased));
}

TEST_CASE("block structures are game-indistinguishable as a family") {
  const Structure a = build_a({1, 1});
  const GameConfig cfg{1, 1, 100000000};
  const std::vector<Structure> weakenings{build_b({1, 1}, 0), build_b({1, 1}, 1)};

  // Any single weakening loses: Spoiler's witness next to the erased mark
  // forces a reply whose successor carries the wrong mark.
  for (const Structure& b : weakenings) {
    const GameOutcome fixed = solve_prefix_game(a, b, cfg);
    CHECK(fixed.winner == Winner::spoiler);
    CHECK(check_certificate(a, b, cfg, fixed));
  }

  // Duplicator wins once the reply may pick the weakening per witness tuple.
  const std::span<const Structure> family(weakenings);
  const GameOutcome outcome = solve_prefix_game(a, family, cfg);
  CHECK(outcome.winner == Winner::duplicator);
  CHECK(check_certificate(a, family, cfg, outcome));
  REQUIRE(outcome.certificate.dup_member.size() == 18);
  REQUIRE(outcome.certificate.dup_b.size() == 18);
  // Witness 4 sits beside block 0's mark, so only the block 1 weakening works.
  CHECK(outcome.certificate.dup_member[3] == 1);

  // Forged member column: witness 4's reply cannot survive in weakening 0.
  GameOutcome forged = outcome;
  forged.certificate.dup_member[3] = 0;
  CHECK_FALSE(check_certificate(a, family, cfg, forged));

  // One existential poke already exposes the missing mark at k = 0 scale.
  CHECK(solve_prefix_game(build_a({1, 0}), build_b({1, 0}, 0), {1, 1, 100000000}).winner ==
        Winner::spoiler);
  CHECK(solve_prefix_game(build_a({1, 0}), build_b({1, 0}, 0), {0, 1, 100000000}).winner ==
        Winner::duplicator);
}

TEST_CASE("game guards reject bad input and oversized spaces") {
  Structure p = unary_structure({1}, 2);
  Structure g(make_vocabulary({{"E", 2}}, {}), {1}, {{}}, {});
  CHECK_THROWS_AS(solve_prefix_game(p, g, {1, 1, 100000000}), Error);
  CHECK_THROWS_AS(solve_prefix_game(p, p, {-1, 0, 100000000}), Error);
  CHECK_THROWS_AS(solve_prefix_game(p, p, {0, -1, 100000000}), Error);

  bool budget_hit = false;
  try {
    solve_prefix_game(build_a({1, 1}), build_b({1, 1}, 0), {2, 2, 100000000});
  } catch (const Error& e) {
    budget_hit = true;
    CHECK(e.code() == Errc::budget_exceeded);
  }
  CHECK(budget_hit);
  CHECK_THROWS_AS(solve_prefix_game(p, p, {1, 1, 3}), Error);
}

TEST_CASE("oversized strategy tables are elided") {
  // One bare element against 1.2M: the lone answer handles every universal
  // pick, but the win table is too large to store.
  const int big = 1200000;
  std::vector<Element> universe(static_cast<std::size_t>(big));
  for (int i = 0; i < big; ++i) universe[static_cast<std::size_t>(i)] = i + 1;
  const VocabularyPtr empty_vocab = make_vocabulary({}, {});
  Structure a(empty_vocab, {1}, {}, {});
  Structure b(empty_vocab, std::move(universe), {}, {});

  const GameConfig cfg{0, 1, 100000000};
  const GameOutcome outcome = solve_prefix_game(a, b, cfg);
  CHECK(outcome.winner == Winner::duplicator);
  CHECK(outcome.certificate.elided);
  CHECK(outcome.certificate.dup_b.empty());
  CHECK_THROWS_AS(check_certificate(a, b, cfg, outcome), Error);
}

TEST_CASE("separation evidence bundles models, prefix, and games") {
  TransferReport r = transfer_separation_report({1, 1});
  CHECK(r.separation);
  CHECK(r.a_models_phi);
  CHECK(r.a_models_prenex);
  CHECK(r.b_models_phi == std::vector<bool>{false, false});
  CHECK(r.b_models_prenex == std::vector<bool>{false, false});
  CHECK(r.prefix_ok);
  CHECK(r.games_exhaustive);
  REQUIRE(r.games.size() == 1);
  CHECK(r.games[0].winner == Winner::duplicator);
  CHECK(r.games[0].certificate.dup_member.size() == 18);
  CHECK(r.games_certified == std::vector<bool>{true});

  // A larger universal budget overflows the game space; the counterexample
  // module's strategy grid takes over.
  TransferReport fallback = transfer_separation_report({2, 1});
  CHECK(fallback.separation);
  CHECK_FALSE(fallback.games_exhaustive);
  CHECK(fallback.games.empty());
  CHECK(fallback.strategy_ok);
  CHECK(fallback.strategy_pairs == 34ull * 34 * 34);
}
