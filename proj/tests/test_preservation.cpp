#include <algorithm>
#include <vector>

#include "doctest.h"
#include "fmtwb/counterexample.hpp"
#include "fmtwb/errors.hpp"
#include "fmtwb/eval.hpp"
#include "fmtwb/parser.hpp"
#include "fmtwb/preservation.hpp"
#include "fmtwb/rng.hpp"
#include "support.hpp"

using namespace fmtwb;

namespace {

VocabularyPtr unary() { return make_vocabulary({{"P", 1}}, {}); }

FormulaPtr some_p() { return parse_formula("exists x. P(x)", *unary()); }
FormulaPtr all_p() { return parse_formula("forall x. P(x)", *unary()); }

// Spokes pointing at the hub: 1 dominates every other vertex.
Structure star4() {
  return Structure(graph_vocabulary(), {1, 2, 3, 4},
                   {{{2, 1}, {3, 1}, {4, 1}}}, {});
}

}  // namespace

TEST_CASE("crux detection on the star graph") {
  Structure s = star4();
  FormulaPtr f = dominating_set_sentence(1);
  REQUIRE(evaluate(s, *f));

  CHECK(is_crux(s, std::vector<Element>{1}, f, 1));
  CHECK_FALSE(is_crux(s, std::vector<Element>{2}, f, 1));
  CHECK_FALSE(is_crux(s, std::vector<Element>{}, f, 1));
  CHECK_FALSE(is_crux(s, std::vector<Element>{1, 2}, f, 1));  // size bound
  CHECK(is_crux(s, std::vector<Element>{1, 2}, f, 2));

  CruxReport report = find_k_cruxes(s, f, 1);
  CHECK(report.k == 1);
  CHECK(report.cruxes == std::vector<std::vector<Element>>{{1}});
  CHECK(report.exhaustive);

  // Tautologies have the empty crux; reports list it first.
  auto taut = parse_formula_inferring("forall x. x = x");
  Structure plain(std::make_shared<const Vocabulary>(taut.vocab), {1, 2}, {}, {});
  CruxReport every = find_k_cruxes(plain, taut.formula, 1);
  REQUIRE(!every.cruxes.empty());
  CHECK(every.cruxes.front().empty());
  CHECK(every.cruxes.size() == 3);  // {}, {1}, {2} by monotonicity

  CHECK_THROWS_AS(is_crux(s, std::vector<Element>{9}, f, 1), Error);
  // The structure must model the sentence before crux checks make sense.
  CHECK_THROWS_AS(is_crux(s, std::vector<Element>{1}, dominating_set_sentence(0), 0),
                  Error);
}

TEST_CASE("crux sets are monotone upward") {
  Rng rng(41);
  FormulaPtr f = some_p();
  for (int trial = 0; trial < 30; ++trial) {
    Structure s = testing::random_structure(rng, unary(), 4);
    if (!evaluate(s, *f)) continue;
    CruxReport report = find_k_cruxes(s, f, 2);
    for (const auto& c : report.cruxes) {
      if (c.size() != 1) continue;
      for (Element extra : s.universe()) {
        std::vector<Element> bigger = c;
        if (extra == c[0]) continue;
        bigger.push_back(extra);
        CHECK(is_crux(s, bigger, f, 2));
      }
    }
  }
}

TEST_CASE("exhaustive families are deterministic and bounded") {
  auto family = enumerate_family(unary(), 3);
  CHECK(family.size() == 14);
  CHECK(enumerate_family(unary(), 4).size() == 30);
  CHECK(enumerate_family(graph_vocabulary(), 3).size() == 530);

  CHECK(family.front().size() == 1);
  CHECK(family.front().table(0).empty());
  CHECK(family.back().size() == 3);
  CHECK(family.back().table(0).size() == 3);
  for (std::size_t i = 1; i < family.size(); ++i)
    CHECK_FALSE(family[i] == family[i - 1]);

  auto with_constant = enumerate_family(make_vocabulary({{"P", 1}}, {"c"}), 2);
  CHECK(with_constant.size() == 10);
  CHECK(with_constant.front().constant_value(0) == 1);

  CHECK_THROWS_AS(enumerate_family(graph_vocabulary(), 5), Error);
}

TEST_CASE("hereditary checks find violating substructures") {
  PropertyVerdict ok = is_hereditary_over(all_p(), enumerate_family(unary(), 3));
  CHECK(ok.holds);
  CHECK_FALSE(ok.witness.has_value());

  PropertyVerdict bad = is_hereditary_over(some_p(), enumerate_family(unary(), 2));
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness.has_value());
  REQUIRE(bad.witness_substructure.has_value());
  CHECK(evaluate(*bad.witness, *some_p()));
  CHECK_FALSE(evaluate(*bad.witness_substructure, *some_p()));
  CHECK(is_extension(*bad.witness_substructure, *bad.witness));

  // The block sentence is hereditary over its own substructure lattice.
  PropertyVerdict block = is_hereditary_over(phi(0), {build_a({1, 0})});
  CHECK(block.holds);
}

TEST_CASE("k-hereditariness separates k = 0 from k = 1") {
  auto family = enumerate_family(unary(), 3);
  CHECK(is_k_hereditary_over(some_p(), family, 1).holds);
  PropertyVerdict zero = is_k_hereditary_over(some_p(), family, 0);
  CHECK_FALSE(zero.holds);
  REQUIRE(zero.witness.has_value());
  CHECK(zero.detail == "model without a 0-crux");

  // Plain hereditariness gives k-hereditariness for every k.
  CHECK(is_k_hereditary_over(all_p(), family, 0).holds);
  CHECK(is_k_hereditary_over(all_p(), family, 1).holds);
}

TEST_CASE("covers quantify over small subsets") {
  Structure s = star4();
  std::vector<Structure> spokes;
  for (Element v : {2, 3, 4})
    spokes.push_back(induced_substructure(s, std::vector<Element>{1, v}));

  CHECK(is_k_ary_cover(s, spokes, 0));
  CHECK(is_k_ary_cover(s, spokes, 1));
  CHECK_FALSE(is_k_ary_cover(s, spokes, 2));

  std::vector<Structure> pairs;
  for (Element u : {1, 2, 3, 4})
    for (Element v : {1, 2, 3, 4})
      if (u < v) pairs.push_back(induced_substructure(s, std::vector<Element>{u, v}));
  CHECK(is_k_ary_cover(s, pairs, 2));
  CHECK_FALSE(is_k_ary_cover(s, pairs, 3));

  CHECK_THROWS_AS(is_k_ary_cover(s, {}, 1), Error);
  // Members must be induced substructures of the host.
  Structure stray(graph_vocabulary(), {1, 2}, {{{1, 2}}}, {});
  CHECK_FALSE(is_k_ary_cover(s, {stray}, 1));

  // The in-extension form reduces to the plain one when ext = base.
  CHECK(is_k_ary_cover_in(s, s, spokes, 1) == is_k_ary_cover(s, spokes, 1));
  CHECK(is_k_ary_cover_in(s, s, pairs, 2) == is_k_ary_cover(s, pairs, 2));
  Structure hub = induced_substructure(s, std::vector<Element>{1, 2});
  CHECK(is_k_ary_cover_in(hub, s, spokes, 1));
  CHECK_THROWS_AS(is_k_ary_cover_in(s, hub, spokes, 1), Error);
}

TEST_CASE("extension closure and the duality with k-hereditariness") {
  auto family = enumerate_family(unary(), 3);
  FormulaPtr no_p = Formula::negate(some_p());

  CHECK(is_k_extension_closed_over(no_p, family, 1).holds);
  PropertyVerdict closed_zero = is_k_extension_closed_over(no_p, family, 0);
  CHECK_FALSE(closed_zero.holds);
  REQUIRE(closed_zero.witness.has_value());
  CHECK_FALSE(closed_zero.witness_cover.empty());
  for (const Structure& member : closed_zero.witness_cover) {
    CHECK(evaluate(member, *no_p));
    CHECK(is_extension(member, *closed_zero.witness));
  }

  for (int k = 0; k <= 2; ++k) {
    CHECK(check_duality(some_p(), family, k).holds);
    CHECK(check_duality(all_p(), family, k).holds);
  }

  auto graphs = enumerate_family(graph_vocabulary(), 2);
  CHECK(check_duality(dominating_set_sentence(1), graphs, 1).holds);
}

TEST_CASE("downward closure detection") {
  CHECK_FALSE(family_downward_closed(enumerate_family(unary(), 2)));
  CHECK(family_downward_closed(enumerate_substructures(build_a({1, 0}))));

  // A lattice with its bottom removed is no longer closed.  The bottom is
  // the constants-only substructure, the unique member of size 2.
  auto lattice = enumerate_substructures(build_a({1, 0}));
  std::erase_if(lattice, [](const Structure& s) { return s.size() == 2; });
  CHECK_FALSE(family_downward_closed(lattice));
}

TEST_CASE("dominating set sentences") {
  CHECK(evaluate(Structure(graph_vocabulary(), {1, 2}, {{}}, {}),
                 *dominating_set_sentence(2)));
  CHECK_FALSE(evaluate(Structure(graph_vocabulary(), {1, 2}, {{}}, {}),
                       *dominating_set_sentence(1)));
  CHECK_FALSE(evaluate(star4(), *dominating_set_sentence(0)));
  CHECK_THROWS_AS(dominating_set_sentence(-1), Error);

  // Every witness tuple of the sentence is a crux set.
  Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    Structure g = testing::graph_from_mask(graph_vocabulary(), 4, rng.below(64));
    FormulaPtr f = dominating_set_sentence(2);
    if (!evaluate(g, *f)) continue;
    const Formula* body = f.get();
    for (int i = 0; i < 2; ++i) body = body->lhs.get();
    for (Element x1 : g.universe())
      for (Element x2 : g.universe()) {
        if (!evaluate(g, *body, {{"x1", x1}, {"x2", x2}})) continue;
        std::vector<Element> set{x1, x2};
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        CHECK(is_crux(g, set, f, 2));
      }
  }
}

TEST_CASE("crux verdicts match direct substructure sweeps") {
  Rng rng(47);
  FormulaPtr f = some_p();
  int models_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Structure s = testing::random_structure(rng, unary(), 4);
    if (!evaluate(s, *f)) continue;
    ++models_seen;
    CruxReport report = find_k_cruxes(s, f, 1);
    for (Element e : s.universe()) {
      const bool claimed = std::find(report.cruxes.begin(), report.cruxes.end(),
                                     std::vector<Element>{e}) != report.cruxes.end();
      bool direct = true;
      for_each_substructure(s, [&](const Structure& sub) {
        if (sub.contains(e) && !evaluate(sub, *f)) direct = false;
        return direct;
      });
      CHECK(claimed == direct);
    }
  }
  CHECK(models_seen > 5);
}
