#include <algorithm>
#include <vector>

#include "doctest.h"
#include "fmtwb/counterexample.hpp"
#include "fmtwb/errors.hpp"
#include "fmtwb/eval.hpp"
#include "fmtwb/report.hpp"
#include "fmtwb/structure.hpp"

using namespace fmtwb;

namespace {

std::vector<Element> marks(const Structure& s) {
  std::vector<Element> out;
  for (const Tuple& t : s.table(2)) out.push_back(t[0]);
  return out;
}

}  // namespace

TEST_CASE("block geometry") {
  CHECK_THROWS_AS(validate({0, 0}), Error);
  CHECK_THROWS_AS(validate({1, -1}), Error);

  CHECK(block_size({1, 1}) == 9);
  CHECK(universe_size({1, 1}) == 18);
  CHECK(universe_size({3, 3}) == 100);
  CHECK(block_base({2, 3}, 2) == 34);
  CHECK(marked_element({1, 1}, 0) == 5);
  CHECK(marked_element({1, 1}, 1) == 14);
  CHECK(marked_element({2, 3}, 2) == 43);
  CHECK(block_of({1, 1}, 9) == 0);
  CHECK(block_of({1, 1}, 10) == 1);
}

TEST_CASE("constructed structures carry the expected interpretation") {
  Structure a11 = build_a({1, 1});
  CHECK(a11.size() == 18);
  CHECK(marks(a11) == std::vector<Element>{5, 14});
  CHECK(a11.constant_value(0) == 1);
  CHECK(a11.constant_value(1) == 18);
  CHECK(a11.has_tuple(1, std::vector<Element>{9, 10}));
  CHECK(a11.table(0).size() == 18 * 19 / 2);

  CHECK(marks(build_a({1, 0})) == std::vector<Element>{5});
  CHECK(marks(build_a({2, 3})) == std::vector<Element>{9, 26, 43, 60});
  CHECK(build_a({2, 3}).size() == 68);

  CHECK(marks(build_b({1, 1}, 0)) == std::vector<Element>{14});
  CHECK(marks(build_b({1, 1}, 1)) == std::vector<Element>{5});
  CHECK(build_b({1, 1}, 0).size() == 18);
  CHECK(is_extension(build_b({1, 1}, 0), build_a({1, 1})) == false);
  CHECK_THROWS_AS(build_b({1, 1}, 2), Error);
}

TEST_CASE("model and non-model facts at the smallest sizes") {
  CHECK(evaluate(build_a({1, 1}), *phi(1)));
  CHECK_FALSE(evaluate(build_b({1, 1}, 0), *phi(1)));
  CHECK_FALSE(evaluate(build_b({1, 1}, 1), *phi(1)));
  CHECK_FALSE(evaluate(build_a({1, 1}), *xi(5, 1)));
  CHECK(evaluate(build_b({1, 1}, 0), *xi(5, 1)));

  // One point, both constants on it, no marks: the escape clause is vacuous
  // and the witness bound holds, so the sentence fails.
  Structure point(tau(), {1}, {{{1, 1}}, {}, {}}, {1, 1});
  CHECK_FALSE(evaluate(point, *phi(0)));
  CHECK(evaluate(point, *xi(1, 0)));
  CHECK(evaluate(point, *xi(4, 0)));

  CHECK_THROWS_AS(xi(0, 0), Error);
  CHECK_THROWS_AS(xi(6, 0), Error);
  CHECK_THROWS_AS(xi(1, -1), Error);
}

TEST_CASE("the untouched block is chosen lowest first") {
  CHECK(choose_istar({1, 1}, std::vector<Element>{14}) == 0);
  CHECK(choose_istar({1, 1}, std::vector<Element>{3}) == 1);
  CHECK(choose_istar({1, 2}, std::vector<Element>{3, 14}) == 2);
  CHECK(choose_istar({1, 0}, std::vector<Element>{}) == 0);
  CHECK_THROWS_AS(choose_istar({1, 1}, std::vector<Element>{3, 14}), Error);
  CHECK_THROWS_AS(choose_istar({1, 1}, std::vector<Element>{99}), Error);
}

TEST_CASE("segment plans relocate interior runs past the poke zone") {
  // Interior single element: image starts at offset max(n+1, 3, q+2).
  SegmentPlan p1 = segment_plan({1, 1}, 0, std::vector<Element>{4});
  CHECK(p1.cs == std::vector<Segment>{{4, 4}});
  CHECK(p1.cs2 == std::vector<Segment>{{4, 4}});
  CHECK(p1.cs2_pinned.empty());
  CHECK(p1.cs3 == std::vector<Segment>{{3, 3}});
  CHECK(p1.response == std::vector<std::pair<Element, Element>>{{4, 3}});
  CHECK(plan_violations({1, 1}, p1).empty());

  SegmentPlan p2 = segment_plan({2, 1}, 0, std::vector<Element>{4, 5});
  CHECK(p2.cs3 == std::vector<Segment>{{3, 4}});
  CHECK(p2.response ==
        std::vector<std::pair<Element, Element>>{{4, 3}, {5, 4}});

  // Runs outside the block are answered identically.
  SegmentPlan p3 = segment_plan({2, 1}, 0, std::vector<Element>{20, 33});
  CHECK(p3.cs1 == std::vector<Segment>{{20, 20}, {33, 33}});
  CHECK(p3.cs3.empty());
  CHECK(p3.response ==
        std::vector<std::pair<Element, Element>>{{20, 20}, {33, 33}});

  // Boundary-adjacent runs are pinned, interior ones still move.
  CHECK(segment_plan({1, 2}, 1, std::vector<Element>{10}).response ==
        std::vector<std::pair<Element, Element>>{{10, 10}});
  CHECK(segment_plan({1, 2}, 1, std::vector<Element>{14}).response ==
        std::vector<std::pair<Element, Element>>{{14, 12}});
  CHECK(segment_plan({1, 1}, 1, std::vector<Element>{17}).response ==
        std::vector<std::pair<Element, Element>>{{17, 17}});
  CHECK(segment_plan({1, 1}, 1, std::vector<Element>{16}).response ==
        std::vector<std::pair<Element, Element>>{{16, 12}});

  // A pinned left run raises the relocation start past it.
  SegmentPlan p4 = segment_plan({2, 1}, 0, std::vector<Element>{2, 5});
  CHECK(p4.cs2_pinned == std::vector<Segment>{{2, 2}});
  CHECK(p4.response == std::vector<std::pair<Element, Element>>{{2, 2}, {5, 4}});
  SegmentPlan p5 = segment_plan({3, 1}, 0, std::vector<Element>{2, 3, 9});
  CHECK(p5.cs2_pinned == std::vector<Segment>{{2, 3}});
  CHECK(p5.response ==
        std::vector<std::pair<Element, Element>>{{2, 2}, {3, 3}, {9, 5}});

  // Offsets 2 and 8n pin in the one-block case as well.
  CHECK(segment_plan({1, 0}, 0, std::vector<Element>{2}).response ==
        std::vector<std::pair<Element, Element>>{{2, 2}});
  CHECK(segment_plan({1, 0}, 0, std::vector<Element>{8}).response ==
        std::vector<std::pair<Element, Element>>{{8, 8}});
  CHECK(segment_plan({1, 0}, 0, std::vector<Element>{5}).response ==
        std::vector<std::pair<Element, Element>>{{5, 3}});

  // Order inside the tuple is irrelevant and duplicates collapse.
  CHECK(segment_plan({2, 1}, 0, std::vector<Element>{5, 4}).cs ==
        std::vector<Segment>{{4, 5}});
  CHECK(segment_plan({2, 1}, 0, std::vector<Element>{4, 4}).cs ==
        std::vector<Segment>{{4, 4}});

  CHECK_THROWS_AS(segment_plan({1, 1}, 0, std::vector<Element>{0}), Error);
  CHECK_THROWS_AS(segment_plan({1, 1}, 0, std::vector<Element>{19}), Error);
  CHECK_THROWS_AS(segment_plan({1, 1}, 2, std::vector<Element>{4}), Error);
  CHECK_THROWS_AS(segment_plan({2, 1}, 0, std::vector<Element>{4}), Error);
}

TEST_CASE("calibration checker flags corrupted plans by name") {
  // Image shoved onto the marked element, past the relocation bound.
  SegmentPlan bad = segment_plan({1, 2}, 1, std::vector<Element>{14});
  bad.cs3 = {{14, 14}};
  bad.response = {{14, 14}};
  CHECK(plan_violations({1, 2}, bad) ==
        std::vector<std::string>{"marked-avoidance", "relocation-bound"});

  // Images may not sink into the first poke offsets.
  SegmentPlan low = segment_plan({2, 1}, 0, std::vector<Element>{4, 5});
  low.cs3 = {{2, 3}};
  low.response = {{4, 2}, {5, 3}};
  CHECK(plan_violations({2, 1}, low) == std::vector<std::string>{"image-spacing"});

  // Responses must stay strictly increasing on both sides.
  SegmentPlan twisted = segment_plan({2, 1}, 0, std::vector<Element>{4, 5});
  twisted.response = {{4, 4}, {5, 3}};
  CHECK(plan_violations({2, 1}, twisted) ==
        std::vector<std::string>{"response-shape"});

  // Dropping an image breaks the structural split.
  SegmentPlan split = segment_plan({2, 1}, 0, std::vector<Element>{4, 5});
  split.cs3.clear();
  CHECK(plan_violations({2, 1}, split) == std::vector<std::string>{"segment-split"});
}

TEST_CASE("the answering map is a partial isomorphism, the naive one is not") {
  const CxParams p{1, 1};
  const Structure a = build_a(p);
  const Structure b0 = build_b(p, 0);

  const std::vector<Element> witnesses{14};
  DuplicatorResponse r = duplicator_response(p, witnesses, std::vector<Element>{4});
  CHECK(r.istar == 0);
  CHECK(r.f_tuple == std::vector<Element>{3});
  CHECK(is_partial_isomorphism(response_map(b0, a, witnesses, r)));

  // The literal one-past-the-pokes start (offset n+1 = 2) is refuted: 2 is a
  // successor of the constant in the host but 4 is not one in the weakening.
  CHECK_FALSE(is_partial_isomorphism(make_partial_map(b0, a, {{14, 14}, {4, 2}})));

  // Repeated universal elements answer consistently.
  DuplicatorResponse rep =
      duplicator_response({2, 1}, std::vector<Element>{20}, std::vector<Element>{4, 4});
  CHECK(rep.istar == 0);
  CHECK(rep.f_tuple == std::vector<Element>{3, 3});
}

TEST_CASE("exhaustive verification at the smallest sizes") {
  VerifyOptions options;
  VerifyReport r10 = verify_counterexample({1, 0}, options);
  CHECK(r10.pass);
  CHECK(r10.exhaustive);
  CHECK(r10.pairs_checked == 9);
  CHECK(r10.strategy_failures == 0);
  CHECK(r10.plan_violations == 0);
  CHECK_FALSE(r10.first_failure.has_value());
  REQUIRE(r10.checks.size() == 4);
  CHECK(r10.checks[0].name == "models");
  CHECK(r10.checks[1].name == "prenex-agreement");
  CHECK(r10.checks[2].name == "strategy");
  CHECK(r10.checks[3].name == "calibration");
  for (const CheckResult& c : r10.checks) {
    CHECK(c.pass);
    CHECK_FALSE(c.skipped);
  }

  VerifyReport r11 = verify_counterexample({1, 1}, options);
  CHECK(r11.pass);
  CHECK(r11.pairs_checked == 18 * 18);

  options.jobs = 3;
  VerifyReport parallel = verify_counterexample({1, 1}, options);
  CHECK(to_record(parallel).serialize() == to_record(r11).serialize());

  options.jobs = 1;
  options.budget = 10;
  CHECK_THROWS_AS(verify_counterexample({1, 1}, options), Error);
}

TEST_CASE("sampled verification is seeded and skips the exhaustive checks") {
  VerifyOptions options;
  options.exhaustive = false;
  options.sample_count = 50;
  options.seed = 7;
  VerifyReport r = verify_counterexample({1, 1}, options);
  CHECK(r.pass);
  CHECK_FALSE(r.exhaustive);
  CHECK(r.checks[0].skipped);
  CHECK(r.checks[1].skipped);
  CHECK_FALSE(r.checks[2].skipped);
  CHECK(r.checks[2].checked == 50);
  CHECK(r.pairs_checked == 50);

  VerifyReport again = verify_counterexample({1, 1}, options);
  CHECK(to_record(again).serialize() == to_record(r).serialize());

  options.seed = 8;
  VerifyReport other = verify_counterexample({1, 1}, options);
  CHECK(other.pass);
}
