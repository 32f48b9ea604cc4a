#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmtwb/formula.hpp"
#include "fmtwb/structure.hpp"

namespace fmtwb {

// Parameters of the order-theoretic counterexample family.  The universe
// 1..(8n+1)(k+1) splits into k+1 blocks of 8n+1 consecutive elements; block
// i carries one marked element at offset 4n+1.
struct CxParams {
  int n = 1;  // >= 1, universal rounds / segment capacity
  int k = 0;  // >= 0, number of marked elements to remove candidates from

  friend bool operator==(const CxParams&, const CxParams&) = default;
};

void validate(const CxParams& p);
int block_size(const CxParams& p);     // 8n+1
int universe_size(const CxParams& p);  // (8n+1)(k+1)
// First element of block i is block_base + 1.
int block_base(const CxParams& p, int block);
// The marked (P) element of a block: offset 4n+1.
Element marked_element(const CxParams& p, int block);
// Block containing element e (0-based).
int block_of(const CxParams& p, Element e);

// tau = { leq/2, S/2, P/1 ; c, d }.
const VocabularyPtr& tau();

// Components of the separating sentence:
//   xi1  linear order axioms for leq                     (forall^3)
//   xi2  c is minimum, d is maximum                      (forall)
//   xi3  S is contained in the successor relation        (forall^3 prenexed)
//   xi4  every element but d has an S-successor          (forall exists)
//   xi5  at most k elements satisfy P                    (forall^{k+1})
// Only xi5 depends on k.
FormulaPtr xi(int index, int k);

// phi_k = (xi1 & xi2 & xi3) & !(xi4 & xi5): satisfied by linearly ordered
// structures that violate xi4 or carry more than k marked elements.
FormulaPtr phi(int k);

// Hand-shared prenex equivalent of phi(k) with prefix exists^{k+1} forall^3.
FormulaPtr phi_prenex(int k);

// The ordered structure with k+1 marked elements, and its weakenings: b
// drops the marked element of block istar (0 <= istar <= k).
Structure build_a(const CxParams& p);
Structure build_b(const CxParams& p, int istar);

// Smallest block index containing no witness element; witnesses must number
// at most k, so a free block exists by pigeonhole.
int choose_istar(const CxParams& p, std::span<const Element> witnesses);

// Closed interval of consecutive elements.
struct Segment {
  Element lo = 0;
  Element hi = 0;
  int length() const { return hi - lo + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// Decomposition of a universal tuple into maximal consecutive runs, split by
// position relative to block istar, with the relocation images and the final
// element response.
//
// cs1 segments (touching anything outside block istar) are answered
// identically.  cs2 segments lie wholly inside the block; those adjacent to
// the block boundary (offset <= 2 or >= 8n) are pinned in place, the rest
// relocate in order to cs3: images start at offset
//   sigma = max(n+1, 3, q+2)
// where q is the largest offset of an identically answered in-block element
// left of the marked element, consecutive images are separated by exactly
// one element, and the last image stays at offset <= 3n+1, strictly below
// the marked offset 4n+1.
struct SegmentPlan {
  int istar = 0;
  std::vector<Segment> cs;          // all runs, ascending
  std::vector<Segment> cs1;         // runs touching the outside of block istar
  std::vector<Segment> cs2;         // runs wholly inside block istar
  std::vector<Segment> cs2_pinned;  // cs2 runs answered identically
  std::vector<Segment> cs3;         // images of the relocated cs2 runs
  std::vector<std::pair<Element, Element>> response;  // e -> f, ascending by e
};

// Plans the response for one universal tuple (|e_tuple| = n, elements within
// the universe).  Throws WrongArity / NotASubset on malformed tuples.
SegmentPlan segment_plan(const CxParams& p, int istar, std::span<const Element> e_tuple);

// Calibration checks for a plan; returns the names of violated invariants
// (empty for a sound plan):
//   relocation-bound   last image element <= (8n+1)*istar + 3n+1
//   marked-avoidance   no image touches the marked element
//   poke-separation    cs1 pokes into the block stay below the image zone
//   image-spacing      consecutive images separated by exactly one element
//   response-shape     identity outside relocations, order/injectivity kept
std::vector<std::string> plan_violations(const CxParams& p, const SegmentPlan& plan);

struct DuplicatorResponse {
  int istar = 0;
  std::vector<Element> f_tuple;
  SegmentPlan plan;
};

// The full answering strategy: pick istar from the witnesses, plan the
// segments, and read off f.  The induced map
//   {(1,1), (max,max)} u {(a_j, a_j)} u {(e_l, f_l)}
// is a partial isomorphism from build_b(p, istar) to build_a(p).
DuplicatorResponse duplicator_response(const CxParams& p,
                                       std::span<const Element> witnesses,
                                       std::span<const Element> e_tuple);

// Assembles that map (constants are added by make_partial_map).
PartialMap response_map(const Structure& b, const Structure& a,
                        std::span<const Element> witnesses, const DuplicatorResponse& r);

struct VerifyOptions {
  bool exhaustive = true;
  std::uint64_t sample_count = 10000;  // sampled mode only
  std::uint64_t seed = 0;
  std::uint64_t budget = 100000000;  // max witness/universal pairs in exhaustive mode
  int jobs = 1;                      // worker threads for the strategy grid
};

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::uint64_t checked = 0;
  std::string detail;
};

struct VerifyReport {
  CxParams params;
  bool exhaustive = true;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::uint64_t pairs_checked = 0;
  std::uint64_t strategy_failures = 0;
  std::uint64_t plan_violations = 0;
  std::optional<std::pair<std::vector<Element>, std::vector<Element>>> first_failure;
  // Identifier of the relocation-start policy in force (the literal n+1
  // start is refuted by brute force at n = 1; see segment_plan).
  std::string cs3_rule = "pinned-boundaries+start=max(n+1,3,q+2)";
  bool pass = false;
};

// Checks, over build_a(p) and every build_b(p, istar):
//   models        a satisfies phi(k), every b refutes it          (exhaustive)
//   prenex        phi_prenex(k) agrees with phi(k) on all of them (exhaustive)
//   strategy      duplicator_response yields a partial isomorphism for every
//                 witness tuple and universal tuple pair (all pairs in
//                 exhaustive mode, seeded draws in sampled mode)
//   calibration   every generated plan passes plan_violations
// Exhaustive mode throws BudgetExceeded when the pair grid exceeds the
// budget.  Sampled mode skips the model and prenex checks (they are
// exhaustive by nature) and marks them as skipped in the report.
VerifyReport verify_counterexample(const CxParams& p, const VerifyOptions& options);

}  // namespace fmtwb
