#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmtwb/formula.hpp"
#include "fmtwb/structure.hpp"

namespace fmtwb {

// Optional membership filter for relativized checks; empty = all structures.
using StructurePredicate = std::function<bool(const Structure&)>;

struct CruxReport {
  std::string structure_label;
  int k = 0;
  std::vector<std::vector<Element>> cruxes;  // lexicographic order
  bool exhaustive = true;
};

struct PropertyVerdict {
  bool holds = true;
  std::string detail;
  // Counterexample data, present iff holds is false; which fields are filled
  // depends on the property (host alone, host + substructure, host + cover).
  std::optional<Structure> witness;
  std::optional<Structure> witness_substructure;
  std::vector<Structure> witness_cover;
};

// True iff |C| <= k and every induced substructure of s containing C (and
// accepted by `family`, when given) satisfies f.  Throws PreconditionFailed
// when s does not model f, NotASubset when C leaves the universe.
bool is_crux(const Structure& s, std::span<const Element> c, const FormulaPtr& f, int k,
             const StructurePredicate& family = {});

// All crux sets of size <= k in lexicographic order (empty set first).
CruxReport find_k_cruxes(const Structure& s, const FormulaPtr& f, int k,
                         const StructurePredicate& family = {});

// Every model of f in the family has all its induced substructures modeling
// f; counterexample = first violating (member, substructure) pair.
PropertyVerdict is_hereditary_over(const FormulaPtr& f, const std::vector<Structure>& family);

// Every model of f in the family has at least one k-crux.  The crux condition
// is relativized to family membership when the family is downward closed
// under one-element removal; otherwise candidates range over all structures.
PropertyVerdict is_k_hereditary_over(const FormulaPtr& f, const std::vector<Structure>& family,
                                     int k);

// Members must all be induced substructures of the host, and every subset of
// the host universe of size <= k must lie inside some member's universe.
// Throws EmptyCollection on an empty member list.
bool is_k_ary_cover(const Structure& host, const std::vector<Structure>& members, int k);

// Cover of `base` assembled inside an extension: members live anywhere in
// `ext`, but must jointly cover every <= k subset of base's universe.  Throws
// NotAnExtension unless ext extends base; reduces to is_k_ary_cover when
// ext = base.
bool is_k_ary_cover_in(const Structure& base, const Structure& ext,
                       const std::vector<Structure>& members, int k);

// For every host in the family: if the family members that are induced
// substructures of the host and satisfy f form a k-ary cover of the host,
// the host must satisfy f.  Counterexample = (host, that cover).  Testing
// the maximal candidate set suffices: covers grow monotonically.
PropertyVerdict is_k_extension_closed_over(const FormulaPtr& f,
                                           const std::vector<Structure>& family, int k);

// Lemma-style duality: f is k-hereditary over the family iff !f is
// k-extension closed over it.  holds = the two verdicts agree.
PropertyVerdict check_duality(const FormulaPtr& f, const std::vector<Structure>& family,
                              int k);

// True iff removing any single non-constant element from a member yields a
// structure that is again a member (content equality).
bool family_downward_closed(const std::vector<Structure>& family);

// { E/2 }, no constants.
const VocabularyPtr& graph_vocabulary();

// exists x1..xk forall y ((y = x1 | E(y,x1)) | ...); k = 0 degenerates to
// the unsatisfiable-over-nonempty forall y !(y = y).
FormulaPtr dominating_set_sentence(int k);

// Every labeled structure over `vocab` with universe 1..m for m <= max_size,
// in deterministic order: m ascending, then relation tables as ascending
// bitmask counters (first relation most significant), then constants.
// Throws SizeLimitExceeded when the family would exceed 10^6 structures.
std::vector<Structure> enumerate_family(const VocabularyPtr& vocab, int max_size);

}  // namespace fmtwb
