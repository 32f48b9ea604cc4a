#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fmtwb/vocabulary.hpp"

namespace fmtwb {

using Element = int;
using Tuple = std::vector<Element>;

// Finite relational structure.  Universe is a non-empty sorted list of
// distinct integer identifiers, every relation table is a sorted
// duplicate-free tuple list over the universe, and every constant symbol is
// interpreted.  Value type: copies are independent and all operations on it
// are pure.
class Structure {
 public:
  Structure(VocabularyPtr vocab, std::vector<Element> universe,
            std::vector<std::vector<Tuple>> tables, std::vector<Element> constants,
            std::string label = "");

  const Vocabulary& vocab() const { return *vocab_; }
  const VocabularyPtr& vocab_ptr() const { return vocab_; }
  const std::vector<Element>& universe() const { return universe_; }
  int size() const { return static_cast<int>(universe_.size()); }
  bool contains(Element e) const;

  const std::vector<Tuple>& table(int relation) const { return tables_[relation]; }
  const std::vector<std::vector<Tuple>>& tables() const { return tables_; }
  Element constant_value(int index) const { return constants_[index]; }
  const std::vector<Element>& constant_values() const { return constants_; }

  bool has_tuple(int relation, std::span<const Element> tuple) const;

  // Labels are presentation metadata; they do not participate in equality.
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  // Semantic identity: same vocabulary, universe, tables and constants.
  friend bool operator==(const Structure& a, const Structure& b);

  // Hash of the semantic identity, for memoized satisfaction checks.
  std::uint64_t content_hash() const;

 private:
  VocabularyPtr vocab_;
  std::vector<Element> universe_;
  std::vector<std::vector<Tuple>> tables_;
  std::vector<Element> constants_;
  // Packed-key membership sets for relations of arity <= 2; lookups on wider
  // relations fall back to binary search over the sorted table.
  std::vector<std::unordered_set<std::uint64_t>> packed_;
  std::string label_;
};

// Restriction of `s` to `subset`.  Throws NotASubset if subset has elements
// outside the universe, MissingConstant if a constant interpretation is
// dropped, PreconditionFailed on an empty subset.
Structure induced_substructure(const Structure& s, std::span<const Element> subset);

// Visits every induced substructure whose universe contains all constant
// interpretations, in lexicographic order of the sorted universe lists,
// optionally bounded by universe size.  The visitor returns false to stop
// early; the function returns false iff it was stopped.
bool for_each_substructure(const Structure& s,
                           const std::function<bool(const Structure&)>& visit,
                           std::optional<int> size_bound = std::nullopt);

std::vector<Structure> enumerate_substructures(const Structure& s,
                                               std::optional<int> size_bound = std::nullopt);

// True iff `ext` extends `base`: universe(base) is a subset of universe(ext),
// the constants agree, and each table of `base` is the restriction of the
// corresponding table of `ext`.  Throws VocabularyMismatch if the two
// structures disagree on the vocabulary.
bool is_extension(const Structure& base, const Structure& ext);

// Same predicate, viewed from the substructure side.
inline bool is_induced_substructure(const Structure& sub, const Structure& host) {
  return is_extension(sub, host);
}

// Finite map between universes of two structures over a shared vocabulary.
// Non-owning view; pairs keep construction order.  Well-formedness is not an
// invariant: malformed maps simply fail is_partial_isomorphism.
struct PartialMap {
  const Structure* source = nullptr;
  const Structure* target = nullptr;
  std::vector<std::pair<Element, Element>> pairs;
};

// Sorts by source, drops exact duplicates, and appends the constant pairs
// (c^source, c^target), which every constructed map must carry.
PartialMap make_partial_map(const Structure& source, const Structure& target,
                            std::vector<std::pair<Element, Element>> pairs);

// True iff m extended with all constant pairs is functional, injective, lies
// within the two universes, and preserves every atomic relation in both
// directions over its domain.  Never throws; malformed input is false.
bool is_partial_isomorphism(const PartialMap& m);

// Backtracking search for an isomorphism, deterministic: elements of `a` in
// sorted order, candidates in sorted order, first hit returned as a pair list
// sorted by source.  Absent when sizes differ or no isomorphism exists.
// Throws SizeLimitExceeded when |universe(a)| > size_limit.
std::optional<std::vector<std::pair<Element, Element>>> find_isomorphism(
    const Structure& a, const Structure& b, int size_limit = 12);

}  // namespace fmtwb
