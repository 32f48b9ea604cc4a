#pragma once

#include <string>
#include <vector>

#include "fmtwb/formula.hpp"

namespace fmtwb {

enum class Quantifier { exists, forall };

// Prefix shape of a prenex sentence: maximal blocks of like quantifiers, in
// order, plus whether everything after the prefix is quantifier free.
struct PrefixClass {
  std::vector<std::pair<Quantifier, int>> blocks;
  bool matrix_quantifier_free = true;

  bool quantifier_free() const { return blocks.empty(); }
  friend bool operator==(const PrefixClass&, const PrefixClass&) = default;
};

// Equivalent prenex form.  Bound variables are first renamed apart (existing
// names are kept when unambiguous), then quantifiers are hoisted
// left-to-right, outermost-first; negation flips hoisted quantifiers, and an
// implication whose operands still contain quantifiers is replaced by
// !lhs | rhs before hoisting.  Quantifier-free subtrees are left untouched,
// so the function is the identity on already-rectified prenex formulas.
FormulaPtr to_prenex(const FormulaPtr& f);

// Prefix classification of a sentence (throws NotASentence on free
// variables).  Non-prenex input is classified by its maximal leading prefix,
// with matrix_quantifier_free reporting whether the remainder is free of
// quantifiers.
PrefixClass classify_prefix(const Formula& f);

// True iff the class is exactly k leading existentials followed by nothing
// but universals (possibly none): the EkForallStar shape.
bool is_exists_k_forall_star(const PrefixClass& c, int k);

std::string prefix_class_to_string(const PrefixClass& c);

}  // namespace fmtwb
