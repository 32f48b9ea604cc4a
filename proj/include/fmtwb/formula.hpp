#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "fmtwb/vocabulary.hpp"

namespace fmtwb {

struct Term {
  enum class Kind { variable, constant };
  Kind kind = Kind::variable;
  std::string name;

  static Term var(std::string name) { return {Kind::variable, std::move(name)}; }
  static Term cons(std::string name) { return {Kind::constant, std::move(name)}; }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class Connective {
  atom,
  equals,
  logical_not,
  logical_and,
  logical_or,
  implies,
  exists,
  forall,
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable first-order formula.  Nodes are shared freely; builders are the
// only way to create them, so structural invariants (operand counts, term
// counts) hold by construction.
class Formula {
 public:
  Connective kind;
  std::string symbol;       // atom: relation name; quantifiers: bound variable
  std::vector<Term> terms;  // atom arguments, or the two equality operands
  FormulaPtr lhs;
  FormulaPtr rhs;           // null for negation and quantifiers

  static FormulaPtr atom(std::string relation, std::vector<Term> args);
  static FormulaPtr equals(Term a, Term b);
  static FormulaPtr negate(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr impl(FormulaPtr a, FormulaPtr b);
  static FormulaPtr exists(std::string var, FormulaPtr body);
  static FormulaPtr forall(std::string var, FormulaPtr body);

  // Right folds; the list must be non-empty.
  static FormulaPtr conj_all(std::vector<FormulaPtr> fs);
  static FormulaPtr disj_all(std::vector<FormulaPtr> fs);

 private:
  Formula() = default;
  friend FormulaPtr make_node(Connective, std::string, std::vector<Term>, FormulaPtr,
                              FormulaPtr);
};

bool structurally_equal(const Formula& a, const Formula& b);
inline bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  return structurally_equal(*a, *b);
}

std::set<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);

// Canonical concrete syntax; parse(render(f)) is structurally equal to f.
std::string render(const Formula& f);

}  // namespace fmtwb
