#pragma once

#include <string>

#include "fmtwb/formula.hpp"
#include "fmtwb/vocabulary.hpp"

namespace fmtwb {

// Concrete syntax:
//   formula := implies
//   implies := or ('->' implies)?              right associative
//   or      := and ('|' and)*                  folded to the right
//   and     := unary ('&' unary)*              folded to the right
//   unary   := '!' unary | ('forall'|'exists') IDENT '.' formula | primary
//   primary := '(' formula ')' | IDENT '(' term {',' term} ')' | term '=' term
// Quantifier bodies extend maximally to the right.  Identifiers are
// [A-Za-z_][A-Za-z0-9_]*; an identifier in term position names a declared
// constant if the vocabulary has one, otherwise a variable.
//
// Errors: SyntaxError (with byte position), UnknownSymbol for atoms whose
// relation is not declared, ArityError on argument count mismatches.
FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab);

// Same grammar, but the vocabulary is inferred: every atom declares its
// relation at first use (later uses must agree on arity) and every term is a
// variable.  Useful for formula-only queries such as family checks.
struct InferredParse {
  FormulaPtr formula;
  Vocabulary vocab;
};
InferredParse parse_formula_inferring(const std::string& text);

}  // namespace fmtwb
