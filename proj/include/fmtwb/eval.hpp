#pragma once

#include <map>
#include <string>

#include "fmtwb/formula.hpp"
#include "fmtwb/structure.hpp"

namespace fmtwb {

// Values for the free variables of a formula.
using Assignment = std::map<std::string, Element>;

// Tarskian satisfaction: s |= f under `assignment`.  Quantifiers range over
// the universe in sorted order with short-circuit evaluation.  Errors:
// UnknownSymbol / ArityError when the formula does not fit the structure's
// vocabulary, UnboundVariable when a free variable has no value,
// NotASubset when an assigned value is outside the universe.
bool evaluate(const Structure& s, const Formula& f, const Assignment& assignment = {});

}  // namespace fmtwb
