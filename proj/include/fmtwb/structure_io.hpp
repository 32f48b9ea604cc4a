#pragma once

#include <iosfwd>
#include <string>

#include "fmtwb/structure.hpp"

namespace fmtwb {

// Text format for structures whose universe is 1..N:
//
//   # comment
//   vocab leq/2 S/2 P/1 ; c d
//   universe 18
//   rel leq: (1,1) (1,2)
//   rel P: (5) (14)
//   const c = 1
//   const d = 18
//
// The vocab line lists relation symbols as name/arity, then the constant
// symbols after a ';' (omitted when there are none).  `universe N` declares
// elements 1..N.  rel and const lines may come in any order; a relation
// without a rel line has an empty table, but every constant must be defined.
// Whitespace between tokens is free, `#` starts a comment.
Structure read_structure(std::istream& in, std::string label = "");
Structure read_structure_file(const std::string& path);

// Inverse of read_structure.  The universe must be exactly 1..N; general
// substructures with gaps in their element identifiers are not expressible
// in this format and are rejected with PreconditionFailed.
std::string write_structure(const Structure& s);
void write_structure_file(const Structure& s, const std::string& path);

}  // namespace fmtwb
