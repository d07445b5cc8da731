// Recursive-descent parser for .gpm programs.
//
// Terms and isos share one expression grammar; an identifier is classified by
// the scopes in play (clause pattern variables and let-binders are term
// variables; lambda/fix binders, earlier iso declarations and the ambient
// builtins are iso variables). On the left-hand side of a clause every bare
// identifier is a pattern variable, and the variables it binds are in scope
// on the right-hand side.
//
// Operator layering, loosest to tightest:
//   t :: t                (right-associative, terms)
//   w @@ t   |  w @@ w    (left-associative delayed application)
//   w << w                (left-associative composition sugar, "after")
//   juxtaposition         (left-associative application)
//   inl/inr/fold/next     (prefix, one operand)
// Types: @ binds tighter than *, which binds tighter than +; mu extends to
// the right. Function types: <-> binds its two type operands; -> is
// right-associative and looser; @ prefixes a function type.
#pragma once

#include <string>

#include "gpm/ast.hpp"

namespace gpm {

// Iso names always in scope (interpreted by the matrix backend only).
const std::vector<std::string>& builtin_iso_names();

Program parse_program(const std::string& src);

// Entry points for command-line arguments and tests.
TypePtr parse_type_string(const std::string& src);
FunPtr parse_funty_string(const std::string& src);

}  // namespace gpm
