// Sugar expansion and name resolution.
//
// desugar_* : removes all surface sugar —
//   []      becomes  fold (inl ())
//   h :: t  becomes  fold (inr (h, t))      (tail kept verbatim, already delayed)
//   '0, '1  become   inl (), inr ()
//   f << g  becomes  { x <-> f (g x) }
// Desugaring is idempotent.
//
// resolve_program : inlines type aliases into every annotation and term
// declarations into term bodies. Iso declarations are NOT inlined: they stay
// as named references that the semantics layer resolves through its global
// environment, so a declared clause family keeps its declared type when its
// uses are normalized. Run after typechecking; semantics and evaluation
// assume resolved input.
#pragma once

#include "gpm/ast.hpp"

namespace gpm {

TermPtr desugar_term(const TermPtr& t);
IsoPtr desugar_iso(const IsoPtr& w);
Program desugar_program(const Program& p);

Program resolve_program(const Program& p);

}  // namespace gpm
