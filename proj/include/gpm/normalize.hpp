// Stage-indexed normalization of function-level iso expressions. At stage n
// every lambda application is beta-reduced, every fix is unfolded exactly
// n+1 times with a zero placeholder innermost (guardedness makes the
// placeholder unreachable at depths <= n), and next/delayed application are
// pushed through each other. The top-level result at an A<->B type is first
// order: a clause family, a named reference, or a zero placeholder; isos
// sitting inside clause bodies stay unnormalized and are normalized by the
// denotation at their own use stage.
#pragma once

#include <map>
#include <set>
#include <string>

#include "gpm/ast.hpp"

namespace gpm {

// A named top-level iso declaration: its (resolved, desugared) body and its
// declared function type. Builtins appear with a null body.
struct IsoDecl {
  IsoPtr body;
  FunPtr type;
};
using IsoGlobals = std::map<std::string, IsoDecl>;

std::set<std::string> free_iso_vars(const IsoPtr& w);

// Capture-avoiding substitution of the iso variable x by v.
IsoPtr subst_iso(const IsoPtr& w, const std::string& x, const IsoPtr& v);

IsoPtr normalize_fun(const IsoPtr& w, int n, const IsoGlobals& globals);

// k-fold unfolding of a fix node with an explicit innermost placeholder:
// U_0 = placeholder, U_j = body[phi := next U_{j-1}], each step normalized
// at stage n. normalize_fun's fix rule is iterate_fix(w, n+1, zero, n).
IsoPtr iterate_fix(const IsoPtr& fix_node, int k, const IsoPtr& placeholder,
                   int n, const IsoGlobals& globals);

}  // namespace gpm
