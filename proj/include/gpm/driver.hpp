// One-call front door for the whole pipeline: parse -> desugar -> check ->
// resolve, plus the global iso environment (declared isos with resolved
// bodies and types, and the ambient builtins with null bodies) that the
// evaluator and the denotation layers resolve names through.
#pragma once

#include <string>

#include "gpm/ast.hpp"
#include "gpm/desugar.hpp"
#include "gpm/normalize.hpp"
#include "gpm/parser.hpp"
#include "gpm/typecheck.hpp"

namespace gpm {

struct LoadedProgram {
  Program desugared;
  CheckedProgram checked;
  Program resolved;
  IsoGlobals globals;
};

inline LoadedProgram load_program(const std::string& source) {
  LoadedProgram lp;
  lp.desugared = desugar_program(parse_program(source));
  lp.checked = check_program(lp.desugared);
  lp.resolved = resolve_program(lp.desugared);
  for (const Decl& d : lp.resolved.decls)
    if (d.kind == DeclKind::Iso) lp.globals[d.name] = IsoDecl{d.iso, d.funty};
  for (const auto& [name, ty] : builtin_iso_types())
    if (!lp.globals.count(name)) lp.globals[name] = IsoDecl{nullptr, ty};
  return lp;
}

}  // namespace gpm
