// Precedence-aware printers producing surface syntax that re-parses to the
// same AST (positions aside). Sugar nodes print as their sugar.
#pragma once

#include <string>

#include "gpm/ast.hpp"

namespace gpm {

std::string show_type(const TypePtr& t);
std::string show_funty(const FunPtr& t);
std::string show_term(const TermPtr& t);
std::string show_iso(const IsoPtr& w);
std::string show_program(const Program& p);

}  // namespace gpm
