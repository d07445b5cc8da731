// Static checking: type well-formedness with guarded mu, linear
// latency-indexed typing of clause sides, the same-depth relation between
// the two sides of a clause, pairwise pattern orthogonality, exhaustivity
// recording, and bidirectional iso typing (clause families are checked
// against an expected type; the other iso forms synthesize).
//
// Latency discipline: a pattern variable bound under k nested `next` wrappers
// carries latency k and must be used under exactly k nested `next` on the
// other side. Delayed application does not shift the nesting depth of its
// argument: the delay lives in the argument's own @-type.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gpm/ast.hpp"
#include "gpm/diagnostics.hpp"

namespace gpm {

struct Binding {
  std::string name;
  TypePtr type;
  int latency = 0;
  Pos pos;
};

// Facts recorded for one clause family (a Clauses node).
struct ClauseInfo {
  TypePtr lhs_type, rhs_type;
  bool lhs_exhaustive = false;
  bool rhs_exhaustive = false;
  std::vector<std::vector<Binding>> deltas;  // per clause, in pattern order
};

// Types attached to AST nodes during checking. Semantics recomputes these on
// its (resolved, normalized) trees by calling back into check_clause_family.
struct TypeTables {
  std::map<const TermExpr*, TypePtr> term_ty;
  std::map<const IsoExpr*, FunPtr> iso_ty;
  std::map<const IsoExpr*, ClauseInfo> clause_info;
};

struct CheckedProgram {
  Program prog;  // the desugared program that was checked
  std::map<std::string, TypePtr> aliases;
  std::map<std::string, FunPtr> iso_types;    // declared isos plus builtins
  std::map<std::string, TypePtr> term_types;  // declared terms
  TypeTables tables;
};

// Ambient iso signatures: had, rot2, rot3 : (1+1) <-> (1+1), and
// rotgrad : L <-> L over the qubit-list type L = mu X . 1 + (1+1) * @X.
const std::map<std::string, FunPtr>& builtin_iso_types();

// True iff every free occurrence of x in a sits under at least one @.
bool guarded_in(const std::string& x, const TypePtr& a);

// Expand Named references; throws UnknownName.
TypePtr resolve_named(const TypePtr& a, const std::map<std::string, TypePtr>& aliases);

// Well-formedness (throws UnboundTypeVar / UnguardedMu). Expects Named
// already expanded.
void wf_type(const std::set<std::string>& theta, const TypePtr& a);
void wf_funty(const FunPtr& t);

// Constructor discrimination at a common path; fold and next are transparent.
bool orthogonal(const TermPtr& t, const TermPtr& u);

// The same-depth relation: derivation tree when one exists.
struct DepthDeriv {
  const char* rule;  // "base", "context", "next-next", "next-inj", "next-pair"
  std::vector<DepthDeriv> kids;
};
std::optional<DepthDeriv> same_depth(const TermPtr& t, const TermPtr& u);

// Check a clause family against A <-> B. On success fills tables (including
// the pattern/term types of every subterm of every clause side).
void check_clause_family(const IsoPtr& clauses, const TypePtr& a, const TypePtr& b,
                         const std::map<std::string, FunPtr>& psi, TypeTables& tables);

void check_iso_expr(const IsoPtr& w, const FunPtr& expected,
                    const std::map<std::string, FunPtr>& psi, TypeTables& tables);
FunPtr synth_iso_expr(const IsoPtr& w, const std::map<std::string, FunPtr>& psi,
                      TypeTables& tables);

// Check a closed term (globals allowed) against its annotation.
void check_closed_term(const TermPtr& t, const TypePtr& a,
                       const std::map<std::string, FunPtr>& psi,
                       const std::map<std::string, TypePtr>& globals,
                       TypeTables& tables);

// Whole-program check of a desugared program. Throws CheckError.
CheckedProgram check_program(const Program& desugared);

}  // namespace gpm
