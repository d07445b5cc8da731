// Budgeted call-by-value evaluator for the classical fragment. The budget is
// the depth to which `next` payloads are forced: eval at budget 0 suspends
// every guarded subterm as a thunk, budget k forces one level and evaluates
// underneath at k-1. Quantum builtins have no classical meaning and raise
// NonClassicalIso; a value outside the matched iso's domain raises
// StuckMatch. Used as an independent oracle against the partial-injection
// denotation (budget = stage).
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "gpm/ast.hpp"
#include "gpm/normalize.hpp"

namespace gpm {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;
using ValEnv = std::map<std::string, ValuePtr>;

// Thunk values appear only as Next payloads and as environment entries bound
// by matching a variable pattern under next.
struct Value {
  enum class Tag { Unit, Inl, Inr, Pair, Fold, Next, Thunk } tag;
  ValuePtr a, b;                       // children
  TermPtr tterm;                       // Thunk: suspended term
  std::shared_ptr<const ValEnv> tenv;  // Thunk: captured environment
};

ValuePtr v_unit();
ValuePtr v_inl(ValuePtr a);
ValuePtr v_inr(ValuePtr a);
ValuePtr v_pair(ValuePtr a, ValuePtr b);
ValuePtr v_fold(ValuePtr a);
ValuePtr v_next(ValuePtr payload);
ValuePtr v_thunk(TermPtr t, std::shared_ptr<const ValEnv> env);

// Structural equality on forced parts; thunks compare equal only as the same
// suspension object.
bool value_eq(const ValuePtr& x, const ValuePtr& y);

// Maximum next-nesting of the forced structure; a thunk counts as infinitely
// deep (it is not yet a value).
int next_depth(const ValuePtr& v);

ValuePtr eval(const TermPtr& t, const ValEnv& env, int budget,
              const IsoGlobals& globals);

ValuePtr apply_iso(const IsoPtr& w, const ValuePtr& v, int budget,
                   const IsoGlobals& globals);

// Structural match of a linear pattern. Returns bindings on success, nullopt
// on a constructor mismatch; throws StuckMatch when the decision would need
// to force a thunk with no budget left.
std::optional<ValEnv> match_pattern(const TermPtr& p, const ValuePtr& v,
                                    int budget, const IsoGlobals& globals);

// Force thunks under next down to the given depth.
ValuePtr force_value(const ValuePtr& v, int depth, const IsoGlobals& globals);

// Swap the two sides of every clause (the operational dagger). Only
// meaningful when both sides are constructor patterns.
IsoPtr reverse_clauses(const IsoPtr& w);

// Surface-syntax rendering; unforced thunks print as `_`.
std::string show_value(const ValuePtr& v);

}  // namespace gpm
