// Abstract syntax of the guarded pattern-matching language: value types
// (0, 1, +, *, @, mu), iso function types (<->, @, ->), terms, iso
// expressions with clause families, and whole programs. Nodes carry source
// positions; structural equality ignores them.
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace gpm {

struct Pos {
  int line = 0;
  int col = 0;
};

// ---------------------------------------------------------------- value types

struct TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

enum class TypeTag : uint8_t { Zero, One, Sum, Prod, Later, Mu, TVar, Named };

struct TypeExpr {
  TypeTag tag;
  TypePtr a, b;      // Sum/Prod children; Later/Mu body in a
  std::string name;  // Mu binder, TVar, Named
  Pos pos;
};

TypePtr t_zero(Pos p = {});
TypePtr t_one(Pos p = {});
TypePtr t_sum(TypePtr a, TypePtr b, Pos p = {});
TypePtr t_prod(TypePtr a, TypePtr b, Pos p = {});
TypePtr t_later(TypePtr a, Pos p = {});
TypePtr t_mu(std::string x, TypePtr body, Pos p = {});
TypePtr t_tvar(std::string x, Pos p = {});
TypePtr t_named(std::string n, Pos p = {});

// Structural equality up to renaming of mu binders; Named compares by name
// (resolve aliases first when that is not what you want).
bool type_eq(const TypePtr& a, const TypePtr& b);

// A[B/X], capture-avoiding for the closed-B uses in mu unfolding.
TypePtr subst_type(const TypePtr& a, const std::string& x, const TypePtr& b);

bool tvar_free_in(const std::string& x, const TypePtr& a);

// ------------------------------------------------------------- function types

struct FunType;
using FunPtr = std::shared_ptr<const FunType>;

enum class FunTag : uint8_t { Iso, LaterF, Arrow };

struct FunType {
  FunTag tag;
  TypePtr a, b;   // Iso endpoints
  FunPtr fa, fb;  // LaterF body in fa; Arrow domain fa, codomain fb
  Pos pos;
};

FunPtr ft_iso(TypePtr a, TypePtr b, Pos p = {});
FunPtr ft_later(FunPtr t, Pos p = {});
FunPtr ft_arrow(FunPtr a, FunPtr b, Pos p = {});

bool funty_eq(const FunPtr& s, const FunPtr& t);

// --------------------------------------------------------------------- terms

struct TermExpr;
using TermPtr = std::shared_ptr<const TermExpr>;
struct IsoExpr;
using IsoPtr = std::shared_ptr<const IsoExpr>;

enum class TermTag : uint8_t {
  Unit,
  Var,
  InL,
  InR,
  Pair,
  LetPair,
  Fold,
  Next,
  App,         // iso applied to a term
  DelayedApp,  // iso of type @(A<->B) applied to a term of type @A
  // surface sugar, removed by desugar():
  EmptyList,  // []
  Cons,       // h :: t   (tail already delayed)
  Lit0,       // '0
  Lit1,       // '1
};

struct TermExpr {
  TermTag tag;
  std::string x, y;  // Var name in x; LetPair binders in x, y
  TermPtr t0, t1;    // children; LetPair subject t0, body t1; Cons head t0 tail t1
  IsoPtr iso;        // App/DelayedApp function
  Pos pos;
};

TermPtr m_unit(Pos p = {});
TermPtr m_var(std::string x, Pos p = {});
TermPtr m_inl(TermPtr t, Pos p = {});
TermPtr m_inr(TermPtr t, Pos p = {});
TermPtr m_pair(TermPtr a, TermPtr b, Pos p = {});
TermPtr m_letpair(std::string x, std::string y, TermPtr subj, TermPtr body, Pos p = {});
TermPtr m_fold(TermPtr t, Pos p = {});
TermPtr m_next(TermPtr t, Pos p = {});
TermPtr m_app(IsoPtr f, TermPtr t, Pos p = {});
TermPtr m_dapp(IsoPtr f, TermPtr t, Pos p = {});
TermPtr m_nil(Pos p = {});
TermPtr m_cons(TermPtr h, TermPtr t, Pos p = {});
TermPtr m_lit0(Pos p = {});
TermPtr m_lit1(Pos p = {});

// ---------------------------------------------------------------------- isos

struct Clause {
  TermPtr lhs, rhs;
  Pos pos;
};

enum class IsoTag : uint8_t {
  Clauses,
  FVar,
  Lambda,
  AppIso,
  Fix,
  NextIso,
  DelayedAppIso,
  // surface sugar, removed by desugar():
  Compose,  // f << g, meaning f after g
  // internal (never parsed): the inert placeholder the innermost fix
  // unfolding is closed with; denotes the zero morphism of its type.
  ZeroIso,
};

struct IsoExpr {
  IsoTag tag;
  std::vector<Clause> clauses;
  std::string x;  // FVar name, Lambda/Fix binder
  FunPtr ann;     // Lambda/Fix binder annotation; ZeroIso type
  IsoPtr i0, i1;  // children; AppIso/DelayedAppIso/Compose: function i0, argument i1
  Pos pos;
};

IsoPtr w_clauses(std::vector<Clause> cs, Pos p = {});
IsoPtr w_fvar(std::string x, Pos p = {});
IsoPtr w_lambda(std::string x, FunPtr ann, IsoPtr body, Pos p = {});
IsoPtr w_appiso(IsoPtr f, IsoPtr a, Pos p = {});
IsoPtr w_fix(std::string x, FunPtr ann, IsoPtr body, Pos p = {});
IsoPtr w_nextiso(IsoPtr w, Pos p = {});
IsoPtr w_dappiso(IsoPtr f, IsoPtr a, Pos p = {});
IsoPtr w_compose(IsoPtr f, IsoPtr g, Pos p = {});
IsoPtr w_zeroiso(FunPtr t, Pos p = {});

bool term_eq(const TermPtr& a, const TermPtr& b);  // structural, ignores positions
bool iso_eq(const IsoPtr& a, const IsoPtr& b);

// ------------------------------------------------------------------- programs

enum class DeclKind : uint8_t { Type, Iso, Term };

struct Decl {
  DeclKind kind;
  std::string name;
  TypePtr type;   // Type alias body, or Term annotation
  FunPtr funty;   // Iso annotation
  IsoPtr iso;     // Iso body
  TermPtr term;   // Term body
  Pos pos;
};

struct Program {
  std::vector<Decl> decls;
};

const Decl* find_decl(const Program& p, const std::string& name);

}  // namespace gpm
