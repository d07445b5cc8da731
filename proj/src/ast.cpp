#include "gpm/ast.hpp"

#include <map>

namespace gpm {

namespace {
TypePtr mk_type(TypeTag tag, TypePtr a, TypePtr b, std::string name, Pos p) {
  auto n = std::make_shared<TypeExpr>();
  n->tag = tag;
  n->a = std::move(a);
  n->b = std::move(b);
  n->name = std::move(name);
  n->pos = p;
  return n;
}
}  // namespace

TypePtr t_zero(Pos p) { return mk_type(TypeTag::Zero, nullptr, nullptr, "", p); }
TypePtr t_one(Pos p) { return mk_type(TypeTag::One, nullptr, nullptr, "", p); }
TypePtr t_sum(TypePtr a, TypePtr b, Pos p) {
  return mk_type(TypeTag::Sum, std::move(a), std::move(b), "", p);
}
TypePtr t_prod(TypePtr a, TypePtr b, Pos p) {
  return mk_type(TypeTag::Prod, std::move(a), std::move(b), "", p);
}
TypePtr t_later(TypePtr a, Pos p) {
  return mk_type(TypeTag::Later, std::move(a), nullptr, "", p);
}
TypePtr t_mu(std::string x, TypePtr body, Pos p) {
  return mk_type(TypeTag::Mu, std::move(body), nullptr, std::move(x), p);
}
TypePtr t_tvar(std::string x, Pos p) {
  return mk_type(TypeTag::TVar, nullptr, nullptr, std::move(x), p);
}
TypePtr t_named(std::string n, Pos p) {
  return mk_type(TypeTag::Named, nullptr, nullptr, std::move(n), p);
}

namespace {

// Alpha-aware comparison: mu binders tracked by de Bruijn level per side.
bool type_eq_rec(const TypePtr& a, const TypePtr& b,
                 std::map<std::string, int>& la, std::map<std::string, int>& lb,
                 int depth) {
  if (a == b && la.empty() && lb.empty()) return true;
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TypeTag::Zero:
    case TypeTag::One:
      return true;
    case TypeTag::Sum:
    case TypeTag::Prod:
      return type_eq_rec(a->a, b->a, la, lb, depth) &&
             type_eq_rec(a->b, b->b, la, lb, depth);
    case TypeTag::Later:
      return type_eq_rec(a->a, b->a, la, lb, depth);
    case TypeTag::Mu: {
      auto sa = la.find(a->name), sb = lb.find(b->name);
      int olda = sa == la.end() ? -1 : sa->second;
      int oldb = sb == lb.end() ? -1 : sb->second;
      la[a->name] = depth;
      lb[b->name] = depth;
      bool r = type_eq_rec(a->a, b->a, la, lb, depth + 1);
      if (olda < 0) la.erase(a->name); else la[a->name] = olda;
      if (oldb < 0) lb.erase(b->name); else lb[b->name] = oldb;
      return r;
    }
    case TypeTag::TVar: {
      auto sa = la.find(a->name), sb = lb.find(b->name);
      if ((sa == la.end()) != (sb == lb.end())) return false;
      if (sa == la.end()) return a->name == b->name;  // both free
      return sa->second == sb->second;
    }
    case TypeTag::Named:
      return a->name == b->name;
  }
  return false;
}

}  // namespace

bool type_eq(const TypePtr& a, const TypePtr& b) {
  std::map<std::string, int> la, lb;
  return type_eq_rec(a, b, la, lb, 0);
}

TypePtr subst_type(const TypePtr& a, const std::string& x, const TypePtr& b) {
  if (!a) return a;
  switch (a->tag) {
    case TypeTag::Zero:
    case TypeTag::One:
    case TypeTag::Named:
      return a;
    case TypeTag::TVar:
      return a->name == x ? b : a;
    case TypeTag::Sum:
      return t_sum(subst_type(a->a, x, b), subst_type(a->b, x, b), a->pos);
    case TypeTag::Prod:
      return t_prod(subst_type(a->a, x, b), subst_type(a->b, x, b), a->pos);
    case TypeTag::Later:
      return t_later(subst_type(a->a, x, b), a->pos);
    case TypeTag::Mu:
      if (a->name == x) return a;  // shadowed
      return t_mu(a->name, subst_type(a->a, x, b), a->pos);
  }
  return a;
}

bool tvar_free_in(const std::string& x, const TypePtr& a) {
  if (!a) return false;
  switch (a->tag) {
    case TypeTag::TVar:
      return a->name == x;
    case TypeTag::Mu:
      return a->name != x && tvar_free_in(x, a->a);
    default:
      return tvar_free_in(x, a->a) || tvar_free_in(x, a->b);
  }
}

namespace {
FunPtr mk_fun(FunTag tag, TypePtr a, TypePtr b, FunPtr fa, FunPtr fb, Pos p) {
  auto n = std::make_shared<FunType>();
  n->tag = tag;
  n->a = std::move(a);
  n->b = std::move(b);
  n->fa = std::move(fa);
  n->fb = std::move(fb);
  n->pos = p;
  return n;
}
}  // namespace

FunPtr ft_iso(TypePtr a, TypePtr b, Pos p) {
  return mk_fun(FunTag::Iso, std::move(a), std::move(b), nullptr, nullptr, p);
}
FunPtr ft_later(FunPtr t, Pos p) {
  return mk_fun(FunTag::LaterF, nullptr, nullptr, std::move(t), nullptr, p);
}
FunPtr ft_arrow(FunPtr a, FunPtr b, Pos p) {
  return mk_fun(FunTag::Arrow, nullptr, nullptr, std::move(a), std::move(b), p);
}

bool funty_eq(const FunPtr& s, const FunPtr& t) {
  if (!s || !t) return s == t;
  if (s->tag != t->tag) return false;
  switch (s->tag) {
    case FunTag::Iso:
      return type_eq(s->a, t->a) && type_eq(s->b, t->b);
    case FunTag::LaterF:
      return funty_eq(s->fa, t->fa);
    case FunTag::Arrow:
      return funty_eq(s->fa, t->fa) && funty_eq(s->fb, t->fb);
  }
  return false;
}

namespace {
TermPtr mk_term(TermTag tag, std::string x, std::string y, TermPtr t0, TermPtr t1,
                IsoPtr iso, Pos p) {
  auto n = std::make_shared<TermExpr>();
  n->tag = tag;
  n->x = std::move(x);
  n->y = std::move(y);
  n->t0 = std::move(t0);
  n->t1 = std::move(t1);
  n->iso = std::move(iso);
  n->pos = p;
  return n;
}
}  // namespace

TermPtr m_unit(Pos p) { return mk_term(TermTag::Unit, "", "", nullptr, nullptr, nullptr, p); }
TermPtr m_var(std::string x, Pos p) {
  return mk_term(TermTag::Var, std::move(x), "", nullptr, nullptr, nullptr, p);
}
TermPtr m_inl(TermPtr t, Pos p) {
  return mk_term(TermTag::InL, "", "", std::move(t), nullptr, nullptr, p);
}
TermPtr m_inr(TermPtr t, Pos p) {
  return mk_term(TermTag::InR, "", "", std::move(t), nullptr, nullptr, p);
}
TermPtr m_pair(TermPtr a, TermPtr b, Pos p) {
  return mk_term(TermTag::Pair, "", "", std::move(a), std::move(b), nullptr, p);
}
TermPtr m_letpair(std::string x, std::string y, TermPtr subj, TermPtr body, Pos p) {
  return mk_term(TermTag::LetPair, std::move(x), std::move(y), std::move(subj),
                 std::move(body), nullptr, p);
}
TermPtr m_fold(TermPtr t, Pos p) {
  return mk_term(TermTag::Fold, "", "", std::move(t), nullptr, nullptr, p);
}
TermPtr m_next(TermPtr t, Pos p) {
  return mk_term(TermTag::Next, "", "", std::move(t), nullptr, nullptr, p);
}
TermPtr m_app(IsoPtr f, TermPtr t, Pos p) {
  return mk_term(TermTag::App, "", "", std::move(t), nullptr, std::move(f), p);
}
TermPtr m_dapp(IsoPtr f, TermPtr t, Pos p) {
  return mk_term(TermTag::DelayedApp, "", "", std::move(t), nullptr, std::move(f), p);
}
TermPtr m_nil(Pos p) { return mk_term(TermTag::EmptyList, "", "", nullptr, nullptr, nullptr, p); }
TermPtr m_cons(TermPtr h, TermPtr t, Pos p) {
  return mk_term(TermTag::Cons, "", "", std::move(h), std::move(t), nullptr, p);
}
TermPtr m_lit0(Pos p) { return mk_term(TermTag::Lit0, "", "", nullptr, nullptr, nullptr, p); }
TermPtr m_lit1(Pos p) { return mk_term(TermTag::Lit1, "", "", nullptr, nullptr, nullptr, p); }

namespace {
IsoPtr mk_iso(IsoTag tag, std::vector<Clause> cs, std::string x, FunPtr ann,
              IsoPtr i0, IsoPtr i1, Pos p) {
  auto n = std::make_shared<IsoExpr>();
  n->tag = tag;
  n->clauses = std::move(cs);
  n->x = std::move(x);
  n->ann = std::move(ann);
  n->i0 = std::move(i0);
  n->i1 = std::move(i1);
  n->pos = p;
  return n;
}
}  // namespace

IsoPtr w_clauses(std::vector<Clause> cs, Pos p) {
  return mk_iso(IsoTag::Clauses, std::move(cs), "", nullptr, nullptr, nullptr, p);
}
IsoPtr w_fvar(std::string x, Pos p) {
  return mk_iso(IsoTag::FVar, {}, std::move(x), nullptr, nullptr, nullptr, p);
}
IsoPtr w_lambda(std::string x, FunPtr ann, IsoPtr body, Pos p) {
  return mk_iso(IsoTag::Lambda, {}, std::move(x), std::move(ann), std::move(body),
                nullptr, p);
}
IsoPtr w_appiso(IsoPtr f, IsoPtr a, Pos p) {
  return mk_iso(IsoTag::AppIso, {}, "", nullptr, std::move(f), std::move(a), p);
}
IsoPtr w_fix(std::string x, FunPtr ann, IsoPtr body, Pos p) {
  return mk_iso(IsoTag::Fix, {}, std::move(x), std::move(ann), std::move(body), nullptr, p);
}
IsoPtr w_nextiso(IsoPtr w, Pos p) {
  return mk_iso(IsoTag::NextIso, {}, "", nullptr, std::move(w), nullptr, p);
}
IsoPtr w_dappiso(IsoPtr f, IsoPtr a, Pos p) {
  return mk_iso(IsoTag::DelayedAppIso, {}, "", nullptr, std::move(f), std::move(a), p);
}
IsoPtr w_compose(IsoPtr f, IsoPtr g, Pos p) {
  return mk_iso(IsoTag::Compose, {}, "", nullptr, std::move(f), std::move(g), p);
}
IsoPtr w_zeroiso(FunPtr t, Pos p) {
  return mk_iso(IsoTag::ZeroIso, {}, "", std::move(t), nullptr, nullptr, p);
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  if (a->x != b->x || a->y != b->y) return false;
  return term_eq(a->t0, b->t0) && term_eq(a->t1, b->t1) && iso_eq(a->iso, b->iso);
}

bool iso_eq(const IsoPtr& a, const IsoPtr& b) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  if (a->x != b->x) return false;
  if ((a->ann == nullptr) != (b->ann == nullptr)) return false;
  if (a->ann && !funty_eq(a->ann, b->ann)) return false;
  if (a->clauses.size() != b->clauses.size()) return false;
  for (size_t i = 0; i < a->clauses.size(); ++i)
    if (!term_eq(a->clauses[i].lhs, b->clauses[i].lhs) ||
        !term_eq(a->clauses[i].rhs, b->clauses[i].rhs))
      return false;
  return iso_eq(a->i0, b->i0) && iso_eq(a->i1, b->i1);
}

const Decl* find_decl(const Program& p, const std::string& name) {
  for (const auto& d : p.decls)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace gpm
