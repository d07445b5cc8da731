// Stage-indexed denotation of terms and iso expressions into a dagger-rig
// backend. A typing context is interpreted as the left-associated tensor of
// its slots (each slot at the full current stage; `next` composes a
// restriction on the way out), a clause is interpreted as rhs . dagger(lhs)
// over the shared slots, and a clause family as the join of its clauses.
// Function-level structure (lambda, fix, application) is removed by
// normalize_fun before anything is denoted; the normalized tree is re-checked
// so that every node carries a type.
//
// The Denoter owns all memo tables and keeps the normalized trees (and their
// type tables) alive so that pointer-keyed caches stay valid. One Denoter per
// loaded program per backend; it must outlive any StagedMor handed out.
#pragma once

#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gpm/ast.hpp"
#include "gpm/diagnostics.hpp"
#include "gpm/eval.hpp"
#include "gpm/guarded.hpp"
#include "gpm/hilb.hpp"
#include "gpm/normalize.hpp"
#include "gpm/pretty.hpp"
#include "gpm/typecheck.hpp"

namespace gpm {

namespace detail {

// Left-associated tensor of slot shapes; I when empty, the slot itself when
// there is exactly one.
inline ShapePtr env_shape_of(const std::vector<ShapePtr>& slots) {
  if (slots.empty()) return one_shape();
  ShapePtr s = slots[0];
  for (size_t i = 1; i < slots.size(); ++i) s = prod_shape(s, slots[i]);
  return s;
}

inline ElemPtr env_elem_of(const std::vector<ElemPtr>& es) {
  if (es.empty()) return star_elem();
  ElemPtr e = es[0];
  for (size_t i = 1; i < es.size(); ++i) e = pair_elem(e, es[i]);
  return e;
}

inline void env_split_elem(ElemPtr e, size_t k, std::vector<ElemPtr>& out) {
  out.assign(k, nullptr);
  for (size_t i = k; i-- > 1;) {
    out[i] = e->b;
    e = e->a;
  }
  if (k >= 1) out[0] = e;
}

// env(slots) -> env(slots[li]) * env(slots[ri]), where li and ri partition
// the slot indices. Routes a context to the two sides of a pair (or to the
// subject/rest split of a let).
inline ElemBij split_bij(const std::vector<ShapePtr>& slots,
                         const std::vector<size_t>& li,
                         const std::vector<size_t>& ri) {
  std::vector<ShapePtr> ls, rs;
  for (size_t i : li) ls.push_back(slots[i]);
  for (size_t i : ri) rs.push_back(slots[i]);
  ShapePtr src = env_shape_of(slots);
  ShapePtr dst = prod_shape(env_shape_of(ls), env_shape_of(rs));
  ElemBij b{src, dst, {}};
  const auto& es = enumerate_elems(src);
  b.map.resize(es.size());
  std::vector<ElemPtr> parts;
  for (size_t idx = 0; idx < es.size(); ++idx) {
    env_split_elem(es[idx], slots.size(), parts);
    std::vector<ElemPtr> le, re;
    for (size_t i : li) le.push_back(parts[i]);
    for (size_t i : ri) re.push_back(parts[i]);
    b.map[idx] = elem_index(dst, pair_elem(env_elem_of(le), env_elem_of(re)));
  }
  return b;
}

// env(rest) * (A1 * A2) -> env(rest ++ [A1, A2]): absorbs the two components
// bound by a let into the tail of the context.
inline ElemBij letpair_bridge(const std::vector<ShapePtr>& rest, ShapePtr a1,
                              ShapePtr a2) {
  ShapePtr src = prod_shape(env_shape_of(rest), prod_shape(a1, a2));
  std::vector<ShapePtr> all = rest;
  all.push_back(a1);
  all.push_back(a2);
  ShapePtr dst = env_shape_of(all);
  ElemBij b{src, dst, {}};
  const auto& es = enumerate_elems(src);
  b.map.resize(es.size());
  std::vector<ElemPtr> parts;
  for (size_t idx = 0; idx < es.size(); ++idx) {
    ElemPtr e = es[idx];
    env_split_elem(e->a, rest.size(), parts);
    parts.push_back(e->b->a);
    parts.push_back(e->b->b);
    b.map[idx] = elem_index(dst, env_elem_of(parts));
  }
  return b;
}

// Free term variables, shadow-aware. Iso subexpressions scope their own
// pattern variables, so App/DelayedApp only look at the argument.
inline void term_fv_rec(const TermPtr& t, std::set<std::string>& bound,
                        std::set<std::string>& out) {
  switch (t->tag) {
    case TermTag::Unit:
    case TermTag::EmptyList:
    case TermTag::Lit0:
    case TermTag::Lit1:
      return;
    case TermTag::Var:
      if (!bound.count(t->x)) out.insert(t->x);
      return;
    case TermTag::InL:
    case TermTag::InR:
    case TermTag::Fold:
    case TermTag::Next:
    case TermTag::App:
    case TermTag::DelayedApp:
      term_fv_rec(t->t0, bound, out);
      return;
    case TermTag::Pair:
    case TermTag::Cons:
      term_fv_rec(t->t0, bound, out);
      term_fv_rec(t->t1, bound, out);
      return;
    case TermTag::LetPair: {
      term_fv_rec(t->t0, bound, out);
      bool hadx = bound.count(t->x) > 0, hady = bound.count(t->y) > 0;
      bound.insert(t->x);
      bound.insert(t->y);
      term_fv_rec(t->t1, bound, out);
      if (!hadx) bound.erase(t->x);
      if (!hady) bound.erase(t->y);
      return;
    }
  }
}

inline std::set<std::string> term_fv(const TermPtr& t) {
  std::set<std::string> bound, out;
  term_fv_rec(t, bound, out);
  return out;
}

// The canonical element of ||A||(n) denoted by a fully forced value; throws
// Undefined when the value's guarded structure exceeds the stage or is still
// suspended.
inline ElemPtr value_elem(const ValuePtr& v, const TypePtr& a, int n) {
  auto bad = [&](const std::string& what) {
    return CheckError(Errc::Undefined,
                      what + " (at type " + show_type(a) + ", stage " +
                          std::to_string(n) + ")");
  };
  switch (a->tag) {
    case TypeTag::One:
      if (v->tag != Value::Tag::Unit) throw bad("value does not inhabit 1");
      return star_elem();
    case TypeTag::Sum:
      if (v->tag == Value::Tag::Inl) return inl_elem(value_elem(v->a, a->a, n));
      if (v->tag == Value::Tag::Inr) return inr_elem(value_elem(v->a, a->b, n));
      throw bad("value does not inhabit a sum type");
    case TypeTag::Prod:
      if (v->tag != Value::Tag::Pair)
        throw bad("value does not inhabit a product type");
      return pair_elem(value_elem(v->a, a->a, n), value_elem(v->b, a->b, n));
    case TypeTag::Mu:
      if (v->tag != Value::Tag::Fold)
        throw bad("value does not inhabit a recursive type");
      return value_elem(v->a, subst_type(a->a, a->name, a), n);
    case TypeTag::Later:
      if (v->tag != Value::Tag::Next) throw bad("value does not inhabit a @-type");
      if (n == 0) throw bad("guarded structure is deeper than the stage");
      if (v->a->tag == Value::Tag::Thunk)
        throw bad("guarded payload is still suspended; raise the budget");
      return value_elem(v->a, a->a, n - 1);
    case TypeTag::Zero:
      throw bad("the empty type has no points");
    case TypeTag::TVar:
    case TypeTag::Named:
      break;
  }
  throw std::logic_error("value_elem: open or unresolved type");
}

}  // namespace detail

template <class B>
class Denoter {
 public:
  using Mor = typename B::Mor;

  explicit Denoter(IsoGlobals globals, double tol = backend_tol<B>())
      : globals_(std::move(globals)), tol_(tol) {
    for (const auto& [name, ty] : builtin_iso_types())
      if (!globals_.count(name)) globals_.emplace(name, IsoDecl{nullptr, ty});
    for (const auto& [name, d] : globals_) psi_[name] = d.type;
  }

  Denoter(const Denoter&) = delete;
  Denoter& operator=(const Denoter&) = delete;

  double tol() const { return tol_; }
  const IsoGlobals& globals() const { return globals_; }

  // Denotation of a closed, resolved value type.
  Cochain<B> type_den(const TypePtr& a) {
    auto it = type_memo_.find(a.get());
    if (it != type_memo_.end()) return it->second;
    Cochain<B> c = denote_type<B>(a, {});
    retained_types_.push_back(a);
    type_memo_.emplace(a.get(), c);
    return c;
  }

  // Stage-n component of a declared (or builtin) first-order iso.
  Mor iso_by_name(const std::string& name, int n) { return global_mor(name, n); }

  // All stages of a declared iso as one staged morphism. Captures `this`.
  StagedMor<B> iso_staged(const std::string& name) {
    const IsoDecl& d = lookup(name);
    require_first_order(name, d.type);
    return StagedMor<B>(type_den(d.type->a), type_den(d.type->b),
                        [this, name](int n) { return global_mor(name, n); });
  }

  // Stage-n denotation of an iso expression at a declared A <-> B type. The
  // expression is normalized at stage n and re-checked before denoting.
  Mor iso_expr_mor(const IsoPtr& w, const FunPtr& ty, int n) {
    if (ty->tag != FunTag::Iso)
      throw CheckError(Errc::NotAnIsoType,
                       "only a first-order iso (A <-> B) can be denoted, got " +
                           show_funty(ty),
                       w->pos);
    IsoPtr nf = normalize_fun(w, n, globals_);
    retained_isos_.push_back(nf);
    auto tables = std::make_unique<TypeTables>();
    check_iso_expr(nf, ty, psi_, *tables);
    const TypeTables& tab = *tables;
    tables_pool_.push_back(std::move(tables));
    return denote_nf(nf, tab, ty, n);
  }

  StagedMor<B> iso_expr_staged(const IsoPtr& w, const FunPtr& ty) {
    if (ty->tag != FunTag::Iso)
      throw CheckError(Errc::NotAnIsoType,
                       "only a first-order iso (A <-> B) can be denoted, got " +
                           show_funty(ty),
                       w->pos);
    retained_isos_.push_back(w);
    return StagedMor<B>(type_den(ty->a), type_den(ty->b), [this, w, ty](int n) {
      return iso_expr_mor(w, ty, n);
    });
  }

  // ||t||_n : I -> ||A||(n) for a closed term.
  Mor closed_term(const TermPtr& t, const TypePtr& a, int n) {
    auto tables = std::make_unique<TypeTables>();
    check_closed_term(t, a, psi_, {}, *tables);
    retained_terms_.push_back(t);
    const TypeTables& tab = *tables;
    tables_pool_.push_back(std::move(tables));
    return term_mor(t, {}, tab, n);
  }

  // The point I -> ||A||(n) picked out by a fully forced value; throws
  // Undefined when next-nesting exceeds n or a thunk remains.
  Mor point_mor(const ValuePtr& v, const TypePtr& a, int n) {
    ShapePtr s = type_den(a).shape(n);
    ElemPtr e = detail::value_elem(v, a, n);
    return B::from_pairs(one_shape(), s, {{0, elem_index(s, e)}});
  }

 private:
  const IsoDecl& lookup(const std::string& name) const {
    auto it = globals_.find(name);
    if (it == globals_.end())
      throw CheckError(Errc::UnknownName, "undeclared iso '" + name + "'");
    return it->second;
  }

  static void require_first_order(const std::string& name, const FunPtr& ty) {
    if (ty->tag != FunTag::Iso)
      throw CheckError(Errc::NotAnIsoType,
                       "'" + name + "' has type " + show_funty(ty) +
                           "; only a first-order iso (A <-> B) can be denoted");
  }

  Mor global_mor(const std::string& name, int n) {
    auto key = std::make_pair(name, n);
    auto it = global_memo_.find(key);
    if (it != global_memo_.end()) return it->second;
    const IsoDecl& d = lookup(name);
    require_first_order(name, d.type);
    Mor m = d.body ? iso_expr_mor(d.body, d.type, n) : builtin_mor(name, d.type, n);
    global_memo_.emplace(key, m);
    return m;
  }

  // An iso occurring inside a checked tree, at the stage of its use site.
  // Normalizing may rebuild the tree, in which case it is re-checked against
  // the type the surrounding check recorded for it.
  Mor iso_in_tree(const IsoPtr& w, const TypeTables& tab, int n) {
    auto key = std::make_pair(static_cast<const void*>(w.get()), n);
    auto it = iso_memo_.find(key);
    if (it != iso_memo_.end()) return it->second;
    FunPtr ty = tab.iso_ty.at(w.get());
    IsoPtr nf = normalize_fun(w, n, globals_);
    Mor m;
    if (nf.get() == w.get()) {
      m = denote_nf(nf, tab, ty, n);
    } else {
      retained_isos_.push_back(nf);
      auto tables = std::make_unique<TypeTables>();
      check_iso_expr(nf, ty, psi_, *tables);
      const TypeTables& fresh = *tables;
      tables_pool_.push_back(std::move(tables));
      m = denote_nf(nf, fresh, ty, n);
    }
    iso_memo_.emplace(key, m);
    return m;
  }

  // A delayed iso (type @(A <-> B)) whose content runs at stage k. The normal
  // form at a @-type is next w' or a zero placeholder.
  Mor delayed_iso_mor(const IsoPtr& w, const TypeTables& tab, int k) {
    FunPtr ty = tab.iso_ty.at(w.get());
    if (ty->tag != FunTag::LaterF || ty->fa->tag != FunTag::Iso)
      throw std::logic_error("delayed_iso_mor: expected a @(A <-> B) type");
    FunPtr ity = ty->fa;
    IsoPtr nf = normalize_fun(w, k, globals_);
    while (nf->tag == IsoTag::FVar) {
      auto it = globals_.find(nf->x);
      if (it == globals_.end() || !it->second.body) break;
      nf = normalize_fun(it->second.body, k, globals_);
    }
    if (nf->tag == IsoTag::NextIso) return iso_expr_mor(nf->i0, ity, k);
    if (nf->tag == IsoTag::ZeroIso)
      return B::zero(type_den(ity->a).shape(k), type_den(ity->b).shape(k));
    throw std::logic_error("delayed_iso_mor: not a normal form at a @-type");
  }

  Mor denote_nf(const IsoPtr& nf, const TypeTables& tab, const FunPtr& ty, int n) {
    switch (nf->tag) {
      case IsoTag::FVar:
        return global_mor(nf->x, n);
      case IsoTag::ZeroIso:
        return B::zero(type_den(ty->a).shape(n), type_den(ty->b).shape(n));
      case IsoTag::Clauses: {
        const ClauseInfo& ci = tab.clause_info.at(nf.get());
        ShapePtr src = type_den(ty->a).shape(n);
        ShapePtr dst = type_den(ty->b).shape(n);
        Mor acc = B::zero(src, dst);
        for (size_t i = 0; i < nf->clauses.size(); ++i) {
          Mor lhs = term_mor(nf->clauses[i].lhs, ci.deltas[i], tab, n);
          Mor rhs = term_mor(nf->clauses[i].rhs, ci.deltas[i], tab, n);
          Mor cm = B::compose(rhs, B::dagger(lhs));
          try {
            acc = mor_join<B>(acc, cm, tol_);
          } catch (const IncompatibleJoin& ij) {
            throw CheckError(Errc::IncompatibleError,
                             "clauses are not orthogonal at stage " +
                                 std::to_string(n) + ": " + ij.reason,
                             nf->clauses[i].pos);
          }
        }
        return acc;
      }
      default:
        throw std::logic_error("denote_nf: not a normal form at an iso type");
    }
  }

  std::vector<ShapePtr> slot_shapes(const std::vector<Binding>& slots, int n) {
    std::vector<ShapePtr> out;
    out.reserve(slots.size());
    for (const Binding& b : slots) out.push_back(type_den(b.type).shape(n));
    return out;
  }

  static std::vector<Binding> select(const std::vector<Binding>& slots,
                                     const std::vector<size_t>& idx) {
    std::vector<Binding> out;
    out.reserve(idx.size());
    for (size_t i : idx) out.push_back(slots[i]);
    return out;
  }

  // ||t||_n : env(slots)(n) -> ||A||(n), where slots lists exactly the free
  // variables of t (linearity makes the split at pairs a partition).
  Mor term_mor(const TermPtr& t, const std::vector<Binding>& slots,
               const TypeTables& tab, int n) {
    switch (t->tag) {
      case TermTag::Unit:
        return B::id(one_shape());
      case TermTag::Var: {
        if (slots.size() != 1 || slots[0].name != t->x)
          throw std::logic_error("term_mor: slot mismatch at variable '" + t->x + "'");
        return B::id(type_den(slots[0].type).shape(n));
      }
      case TermTag::InL:
      case TermTag::InR: {
        Mor m = term_mor(t->t0, slots, tab, n);
        TypePtr sum = tab.term_ty.at(t.get());
        ShapePtr x = type_den(sum->a).shape(n);
        ShapePtr y = type_den(sum->b).shape(n);
        Mor inj = t->tag == TermTag::InL ? inj_l_mor<B>(x, y) : inj_r_mor<B>(x, y);
        return B::compose(inj, m);
      }
      case TermTag::Pair: {
        std::set<std::string> fv1 = detail::term_fv(t->t0);
        std::vector<size_t> i1, i2;
        for (size_t i = 0; i < slots.size(); ++i)
          (fv1.count(slots[i].name) ? i1 : i2).push_back(i);
        Mor m1 = term_mor(t->t0, select(slots, i1), tab, n);
        Mor m2 = term_mor(t->t1, select(slots, i2), tab, n);
        ElemBij route = detail::split_bij(slot_shapes(slots, n), i1, i2);
        return B::compose(B::tensor_prod(m1, m2), B::lift_bij(route));
      }
      case TermTag::LetPair: {
        std::set<std::string> fvs = detail::term_fv(t->t0);
        std::vector<size_t> ri, si;
        for (size_t i = 0; i < slots.size(); ++i)
          (fvs.count(slots[i].name) ? si : ri).push_back(i);
        Mor m1 = term_mor(t->t0, select(slots, si), tab, n);
        TypePtr prod = tab.term_ty.at(t->t0.get());
        ShapePtr a1 = type_den(prod->a).shape(n);
        ShapePtr a2 = type_den(prod->b).shape(n);
        std::vector<Binding> rest = select(slots, ri);
        std::vector<ShapePtr> rest_shapes = slot_shapes(rest, n);
        ElemBij route = detail::split_bij(slot_shapes(slots, n), ri, si);
        Mor step = B::compose(
            B::tensor_prod(B::id(detail::env_shape_of(rest_shapes)), m1),
            B::lift_bij(route));
        ElemBij bridge = detail::letpair_bridge(rest_shapes, a1, a2);
        std::vector<Binding> body_slots = rest;
        body_slots.push_back(Binding{t->x, prod->a, 0, t->pos});
        body_slots.push_back(Binding{t->y, prod->b, 0, t->pos});
        Mor m2 = term_mor(t->t1, body_slots, tab, n);
        return B::compose(m2, B::compose(B::lift_bij(bridge), step));
      }
      case TermTag::Fold: {
        Mor m = term_mor(t->t0, slots, tab, n);
        TypePtr mu = tab.term_ty.at(t.get());
        ShapePtr want = type_den(mu).shape(n);
        if (!shape_eq(m.dst, want))
          throw CheckError(Errc::ShapeStabilizationFailure,
                           "fold did not stabilize at stage " + std::to_string(n) +
                               ": " + show_shape(display_shape(m.dst)) + " vs " +
                               show_shape(display_shape(want)),
                           t->pos);
        return m;
      }
      case TermTag::Next: {
        if (n == 0)
          return B::bang(detail::env_shape_of(slot_shapes(slots, 0)));
        Mor m = term_mor(t->t0, slots, tab, n);
        TypePtr a = tab.term_ty.at(t->t0.get());
        return B::compose(type_den(a).restr(n - 1), m);
      }
      case TermTag::App: {
        Mor m = term_mor(t->t0, slots, tab, n);
        return B::compose(iso_in_tree(t->iso, tab, n), m);
      }
      case TermTag::DelayedApp: {
        if (n == 0)
          return B::bang(detail::env_shape_of(slot_shapes(slots, 0)));
        Mor m = term_mor(t->t0, slots, tab, n);
        return B::compose(delayed_iso_mor(t->iso, tab, n - 1), m);
      }
      case TermTag::EmptyList:
      case TermTag::Cons:
      case TermTag::Lit0:
      case TermTag::Lit1:
        break;
    }
    throw std::logic_error("term_mor: sugared term survived desugaring");
  }

  // Denotations of the ambient isos. Only the matrix backend has them; the
  // classical backend refuses with NonClassicalIso.
  Mor builtin_mor(const std::string& name, const FunPtr& ty, int n) {
    if constexpr (std::is_same_v<B, Hilb>) {
      ShapePtr src = type_den(ty->a).shape(n);
      ShapePtr dst = type_den(ty->b).shape(n);
      using Cx = std::complex<double>;
      if (name == "had" || name == "rot2" || name == "rot3") {
        Eigen::MatrixXcd m(2, 2);
        if (name == "had") {
          double s = 1.0 / std::sqrt(2.0);
          m << s, s, s, -s;
        } else if (name == "rot2") {
          m << Cx(1, 0), Cx(0, 0), Cx(0, 0), Cx(0, 1);
        } else {
          m << Cx(1, 0), Cx(0, 0), Cx(0, 0), std::polar(1.0, std::numbers::pi / 4);
        }
        return B::make(src, dst, m);
      }
      if (name == "rotgrad") {
        // Diagonal phase gradient on qubit lists: the k-th cons cell
        // (1-indexed) contributes pi / 2^k when its qubit is 1. The list
        // element tree is inl(*) for nil, inr((bit, tail)) for cons, with the
        // tail an element of the one-stage-shorter list shape.
        const auto& es = enumerate_elems(src);
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero((Eigen::Index)es.size(),
                                                    (Eigen::Index)es.size());
        for (size_t i = 0; i < es.size(); ++i) {
          double ang = 0.0;
          ElemPtr e = es[i];
          double denom = 2.0;
          while (e->tag == ElemTree::Tag::Inr) {
            ElemPtr cell = e->a;
            if (cell->a->tag == ElemTree::Tag::Inr) ang += std::numbers::pi / denom;
            denom *= 2.0;
            e = cell->b;
          }
          m((Eigen::Index)i, (Eigen::Index)i) = std::polar(1.0, ang);
        }
        return B::make(src, dst, m);
      }
    }
    (void)ty;
    (void)n;
    throw CheckError(Errc::NonClassicalIso,
                     "builtin iso '" + name + "' has no denotation in the " +
                         std::string(B::name) + " backend");
  }

  IsoGlobals globals_;
  double tol_;
  std::map<std::string, FunPtr> psi_;

  std::map<const TypeExpr*, Cochain<B>> type_memo_;
  std::map<std::pair<const void*, int>, Mor> iso_memo_;
  std::map<std::pair<std::string, int>, Mor> global_memo_;

  // Pointer-keyed caches above index into these; nothing referenced by a memo
  // entry is ever freed while the Denoter lives.
  std::vector<TypePtr> retained_types_;
  std::vector<IsoPtr> retained_isos_;
  std::vector<TermPtr> retained_terms_;
  std::vector<std::unique_ptr<TypeTables>> tables_pool_;
};

}  // namespace gpm
