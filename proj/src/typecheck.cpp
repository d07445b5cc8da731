#include "gpm/typecheck.hpp"

#include <utility>

#include "gpm/pretty.hpp"

namespace gpm {

const std::map<std::string, FunPtr>& builtin_iso_types() {
  static const std::map<std::string, FunPtr> table = [] {
    TypePtr qubit = t_sum(t_one(), t_one());
    TypePtr qlist =
        t_mu("X", t_sum(t_one(), t_prod(t_sum(t_one(), t_one()), t_later(t_tvar("X")))));
    std::map<std::string, FunPtr> m;
    m["had"] = ft_iso(qubit, qubit);
    m["rot2"] = ft_iso(qubit, qubit);
    m["rot3"] = ft_iso(qubit, qubit);
    m["rotgrad"] = ft_iso(qlist, qlist);
    return m;
  }();
  return table;
}

namespace {

bool guarded_rec(const std::string& x, const TypePtr& a, bool under) {
  switch (a->tag) {
    case TypeTag::Zero:
    case TypeTag::One:
    case TypeTag::Named:
      return true;
    case TypeTag::TVar:
      return a->name != x || under;
    case TypeTag::Sum:
    case TypeTag::Prod:
      return guarded_rec(x, a->a, under) && guarded_rec(x, a->b, under);
    case TypeTag::Later:
      return guarded_rec(x, a->a, true);
    case TypeTag::Mu:
      if (a->name == x) return true;  // shadowed
      return guarded_rec(x, a->a, under);
  }
  return true;
}

}  // namespace

bool guarded_in(const std::string& x, const TypePtr& a) { return guarded_rec(x, a, false); }

TypePtr resolve_named(const TypePtr& a, const std::map<std::string, TypePtr>& aliases) {
  switch (a->tag) {
    case TypeTag::Zero:
    case TypeTag::One:
    case TypeTag::TVar:
      return a;
    case TypeTag::Sum:
      return t_sum(resolve_named(a->a, aliases), resolve_named(a->b, aliases), a->pos);
    case TypeTag::Prod:
      return t_prod(resolve_named(a->a, aliases), resolve_named(a->b, aliases), a->pos);
    case TypeTag::Later:
      return t_later(resolve_named(a->a, aliases), a->pos);
    case TypeTag::Mu:
      return t_mu(a->name, resolve_named(a->a, aliases), a->pos);
    case TypeTag::Named: {
      auto it = aliases.find(a->name);
      if (it == aliases.end())
        throw CheckError(Errc::UnknownName, "unknown type name '" + a->name + "'", a->pos);
      return resolve_named(it->second, aliases);
    }
  }
  return a;
}

void wf_type(const std::set<std::string>& theta, const TypePtr& a) {
  switch (a->tag) {
    case TypeTag::Zero:
    case TypeTag::One:
      return;
    case TypeTag::Sum:
    case TypeTag::Prod:
      wf_type(theta, a->a);
      wf_type(theta, a->b);
      return;
    case TypeTag::Later:
      wf_type(theta, a->a);
      return;
    case TypeTag::TVar:
      if (!theta.count(a->name))
        throw CheckError(Errc::UnboundTypeVar, "type variable '" + a->name + "' is not in scope",
                         a->pos);
      return;
    case TypeTag::Mu: {
      if (!guarded_in(a->name, a->a))
        throw CheckError(Errc::UnguardedMu,
                         "recursive variable '" + a->name +
                             "' must occur under @ in mu " + a->name + " . " + show_type(a->a),
                         a->pos);
      auto theta2 = theta;
      theta2.insert(a->name);
      wf_type(theta2, a->a);
      return;
    }
    case TypeTag::Named:
      throw CheckError(Errc::UnknownName,
                       "unresolved type name '" + a->name + "' in well-formedness check", a->pos);
  }
}

void wf_funty(const FunPtr& t) {
  switch (t->tag) {
    case FunTag::Iso:
      wf_type({}, t->a);
      wf_type({}, t->b);
      return;
    case FunTag::LaterF:
      wf_funty(t->fa);
      return;
    case FunTag::Arrow:
      wf_funty(t->fa);
      wf_funty(t->fb);
      return;
  }
}

// ----------------------------------------------------------- orthogonality

namespace {

TermPtr strip_transparent(TermPtr t) {
  // fold/next wrap without discriminating; the values a let produces are the
  // values of its body, so discrimination continues there.
  while (t->tag == TermTag::Fold || t->tag == TermTag::Next ||
         t->tag == TermTag::LetPair)
    t = t->tag == TermTag::LetPair ? t->t1 : t->t0;
  return t;
}

}  // namespace

bool orthogonal(const TermPtr& t0, const TermPtr& u0) {
  TermPtr t = strip_transparent(t0), u = strip_transparent(u0);
  if (t->tag == TermTag::Var || u->tag == TermTag::Var) return false;
  if (t->tag != u->tag)
    return (t->tag == TermTag::InL && u->tag == TermTag::InR) ||
           (t->tag == TermTag::InR && u->tag == TermTag::InL);
  switch (t->tag) {
    case TermTag::InL:
    case TermTag::InR:
      return orthogonal(t->t0, u->t0);
    case TermTag::Pair:
      return orthogonal(t->t0, u->t0) || orthogonal(t->t1, u->t1);
    default:
      // unit vs unit, or non-constructor forms we cannot discriminate
      return false;
  }
}

// ------------------------------------------------------------- same depth

namespace {

// Term-level next only; iso subtrees (including the function of a delayed
// application) are a separate syntactic class and do not count.
bool next_free(const TermPtr& t) {
  switch (t->tag) {
    case TermTag::Next:
      return false;
    case TermTag::InL:
    case TermTag::InR:
    case TermTag::Fold:
    case TermTag::App:
    case TermTag::DelayedApp:
      return next_free(t->t0);
    case TermTag::Pair:
    case TermTag::LetPair:
      return next_free(t->t0) && next_free(t->t1);
    default:
      return true;
  }
}

// Subterms s with t = C[s] for a single-frame next-free context C. Hole
// positions: under inl/inr/fold, the argument of an iso application, either
// component of a pair, and either part of a let — in the last two cases only
// when the part outside the hole is next-free. next and delayed application
// are not context frames.
void context_subterms(const TermPtr& t, std::vector<TermPtr>& out) {
  switch (t->tag) {
    case TermTag::InL:
    case TermTag::InR:
    case TermTag::Fold:
    case TermTag::App:
      out.push_back(t->t0);
      return;
    case TermTag::Pair:
    case TermTag::LetPair:
      if (next_free(t->t1)) out.push_back(t->t0);
      if (next_free(t->t0)) out.push_back(t->t1);
      return;
    default:
      return;
  }
}

using SdMemo = std::map<std::pair<const TermExpr*, const TermExpr*>, std::optional<DepthDeriv>>;

std::optional<DepthDeriv> sd(const TermPtr& t, const TermPtr& u, SdMemo& memo) {
  auto key = std::make_pair(t.get(), u.get());
  auto hit = memo.find(key);
  if (hit != memo.end()) return hit->second;

  std::optional<DepthDeriv> res;
  if (next_free(t) && next_free(u)) res = DepthDeriv{"base", {}};

  if (!res && t->tag == TermTag::Next && u->tag == TermTag::Next)
    if (auto k = sd(t->t0, u->t0, memo)) res = DepthDeriv{"next-next", {*k}};

  if (!res) {
    // next (inj s)  ~  inj (next s'), in either orientation
    auto inj = [&](const TermPtr& nx, const TermPtr& in) -> std::optional<DepthDeriv> {
      if (nx->tag == TermTag::Next &&
          (nx->t0->tag == TermTag::InL || nx->t0->tag == TermTag::InR) &&
          in->tag == nx->t0->tag && in->t0->tag == TermTag::Next)
        if (auto k = sd(nx->t0->t0, in->t0->t0, memo)) return DepthDeriv{"next-inj", {*k}};
      return std::nullopt;
    };
    res = inj(t, u);
    if (!res) res = inj(u, t);
  }

  if (!res) {
    // next (s1, s2)  ~  (next s1', next s2'), in either orientation
    auto pr = [&](const TermPtr& np, const TermPtr& pp) -> std::optional<DepthDeriv> {
      if (np->tag == TermTag::Next && np->t0->tag == TermTag::Pair &&
          pp->tag == TermTag::Pair && pp->t0->tag == TermTag::Next &&
          pp->t1->tag == TermTag::Next) {
        auto k1 = sd(np->t0->t0, pp->t0->t0, memo);
        if (!k1) return std::nullopt;
        auto k2 = sd(np->t0->t1, pp->t1->t0, memo);
        if (!k2) return std::nullopt;
        return DepthDeriv{"next-pair", {*k1, *k2}};
      }
      return std::nullopt;
    };
    res = pr(t, u);
    if (!res) res = pr(u, t);
  }

  if (!res) {
    std::vector<TermPtr> dt, du;
    context_subterms(t, dt);
    context_subterms(u, du);
    for (const auto& s : dt)
      if (!res)
        if (auto k = sd(s, u, memo)) res = DepthDeriv{"context", {*k}};
    for (const auto& s : du)
      if (!res)
        if (auto k = sd(t, s, memo)) res = DepthDeriv{"context", {*k}};
  }

  memo[key] = res;
  return res;
}

}  // namespace

std::optional<DepthDeriv> same_depth(const TermPtr& t, const TermPtr& u) {
  SdMemo memo;
  return sd(t, u, memo);
}

// ------------------------------------------------------------ exhaustivity

namespace {

// Maranget-style usefulness of an extra all-wildcard row against the rows
// seen so far. Patterns are terms; a null entry or a variable is a wildcard;
// anything that is not a constructor form covers nothing (conservative for
// right-hand sides that compute). Recorded only, never required.
bool is_wild(const TermPtr& p) { return !p || p->tag == TermTag::Var; }

bool wildcard_useful(std::vector<std::vector<TermPtr>> rows, std::vector<TypePtr> types) {
  if (rows.empty()) return true;
  if (types.empty()) return false;

  bool all_wild = true;
  for (const auto& r : rows) all_wild = all_wild && is_wild(r[0]);
  if (all_wild) {
    for (auto& r : rows) r.erase(r.begin());
    types.erase(types.begin());
    return wildcard_useful(std::move(rows), std::move(types));
  }

  TypePtr ty = types[0];
  std::vector<TypePtr> rest(types.begin() + 1, types.end());

  auto specialize = [&](TermTag ctor, int arity, const std::vector<TypePtr>& arg_tys) {
    std::vector<std::vector<TermPtr>> out;
    for (const auto& r : rows) {
      std::vector<TermPtr> row2;
      if (is_wild(r[0])) {
        for (int i = 0; i < arity; ++i) row2.push_back(nullptr);
      } else if (r[0]->tag == ctor) {
        if (arity >= 1) row2.push_back(r[0]->t0);
        if (arity >= 2) row2.push_back(r[0]->t1);
      } else {
        continue;  // other constructor, or a computing form: covers nothing here
      }
      row2.insert(row2.end(), r.begin() + 1, r.end());
      out.push_back(std::move(row2));
    }
    std::vector<TypePtr> tys = arg_tys;
    tys.insert(tys.end(), rest.begin(), rest.end());
    return wildcard_useful(std::move(out), std::move(tys));
  };

  switch (ty->tag) {
    case TypeTag::Zero:
      return false;  // no values at all
    case TypeTag::One:
      return specialize(TermTag::Unit, 0, {});
    case TypeTag::Sum:
      return specialize(TermTag::InL, 1, {ty->a}) || specialize(TermTag::InR, 1, {ty->b});
    case TypeTag::Prod:
      return specialize(TermTag::Pair, 2, {ty->a, ty->b});
    case TypeTag::Later:
      return specialize(TermTag::Next, 1, {ty->a});
    case TypeTag::Mu: {
      bool any_fold = false;
      for (const auto& r : rows) any_fold = any_fold || (!is_wild(r[0]) && r[0]->tag == TermTag::Fold);
      if (!any_fold) {
        // only non-matching forms in this column; the wildcard stays useful
        return true;
      }
      return specialize(TermTag::Fold, 1, {subst_type(ty->a, ty->name, ty)});
    }
    default: {
      // opaque column: only wildcard rows can cover
      std::vector<std::vector<TermPtr>> out;
      for (const auto& r : rows)
        if (is_wild(r[0])) out.emplace_back(r.begin() + 1, r.end());
      if (out.empty()) return true;
      return wildcard_useful(std::move(out), rest);
    }
  }
}

bool exhaustive_family(const std::vector<TermPtr>& pats, const TypePtr& ty) {
  std::vector<std::vector<TermPtr>> rows;
  for (const auto& p : pats) rows.push_back({p});
  return !wildcard_useful(std::move(rows), {ty});
}

// ----------------------------------------------------------- the checker

void collect_free_vars(const TermPtr& t, std::set<std::string>& bound,
                       std::set<std::string>& out) {
  switch (t->tag) {
    case TermTag::Var:
      if (!bound.count(t->x)) out.insert(t->x);
      return;
    case TermTag::InL:
    case TermTag::InR:
    case TermTag::Fold:
    case TermTag::Next:
    case TermTag::App:
    case TermTag::DelayedApp:
      collect_free_vars(t->t0, bound, out);
      return;
    case TermTag::Pair:
      collect_free_vars(t->t0, bound, out);
      collect_free_vars(t->t1, bound, out);
      return;
    case TermTag::LetPair: {
      collect_free_vars(t->t0, bound, out);
      bool nx = bound.insert(t->x).second;
      bool ny = bound.insert(t->y).second;
      collect_free_vars(t->t1, bound, out);
      if (nx) bound.erase(t->x);
      if (ny) bound.erase(t->y);
      return;
    }
    default:
      return;
  }
}

std::string latency_note(int k) {
  return k == 1 ? "1 next" : std::to_string(k) + " nexts";
}

class Checker {
 public:
  Checker(const std::map<std::string, TypePtr>& aliases, TypeTables& tab)
      : aliases_(aliases), tab_(tab) {}

  struct Slot {
    TypePtr type;
    int latency = 0;
    int uses = 0;
    Pos pos;
  };
  struct TermEnv {
    std::map<std::string, Slot> vars;
    const std::map<std::string, TypePtr>* globals = nullptr;
  };
  using Psi = std::map<std::string, FunPtr>;

  FunPtr resolve_fun(const FunPtr& t) {
    if (aliases_.empty()) return t;
    switch (t->tag) {
      case FunTag::Iso:
        return ft_iso(resolve_named(t->a, aliases_), resolve_named(t->b, aliases_), t->pos);
      case FunTag::LaterF:
        return ft_later(resolve_fun(t->fa), t->pos);
      case FunTag::Arrow:
        return ft_arrow(resolve_fun(t->fa), resolve_fun(t->fb), t->pos);
    }
    return t;
  }

  // ---- patterns

  void infer_pattern(const TermPtr& p, const TypePtr& a, int latency,
                     std::vector<Binding>& out) {
    switch (p->tag) {
      case TermTag::Var: {
        for (const auto& b : out)
          if (b.name == p->x)
            throw CheckError(Errc::VarUsedTwice,
                             "pattern variable '" + p->x + "' is bound twice", p->pos);
        out.push_back(Binding{p->x, a, latency, p->pos});
        break;
      }
      case TermTag::Unit:
        if (a->tag != TypeTag::One) throw pattern_mismatch(p, a, "()");
        break;
      case TermTag::InL:
        if (a->tag != TypeTag::Sum) throw pattern_mismatch(p, a, "inl");
        infer_pattern(p->t0, a->a, latency, out);
        break;
      case TermTag::InR:
        if (a->tag != TypeTag::Sum) throw pattern_mismatch(p, a, "inr");
        infer_pattern(p->t0, a->b, latency, out);
        break;
      case TermTag::Pair:
        if (a->tag != TypeTag::Prod) throw pattern_mismatch(p, a, "a pair");
        infer_pattern(p->t0, a->a, latency, out);
        infer_pattern(p->t1, a->b, latency, out);
        break;
      case TermTag::Fold:
        if (a->tag != TypeTag::Mu) throw pattern_mismatch(p, a, "fold");
        infer_pattern(p->t0, subst_type(a->a, a->name, a), latency, out);
        break;
      case TermTag::Next:
        if (a->tag != TypeTag::Later) throw pattern_mismatch(p, a, "next");
        infer_pattern(p->t0, a->a, latency + 1, out);
        break;
      default:
        throw CheckError(Errc::InvalidPattern,
                         "only variables, (), inl, inr, pairs, fold and next may appear in a "
                         "pattern",
                         p->pos);
    }
    tab_.term_ty[p.get()] = a;
  }

  // ---- terms

  void term_check(TermEnv& env, const TermPtr& t, const TypePtr& a, int depth, const Psi& psi) {
    switch (t->tag) {
      case TermTag::Unit:
        if (a->tag != TypeTag::One)
          throw CheckError(Errc::TypeMismatch, "() has type 1, expected " + show_type(a), t->pos);
        break;
      case TermTag::Var: {
        TypePtr got = var_type(env, t, depth);
        if (!type_eq(got, a))
          throw CheckError(Errc::TypeMismatch,
                           "variable '" + t->x + "' has type " + show_type(got) + ", expected " +
                               show_type(a),
                           t->pos);
        break;
      }
      case TermTag::InL:
        if (a->tag != TypeTag::Sum)
          throw CheckError(Errc::TypeMismatch, "inl against non-sum type " + show_type(a), t->pos);
        term_check(env, t->t0, a->a, depth, psi);
        break;
      case TermTag::InR:
        if (a->tag != TypeTag::Sum)
          throw CheckError(Errc::TypeMismatch, "inr against non-sum type " + show_type(a), t->pos);
        term_check(env, t->t0, a->b, depth, psi);
        break;
      case TermTag::Pair:
        if (a->tag != TypeTag::Prod)
          throw CheckError(Errc::TypeMismatch, "pair against non-product type " + show_type(a),
                           t->pos);
        term_check(env, t->t0, a->a, depth, psi);
        term_check(env, t->t1, a->b, depth, psi);
        break;
      case TermTag::Fold:
        if (a->tag != TypeTag::Mu)
          throw CheckError(Errc::TypeMismatch, "fold against non-mu type " + show_type(a), t->pos);
        term_check(env, t->t0, subst_type(a->a, a->name, a), depth, psi);
        break;
      case TermTag::Next:
        if (a->tag != TypeTag::Later)
          throw CheckError(Errc::TypeMismatch, "next against non-@ type " + show_type(a), t->pos);
        term_check(env, t->t0, a->a, depth + 1, psi);
        break;
      case TermTag::App: {
        FunPtr fty;
        bool synthed = false;
        try {
          fty = iso_synth(t->iso, psi);
          synthed = true;
        } catch (const CheckError&) {
        }
        if (synthed) {
          if (fty->tag != FunTag::Iso)
            throw CheckError(Errc::NotAnIsoType,
                             "application needs an iso A <-> B, got " + show_funty(fty), t->pos);
          term_check(env, t->t0, fty->a, depth, psi);
          if (!type_eq(fty->b, a))
            throw CheckError(Errc::TypeMismatch,
                             "application produces " + show_type(fty->b) + ", expected " +
                                 show_type(a),
                             t->pos);
        } else {
          TypePtr aty = term_synth(env, t->t0, depth, psi);
          iso_check(t->iso, ft_iso(aty, a), psi);
        }
        break;
      }
      case TermTag::DelayedApp: {
        FunPtr fty;
        bool synthed = false;
        try {
          fty = iso_synth(t->iso, psi);
          synthed = true;
        } catch (const CheckError&) {
        }
        if (synthed) {
          require_delayed_iso(fty, t->pos);
          term_check(env, t->t0, t_later(fty->fa->a), depth, psi);
          if (!type_eq(t_later(fty->fa->b), a))
            throw CheckError(Errc::TypeMismatch,
                             "delayed application produces @" + show_type(fty->fa->b) +
                                 ", expected " + show_type(a),
                             t->pos);
        } else {
          if (a->tag != TypeTag::Later)
            throw CheckError(Errc::TypeMismatch,
                             "delayed application against non-@ type " + show_type(a), t->pos);
          TypePtr aty = term_synth(env, t->t0, depth, psi);
          if (aty->tag != TypeTag::Later)
            throw CheckError(Errc::TypeMismatch,
                             "delayed application argument has type " + show_type(aty) +
                                 ", expected a @-type",
                             t->t0->pos);
          iso_check(t->iso, ft_later(ft_iso(aty->a, a->a)), psi);
        }
        break;
      }
      case TermTag::LetPair: {
        TypePtr s = term_synth(env, t->t0, depth, psi);
        if (s->tag != TypeTag::Prod)
          throw CheckError(Errc::TypeMismatch,
                           "let (x, y) subject has type " + show_type(s) + ", not a product",
                           t->t0->pos);
        push_binder(env, t->x, s->a, depth, t->pos);
        push_binder(env, t->y, s->b, depth, t->pos);
        term_check(env, t->t1, a, depth, psi);
        pop_binder(env, t->y, t->pos);
        pop_binder(env, t->x, t->pos);
        break;
      }
      default:
        throw CheckError(Errc::Undefined, "internal: sugar node survived desugaring", t->pos);
    }
    tab_.term_ty[t.get()] = a;
  }

  TypePtr term_synth(TermEnv& env, const TermPtr& t, int depth, const Psi& psi) {
    TypePtr out;
    switch (t->tag) {
      case TermTag::Unit:
        out = t_one(t->pos);
        break;
      case TermTag::Var:
        out = var_type(env, t, depth);
        break;
      case TermTag::Pair:
        out = t_prod(term_synth(env, t->t0, depth, psi), term_synth(env, t->t1, depth, psi),
                     t->pos);
        break;
      case TermTag::Next:
        out = t_later(term_synth(env, t->t0, depth + 1, psi), t->pos);
        break;
      case TermTag::App: {
        FunPtr fty = iso_synth(t->iso, psi);
        if (fty->tag != FunTag::Iso)
          throw CheckError(Errc::NotAnIsoType,
                           "application needs an iso A <-> B, got " + show_funty(fty), t->pos);
        term_check(env, t->t0, fty->a, depth, psi);
        out = fty->b;
        break;
      }
      case TermTag::DelayedApp: {
        FunPtr fty = iso_synth(t->iso, psi);
        require_delayed_iso(fty, t->pos);
        term_check(env, t->t0, t_later(fty->fa->a), depth, psi);
        out = t_later(fty->fa->b);
        break;
      }
      case TermTag::LetPair: {
        TypePtr s = term_synth(env, t->t0, depth, psi);
        if (s->tag != TypeTag::Prod)
          throw CheckError(Errc::TypeMismatch,
                           "let (x, y) subject has type " + show_type(s) + ", not a product",
                           t->t0->pos);
        push_binder(env, t->x, s->a, depth, t->pos);
        push_binder(env, t->y, s->b, depth, t->pos);
        out = term_synth(env, t->t1, depth, psi);
        pop_binder(env, t->y, t->pos);
        pop_binder(env, t->x, t->pos);
        break;
      }
      default:
        throw CheckError(Errc::TypeMismatch,
                         "cannot infer a type for this term; it needs surrounding type "
                         "information",
                         t->pos);
    }
    tab_.term_ty[t.get()] = out;
    return out;
  }

  // ---- clause families

  void family(const IsoPtr& w, const TypePtr& a, const TypePtr& b, const Psi& psi) {
    const auto& cs = w->clauses;
    if (cs.empty())
      throw CheckError(Errc::InvalidPattern, "a clause family needs at least one clause", w->pos);

    ClauseInfo info;
    info.lhs_type = a;
    info.rhs_type = b;

    for (const auto& c : cs) {
      std::vector<Binding> delta;
      infer_pattern(c.lhs, a, 0, delta);

      std::set<std::string> lhs_names, rhs_names, bound;
      for (const auto& bn : delta) lhs_names.insert(bn.name);
      collect_free_vars(c.rhs, bound, rhs_names);
      if (lhs_names != rhs_names) {
        std::string msg = "the two sides of a clause must use the same variables;";
        for (const auto& n : lhs_names)
          if (!rhs_names.count(n)) msg += " '" + n + "' is only on the left;";
        for (const auto& n : rhs_names)
          if (!lhs_names.count(n)) msg += " '" + n + "' is only on the right;";
        msg.pop_back();
        throw CheckError(Errc::ClauseContextMismatch, msg, c.pos);
      }

      if (!same_depth(c.lhs, c.rhs))
        throw CheckError(Errc::DepthMismatch,
                         "the two sides of this clause do not have the same depth", c.pos);

      TermEnv env;
      for (const auto& bn : delta) env.vars[bn.name] = Slot{bn.type, bn.latency, 0, bn.pos};
      term_check(env, c.rhs, b, 0, psi);
      for (const auto& bn : delta)
        if (env.vars[bn.name].uses != 1)
          throw CheckError(Errc::VarUnused, "variable '" + bn.name + "' is never used", bn.pos);

      info.deltas.push_back(std::move(delta));
    }

    for (size_t i = 0; i < cs.size(); ++i)
      for (size_t j = i + 1; j < cs.size(); ++j) {
        if (!orthogonal(cs[i].lhs, cs[j].lhs))
          throw CheckError(Errc::OverlappingPatterns,
                           "left-hand sides of clauses " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " overlap",
                           cs[j].pos);
        if (!orthogonal(cs[i].rhs, cs[j].rhs))
          throw CheckError(Errc::OverlappingPatterns,
                           "right-hand sides of clauses " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " overlap",
                           cs[j].pos);
      }

    std::vector<TermPtr> lhs_pats, rhs_pats;
    for (const auto& c : cs) {
      lhs_pats.push_back(c.lhs);
      rhs_pats.push_back(c.rhs);
    }
    info.lhs_exhaustive = exhaustive_family(lhs_pats, a);
    info.rhs_exhaustive = exhaustive_family(rhs_pats, b);

    tab_.clause_info[w.get()] = std::move(info);
    tab_.iso_ty[w.get()] = ft_iso(a, b, w->pos);
  }

  // ---- isos

  void iso_check(const IsoPtr& w, const FunPtr& expected0, const Psi& psi) {
    FunPtr expected = resolve_fun(expected0);
    switch (w->tag) {
      case IsoTag::Clauses:
        if (expected->tag != FunTag::Iso)
          throw CheckError(Errc::NotAnIsoType,
                           "a clause family is a first-order iso; expected type is " +
                               show_funty(expected),
                           w->pos);
        family(w, expected->a, expected->b, psi);
        return;  // family records the entry
      case IsoTag::Lambda: {
        if (expected->tag != FunTag::Arrow)
          throw CheckError(Errc::TypeMismatch,
                           "a lambda has an arrow type, expected " + show_funty(expected), w->pos);
        FunPtr ann = resolve_fun(w->ann);
        if (!funty_eq(ann, expected->fa))
          throw CheckError(Errc::TypeMismatch,
                           "binder annotation " + show_funty(ann) +
                               " differs from the expected domain " + show_funty(expected->fa),
                           w->pos);
        Psi psi2 = psi;
        psi2[w->x] = ann;
        iso_check(w->i0, expected->fb, psi2);
        break;
      }
      case IsoTag::Fix: {
        FunPtr ann = resolve_fun(w->ann);
        if (!funty_eq(ann, expected))
          throw CheckError(Errc::TypeMismatch,
                           "fix is annotated " + show_funty(ann) + ", expected " +
                               show_funty(expected),
                           w->pos);
        Psi psi2 = psi;
        psi2[w->x] = ft_later(ann);
        iso_check(w->i0, ann, psi2);
        break;
      }
      case IsoTag::NextIso: {
        if (expected->tag != FunTag::LaterF)
          throw CheckError(Errc::TypeMismatch,
                           "next of an iso has a @-type, expected " + show_funty(expected),
                           w->pos);
        iso_check(w->i0, expected->fa, psi);
        break;
      }
      case IsoTag::AppIso: {
        FunPtr fty;
        bool synthed = false;
        try {
          fty = iso_synth(w->i0, psi);
          synthed = true;
        } catch (const CheckError&) {
        }
        if (synthed) {
          if (fty->tag != FunTag::Arrow)
            throw CheckError(Errc::TypeMismatch,
                             "applied expression has type " + show_funty(fty) +
                                 ", not a function",
                             w->pos);
          iso_check(w->i1, fty->fa, psi);
          if (!funty_eq(fty->fb, expected))
            throw CheckError(Errc::TypeMismatch,
                             "application produces " + show_funty(fty->fb) + ", expected " +
                                 show_funty(expected),
                             w->pos);
        } else {
          // un-annotated function position (a lambda redex): type the argument
          // first and push the expected type inward
          FunPtr aty = iso_synth(w->i1, psi);
          iso_check(w->i0, ft_arrow(aty, expected), psi);
        }
        break;
      }
      case IsoTag::DelayedAppIso: {
        FunPtr fty;
        bool synthed = false;
        try {
          fty = iso_synth(w->i0, psi);
          synthed = true;
        } catch (const CheckError&) {
        }
        if (synthed) {
          if (fty->tag != FunTag::LaterF || fty->fa->tag != FunTag::Arrow)
            throw CheckError(Errc::TypeMismatch,
                             "delayed application needs a function of type @(T1 -> T2), got " +
                                 show_funty(fty),
                             w->pos);
          iso_check(w->i1, ft_later(fty->fa->fa), psi);
          if (!funty_eq(ft_later(fty->fa->fb), expected))
            throw CheckError(Errc::TypeMismatch,
                             "delayed application produces " +
                                 show_funty(ft_later(fty->fa->fb)) + ", expected " +
                                 show_funty(expected),
                             w->pos);
        } else {
          // un-annotated delayed function (an unfolded fix body): type the
          // argument first and push the expected type inward
          if (expected->tag != FunTag::LaterF)
            throw CheckError(Errc::TypeMismatch,
                             "a delayed application has a @-type, expected " +
                                 show_funty(expected),
                             w->pos);
          FunPtr aty = iso_synth(w->i1, psi);
          if (aty->tag != FunTag::LaterF)
            throw CheckError(Errc::TypeMismatch,
                             "delayed argument has type " + show_funty(aty) +
                                 ", expected a @-type",
                             w->i1->pos);
          iso_check(w->i0, ft_later(ft_arrow(aty->fa, expected->fa)), psi);
        }
        break;
      }
      case IsoTag::ZeroIso: {
        if (!funty_eq(resolve_fun(w->ann), expected))
          throw CheckError(Errc::TypeMismatch,
                           "placeholder is annotated " + show_funty(resolve_fun(w->ann)) +
                               ", expected " + show_funty(expected),
                           w->pos);
        break;
      }
      default: {
        FunPtr got = iso_synth(w, psi);
        if (!funty_eq(got, expected))
          throw CheckError(Errc::TypeMismatch,
                           "this has type " + show_funty(got) + ", expected " +
                               show_funty(expected),
                           w->pos);
        return;  // iso_synth records the entry
      }
    }
    tab_.iso_ty[w.get()] = expected;
  }

  FunPtr iso_synth(const IsoPtr& w, const Psi& psi) {
    FunPtr out;
    switch (w->tag) {
      case IsoTag::FVar: {
        auto it = psi.find(w->x);
        if (it == psi.end())
          throw CheckError(Errc::UnknownName, "undeclared iso '" + w->x + "'", w->pos);
        out = it->second;
        break;
      }
      case IsoTag::Lambda: {
        FunPtr ann = resolve_fun(w->ann);
        Psi psi2 = psi;
        psi2[w->x] = ann;
        out = ft_arrow(ann, iso_synth(w->i0, psi2), w->pos);
        break;
      }
      case IsoTag::Fix: {
        FunPtr ann = resolve_fun(w->ann);
        Psi psi2 = psi;
        psi2[w->x] = ft_later(ann);
        iso_check(w->i0, ann, psi2);
        out = ann;
        break;
      }
      case IsoTag::NextIso:
        out = ft_later(iso_synth(w->i0, psi), w->pos);
        break;
      case IsoTag::ZeroIso:
        out = resolve_fun(w->ann);
        break;
      case IsoTag::AppIso: {
        if (w->i0->tag == IsoTag::Lambda) {
          // redex: the binder annotation types the argument directly
          FunPtr ann = resolve_fun(w->i0->ann);
          iso_check(w->i1, ann, psi);
          Psi psi2 = psi;
          psi2[w->i0->x] = ann;
          out = iso_synth(w->i0->i0, psi2);
          tab_.iso_ty[w->i0.get()] = ft_arrow(ann, out, w->i0->pos);
        } else {
          FunPtr fty = iso_synth(w->i0, psi);
          if (fty->tag != FunTag::Arrow)
            throw CheckError(Errc::TypeMismatch,
                             "applied expression has type " + show_funty(fty) +
                                 ", not a function",
                             w->pos);
          iso_check(w->i1, fty->fa, psi);
          out = fty->fb;
        }
        break;
      }
      case IsoTag::DelayedAppIso: {
        FunPtr fty = iso_synth(w->i0, psi);
        if (fty->tag != FunTag::LaterF || fty->fa->tag != FunTag::Arrow)
          throw CheckError(Errc::TypeMismatch,
                           "delayed application needs a function of type @(T1 -> T2), got " +
                               show_funty(fty),
                           w->pos);
        iso_check(w->i1, ft_later(fty->fa->fa), psi);
        out = ft_later(fty->fa->fb, w->pos);
        break;
      }
      case IsoTag::Clauses: {
        // only the composition shape { x <-> w1 (w2 (... x)) } synthesizes
        if (w->clauses.size() == 1 && w->clauses[0].lhs->tag == TermTag::Var) {
          std::vector<IsoPtr> spine;
          TermPtr cur = w->clauses[0].rhs;
          while (cur->tag == TermTag::App) {
            spine.push_back(cur->iso);
            cur = cur->t0;
          }
          if (!spine.empty() && cur->tag == TermTag::Var && cur->x == w->clauses[0].lhs->x) {
            FunPtr inner = iso_synth(spine.back(), psi);
            if (inner->tag != FunTag::Iso)
              throw CheckError(Errc::NotAnIsoType,
                               "composition needs isos A <-> B, got " + show_funty(inner),
                               spine.back()->pos);
            TypePtr dom = inner->a, cod = inner->b;
            for (size_t k = spine.size() - 1; k-- > 0;) {
              FunPtr step = iso_synth(spine[k], psi);
              if (step->tag != FunTag::Iso)
                throw CheckError(Errc::NotAnIsoType,
                                 "composition needs isos A <-> B, got " + show_funty(step),
                                 spine[k]->pos);
              if (!type_eq(step->a, cod))
                throw CheckError(Errc::TypeMismatch,
                                 "composition mismatch: " + show_type(cod) + " flows into an iso "
                                 "expecting " + show_type(step->a),
                                 spine[k]->pos);
              cod = step->b;
            }
            family(w, dom, cod, psi);
            out = ft_iso(dom, cod, w->pos);
            break;
          }
        }
        throw CheckError(Errc::TypeMismatch,
                         "cannot infer a type for this clause family; give it a declared type",
                         w->pos);
      }
      default:
        throw CheckError(Errc::Undefined, "internal: sugar node survived desugaring", w->pos);
    }
    tab_.iso_ty[w.get()] = out;
    return out;
  }

 private:
  static CheckError pattern_mismatch(const TermPtr& p, const TypePtr& a, const char* what) {
    return CheckError(Errc::TypeMismatch,
                      std::string("pattern ") + what + " does not match type " + show_type(a),
                      p->pos);
  }

  static void require_delayed_iso(const FunPtr& fty, Pos pos) {
    if (fty->tag != FunTag::LaterF || fty->fa->tag != FunTag::Iso)
      throw CheckError(Errc::NotAnIsoType,
                       "delayed application needs an iso of type @(A <-> B), got " +
                           show_funty(fty),
                       pos);
  }

  TypePtr var_type(TermEnv& env, const TermPtr& t, int depth) {
    auto it = env.vars.find(t->x);
    if (it != env.vars.end()) {
      Slot& s = it->second;
      if (s.latency != depth)
        throw CheckError(Errc::LatencyMismatch,
                         "variable '" + t->x + "' has latency " + std::to_string(s.latency) +
                             " but occurs under " + latency_note(depth),
                         t->pos);
      if (++s.uses > 1)
        throw CheckError(Errc::VarUsedTwice, "variable '" + t->x + "' is used more than once",
                         t->pos);
      return s.type;
    }
    if (env.globals) {
      auto g = env.globals->find(t->x);
      if (g != env.globals->end()) return g->second;
    }
    throw CheckError(Errc::UnboundVar, "unbound variable '" + t->x + "'", t->pos);
  }

  void push_binder(TermEnv& env, const std::string& x, const TypePtr& ty, int depth, Pos pos) {
    if (env.vars.count(x))
      throw CheckError(Errc::VarUsedTwice, "let binder '" + x + "' shadows an existing variable",
                       pos);
    env.vars[x] = Slot{ty, depth, 0, pos};
  }

  void pop_binder(TermEnv& env, const std::string& x, Pos pos) {
    auto it = env.vars.find(x);
    if (it->second.uses != 1)
      throw CheckError(Errc::VarUnused, "let binder '" + x + "' is never used", pos);
    env.vars.erase(it);
  }

  const std::map<std::string, TypePtr>& aliases_;
  TypeTables& tab_;
};

const std::map<std::string, TypePtr>& no_aliases() {
  static const std::map<std::string, TypePtr> empty;
  return empty;
}

}  // namespace

// ------------------------------------------------------------- public API

void check_clause_family(const IsoPtr& clauses, const TypePtr& a, const TypePtr& b,
                         const std::map<std::string, FunPtr>& psi, TypeTables& tables) {
  if (clauses->tag != IsoTag::Clauses)
    throw CheckError(Errc::Undefined, "internal: check_clause_family on a non-clause iso",
                     clauses->pos);
  Checker ck(no_aliases(), tables);
  ck.family(clauses, a, b, psi);
}

void check_iso_expr(const IsoPtr& w, const FunPtr& expected,
                    const std::map<std::string, FunPtr>& psi, TypeTables& tables) {
  Checker ck(no_aliases(), tables);
  ck.iso_check(w, expected, psi);
}

FunPtr synth_iso_expr(const IsoPtr& w, const std::map<std::string, FunPtr>& psi,
                      TypeTables& tables) {
  Checker ck(no_aliases(), tables);
  return ck.iso_synth(w, psi);
}

void check_closed_term(const TermPtr& t, const TypePtr& a,
                       const std::map<std::string, FunPtr>& psi,
                       const std::map<std::string, TypePtr>& globals, TypeTables& tables) {
  Checker ck(no_aliases(), tables);
  Checker::TermEnv env;
  env.globals = &globals;
  ck.term_check(env, t, a, 0, psi);
}

CheckedProgram check_program(const Program& desugared) {
  CheckedProgram out;
  out.prog = desugared;
  out.iso_types = builtin_iso_types();

  std::set<std::string> names;
  for (const auto& kv : out.iso_types) names.insert(kv.first);

  Checker ck(out.aliases, out.tables);
  for (const Decl& d : desugared.decls) {
    if (!names.insert(d.name).second)
      throw CheckError(Errc::DuplicateDecl,
                       "'" + d.name + "' is already declared (or is a builtin)", d.pos);
    switch (d.kind) {
      case DeclKind::Type: {
        TypePtr body = resolve_named(d.type, out.aliases);
        wf_type({}, body);
        out.aliases[d.name] = body;
        break;
      }
      case DeclKind::Iso: {
        FunPtr ann = ck.resolve_fun(d.funty);
        wf_funty(ann);
        ck.iso_check(d.iso, ann, out.iso_types);
        out.iso_types[d.name] = ann;
        break;
      }
      case DeclKind::Term: {
        TypePtr ann = resolve_named(d.type, out.aliases);
        wf_type({}, ann);
        Checker::TermEnv env;
        env.globals = &out.term_types;
        ck.term_check(env, d.term, ann, 0, out.iso_types);
        out.term_types[d.name] = ann;
        break;
      }
    }
  }
  return out;
}

}  // namespace gpm
