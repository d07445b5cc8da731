#include "gpm/eval.hpp"

#include <climits>
#include <stdexcept>

#include "gpm/diagnostics.hpp"

namespace gpm {

namespace {

ValuePtr mk(Value v) { return std::make_shared<const Value>(std::move(v)); }

ValuePtr force_payload(const ValuePtr& p, int budget, const IsoGlobals& globals) {
  if (p->tag == Value::Tag::Thunk) return eval(p->tterm, *p->tenv, budget, globals);
  return p;
}

// The iso one step under next: strips the NextIso off a delayed application
// head, expanding named references and absorbing zero placeholders.
IsoPtr delayed_inner(const IsoPtr& w, int budget, const IsoGlobals& globals) {
  IsoPtr nf = normalize_fun(w, budget, globals);
  while (nf->tag == IsoTag::FVar) {
    auto it = globals.find(nf->x);
    if (it == globals.end() || !it->second.body)
      throw CheckError(Errc::NonClassicalIso,
                       "builtin iso '" + nf->x + "' cannot be evaluated classically",
                       nf->pos);
    nf = normalize_fun(it->second.body, budget, globals);
  }
  if (nf->tag == IsoTag::NextIso) return nf->i0;
  if (nf->tag == IsoTag::ZeroIso && nf->ann->tag == FunTag::LaterF)
    return w_zeroiso(nf->ann->fa, nf->pos);
  throw std::logic_error("eval: delayed application head did not reduce");
}

}  // namespace

ValuePtr v_unit() { return mk({Value::Tag::Unit, nullptr, nullptr, nullptr, nullptr}); }
ValuePtr v_inl(ValuePtr a) {
  return mk({Value::Tag::Inl, std::move(a), nullptr, nullptr, nullptr});
}
ValuePtr v_inr(ValuePtr a) {
  return mk({Value::Tag::Inr, std::move(a), nullptr, nullptr, nullptr});
}
ValuePtr v_pair(ValuePtr a, ValuePtr b) {
  return mk({Value::Tag::Pair, std::move(a), std::move(b), nullptr, nullptr});
}
ValuePtr v_fold(ValuePtr a) {
  return mk({Value::Tag::Fold, std::move(a), nullptr, nullptr, nullptr});
}
ValuePtr v_next(ValuePtr payload) {
  return mk({Value::Tag::Next, std::move(payload), nullptr, nullptr, nullptr});
}
ValuePtr v_thunk(TermPtr t, std::shared_ptr<const ValEnv> env) {
  return mk({Value::Tag::Thunk, nullptr, nullptr, std::move(t), std::move(env)});
}

bool value_eq(const ValuePtr& x, const ValuePtr& y) {
  if (x.get() == y.get()) return true;
  if (x->tag != y->tag) return false;
  switch (x->tag) {
    case Value::Tag::Unit:
      return true;
    case Value::Tag::Inl:
    case Value::Tag::Inr:
    case Value::Tag::Fold:
    case Value::Tag::Next:
      return value_eq(x->a, y->a);
    case Value::Tag::Pair:
      return value_eq(x->a, y->a) && value_eq(x->b, y->b);
    case Value::Tag::Thunk:
      return false;
  }
  return false;
}

int next_depth(const ValuePtr& v) {
  switch (v->tag) {
    case Value::Tag::Unit:
      return 0;
    case Value::Tag::Inl:
    case Value::Tag::Inr:
    case Value::Tag::Fold:
      return next_depth(v->a);
    case Value::Tag::Pair:
      return std::max(next_depth(v->a), next_depth(v->b));
    case Value::Tag::Next: {
      int d = next_depth(v->a);
      return d >= INT_MAX / 2 ? d : 1 + d;
    }
    case Value::Tag::Thunk:
      return INT_MAX / 2;
  }
  return 0;
}

ValuePtr eval(const TermPtr& t, const ValEnv& env, int budget,
              const IsoGlobals& globals) {
  switch (t->tag) {
    case TermTag::Unit:
      return v_unit();
    case TermTag::Var: {
      auto it = env.find(t->x);
      if (it == env.end())
        throw std::logic_error("eval: unbound variable '" + t->x + "'");
      if (it->second->tag == Value::Tag::Thunk)
        return eval(it->second->tterm, *it->second->tenv, budget, globals);
      return it->second;
    }
    case TermTag::InL:
      return v_inl(eval(t->t0, env, budget, globals));
    case TermTag::InR:
      return v_inr(eval(t->t0, env, budget, globals));
    case TermTag::Pair:
      return v_pair(eval(t->t0, env, budget, globals),
                    eval(t->t1, env, budget, globals));
    case TermTag::Fold:
      return v_fold(eval(t->t0, env, budget, globals));
    case TermTag::LetPair: {
      ValuePtr s = eval(t->t0, env, budget, globals);
      if (s->tag != Value::Tag::Pair)
        throw std::logic_error("eval: let-pair subject is not a pair");
      ValEnv e2 = env;
      e2[t->x] = s->a;
      e2[t->y] = s->b;
      return eval(t->t1, e2, budget, globals);
    }
    case TermTag::Next:
      if (budget <= 0)
        return v_next(v_thunk(t->t0, std::make_shared<const ValEnv>(env)));
      return v_next(eval(t->t0, env, budget - 1, globals));
    case TermTag::App:
      return apply_iso(t->iso, eval(t->t0, env, budget, globals), budget, globals);
    case TermTag::DelayedApp: {
      ValuePtr s = eval(t->t0, env, budget, globals);
      if (s->tag != Value::Tag::Next)
        throw std::logic_error("eval: delayed application argument is not delayed");
      IsoPtr inner = delayed_inner(t->iso, budget, globals);
      if (budget <= 0) {
        auto e = std::make_shared<const ValEnv>(ValEnv{{"$arg", s->a}});
        return v_next(v_thunk(m_app(inner, m_var("$arg", t->pos), t->pos), e));
      }
      ValuePtr pv = force_payload(s->a, budget - 1, globals);
      return v_next(apply_iso(inner, pv, budget - 1, globals));
    }
    case TermTag::EmptyList:
    case TermTag::Cons:
    case TermTag::Lit0:
    case TermTag::Lit1:
      throw std::logic_error("eval: surface sugar reached the evaluator");
  }
  throw std::logic_error("eval: bad term tag");
}

ValuePtr apply_iso(const IsoPtr& w, const ValuePtr& v, int budget,
                   const IsoGlobals& globals) {
  IsoPtr nf = normalize_fun(w, budget, globals);
  while (nf->tag == IsoTag::FVar) {
    auto it = globals.find(nf->x);
    if (it == globals.end() || !it->second.body)
      throw CheckError(Errc::NonClassicalIso,
                       "builtin iso '" + nf->x + "' cannot be evaluated classically",
                       nf->pos);
    nf = normalize_fun(it->second.body, budget, globals);
  }
  if (nf->tag == IsoTag::ZeroIso)
    throw CheckError(Errc::StuckMatch, "value outside the iso's domain", w->pos);
  if (nf->tag != IsoTag::Clauses)
    throw std::logic_error("eval: iso did not normalize to clauses");
  for (const auto& c : nf->clauses) {
    auto binds = match_pattern(c.lhs, v, budget, globals);
    if (binds) return eval(c.rhs, *binds, budget, globals);
  }
  throw CheckError(Errc::StuckMatch,
                   "no clause matched " + show_value(v), nf->pos);
}

namespace {

bool match_rec(const TermPtr& p, const ValuePtr& v, int budget,
               const IsoGlobals& globals, ValEnv& out) {
  switch (p->tag) {
    case TermTag::Var:
      out[p->x] = v;
      return true;
    case TermTag::Unit:
      return v->tag == Value::Tag::Unit;
    case TermTag::InL:
      return v->tag == Value::Tag::Inl && match_rec(p->t0, v->a, budget, globals, out);
    case TermTag::InR:
      return v->tag == Value::Tag::Inr && match_rec(p->t0, v->a, budget, globals, out);
    case TermTag::Pair:
      return v->tag == Value::Tag::Pair &&
             match_rec(p->t0, v->a, budget, globals, out) &&
             match_rec(p->t1, v->b, budget, globals, out);
    case TermTag::Fold:
      return v->tag == Value::Tag::Fold && match_rec(p->t0, v->a, budget, globals, out);
    case TermTag::Next: {
      if (v->tag != Value::Tag::Next) return false;
      ValuePtr payload = v->a;
      if (p->t0->tag == TermTag::Var) {
        out[p->t0->x] = payload;  // may stay a thunk
        return true;
      }
      if (payload->tag == Value::Tag::Thunk) {
        if (budget <= 0)
          throw CheckError(Errc::StuckMatch,
                           "matching under next needs more budget", p->pos);
        payload = eval(payload->tterm, *payload->tenv, budget - 1, globals);
      }
      return match_rec(p->t0, payload, budget - 1, globals, out);
    }
    default:
      throw CheckError(Errc::InvalidPattern,
                       "clause side used as a pattern is not a pattern", p->pos);
  }
}

}  // namespace

std::optional<ValEnv> match_pattern(const TermPtr& p, const ValuePtr& v,
                                    int budget, const IsoGlobals& globals) {
  ValEnv out;
  if (!match_rec(p, v, budget, globals, out)) return std::nullopt;
  return out;
}

ValuePtr force_value(const ValuePtr& v, int depth, const IsoGlobals& globals) {
  switch (v->tag) {
    case Value::Tag::Unit:
      return v;
    case Value::Tag::Inl:
      return v_inl(force_value(v->a, depth, globals));
    case Value::Tag::Inr:
      return v_inr(force_value(v->a, depth, globals));
    case Value::Tag::Fold:
      return v_fold(force_value(v->a, depth, globals));
    case Value::Tag::Pair:
      return v_pair(force_value(v->a, depth, globals),
                    force_value(v->b, depth, globals));
    case Value::Tag::Next: {
      if (depth <= 0) return v;
      ValuePtr p = v->a;
      if (p->tag == Value::Tag::Thunk)
        p = eval(p->tterm, *p->tenv, depth - 1, globals);
      return v_next(force_value(p, depth - 1, globals));
    }
    case Value::Tag::Thunk:
      return v;  // only reachable at the top level, which callers avoid
  }
  return v;
}

IsoPtr reverse_clauses(const IsoPtr& w) {
  if (w->tag != IsoTag::Clauses)
    throw std::logic_error("reverse_clauses: not a clause family");
  std::vector<Clause> cs;
  cs.reserve(w->clauses.size());
  for (const auto& c : w->clauses) cs.push_back(Clause{c.rhs, c.lhs, c.pos});
  return w_clauses(std::move(cs), w->pos);
}

namespace {

bool atomic_value(const ValuePtr& v) {
  switch (v->tag) {
    case Value::Tag::Unit:
    case Value::Tag::Pair:
    case Value::Tag::Thunk:
      return true;
    case Value::Tag::Inl:
    case Value::Tag::Inr:
      return v->a->tag == Value::Tag::Unit;  // '0 / '1
    case Value::Tag::Fold:
      return v->a->tag == Value::Tag::Inl &&
             v->a->a->tag == Value::Tag::Unit;  // []
    case Value::Tag::Next:
      return false;
  }
  return false;
}

std::string show_rec(const ValuePtr& v) {
  switch (v->tag) {
    case Value::Tag::Unit:
      return "()";
    case Value::Tag::Inl:
      if (v->a->tag == Value::Tag::Unit) return "'0";
      return atomic_value(v->a) ? "inl " + show_rec(v->a)
                                : "inl (" + show_rec(v->a) + ")";
    case Value::Tag::Inr:
      if (v->a->tag == Value::Tag::Unit) return "'1";
      return atomic_value(v->a) ? "inr " + show_rec(v->a)
                                : "inr (" + show_rec(v->a) + ")";
    case Value::Tag::Pair:
      return "(" + show_rec(v->a) + ", " + show_rec(v->b) + ")";
    case Value::Tag::Fold: {
      const ValuePtr& u = v->a;
      if (u->tag == Value::Tag::Inl && u->a->tag == Value::Tag::Unit) return "[]";
      if (u->tag == Value::Tag::Inr && u->a->tag == Value::Tag::Pair &&
          u->a->b->tag == Value::Tag::Next) {
        const ValuePtr& h = u->a->a;
        const ValuePtr& tl = u->a->b->a;
        std::string hs = atomic_value(h) ? show_rec(h) : "(" + show_rec(h) + ")";
        if (tl->tag == Value::Tag::Thunk) return hs + " :: next _";
        std::string ts = show_rec(tl);
        return hs + " :: next " + (atomic_value(tl) ? ts : "(" + ts + ")");
      }
      return atomic_value(u) ? "fold " + show_rec(u) : "fold (" + show_rec(u) + ")";
    }
    case Value::Tag::Next: {
      if (v->a->tag == Value::Tag::Thunk) return "next _";
      std::string s = show_rec(v->a);
      return "next " + (atomic_value(v->a) ? s : "(" + s + ")");
    }
    case Value::Tag::Thunk:
      return "_";
  }
  return "?";
}

}  // namespace

std::string show_value(const ValuePtr& v) { return show_rec(v); }

}  // namespace gpm
