#include "gpm/normalize.hpp"

#include <stdexcept>

namespace gpm {

namespace {

void fiv_iso(const IsoPtr& w, std::set<std::string>& bound,
             std::set<std::string>& out);

void fiv_term(const TermPtr& t, std::set<std::string>& bound,
              std::set<std::string>& out) {
  if (!t) return;
  if (t->tag == TermTag::App || t->tag == TermTag::DelayedApp)
    fiv_iso(t->iso, bound, out);
  fiv_term(t->t0, bound, out);
  fiv_term(t->t1, bound, out);
}

void fiv_iso(const IsoPtr& w, std::set<std::string>& bound,
             std::set<std::string>& out) {
  if (!w) return;
  switch (w->tag) {
    case IsoTag::FVar:
      if (!bound.count(w->x)) out.insert(w->x);
      return;
    case IsoTag::ZeroIso:
      return;
    case IsoTag::Clauses:
      for (const auto& c : w->clauses) {
        fiv_term(c.lhs, bound, out);
        fiv_term(c.rhs, bound, out);
      }
      return;
    case IsoTag::Lambda:
    case IsoTag::Fix: {
      bool fresh = bound.insert(w->x).second;
      fiv_iso(w->i0, bound, out);
      if (fresh) bound.erase(w->x);
      return;
    }
    case IsoTag::NextIso:
      fiv_iso(w->i0, bound, out);
      return;
    case IsoTag::AppIso:
    case IsoTag::DelayedAppIso:
    case IsoTag::Compose:
      fiv_iso(w->i0, bound, out);
      fiv_iso(w->i1, bound, out);
      return;
  }
}

TermPtr subst_term(const TermPtr& t, const std::string& x, const IsoPtr& v);

IsoPtr subst(const IsoPtr& w, const std::string& x, const IsoPtr& v) {
  if (!w) return w;
  switch (w->tag) {
    case IsoTag::FVar:
      return w->x == x ? v : w;
    case IsoTag::ZeroIso:
      return w;
    case IsoTag::Clauses: {
      std::vector<Clause> cs;
      cs.reserve(w->clauses.size());
      for (const auto& c : w->clauses)
        cs.push_back(Clause{subst_term(c.lhs, x, v), subst_term(c.rhs, x, v), c.pos});
      return w_clauses(std::move(cs), w->pos);
    }
    case IsoTag::Lambda:
    case IsoTag::Fix: {
      if (w->x == x) return w;  // shadowed
      std::string binder = w->x;
      IsoPtr body = w->i0;
      if (free_iso_vars(v).count(binder)) {
        // rename the binder away from the free variables of v and the body
        std::set<std::string> avoid = free_iso_vars(v);
        for (const auto& s : free_iso_vars(body)) avoid.insert(s);
        std::string fresh = binder;
        do fresh += "'";
        while (avoid.count(fresh));
        body = subst(body, binder, w_fvar(fresh, w->pos));
        binder = fresh;
      }
      body = subst(body, x, v);
      return w->tag == IsoTag::Lambda ? w_lambda(binder, w->ann, body, w->pos)
                                      : w_fix(binder, w->ann, body, w->pos);
    }
    case IsoTag::NextIso:
      return w_nextiso(subst(w->i0, x, v), w->pos);
    case IsoTag::AppIso:
      return w_appiso(subst(w->i0, x, v), subst(w->i1, x, v), w->pos);
    case IsoTag::DelayedAppIso:
      return w_dappiso(subst(w->i0, x, v), subst(w->i1, x, v), w->pos);
    case IsoTag::Compose:
      return w_compose(subst(w->i0, x, v), subst(w->i1, x, v), w->pos);
  }
  return w;
}

TermPtr subst_term(const TermPtr& t, const std::string& x, const IsoPtr& v) {
  if (!t) return t;
  switch (t->tag) {
    case TermTag::Unit:
    case TermTag::Var:
    case TermTag::EmptyList:
    case TermTag::Lit0:
    case TermTag::Lit1:
      return t;
    case TermTag::InL:
      return m_inl(subst_term(t->t0, x, v), t->pos);
    case TermTag::InR:
      return m_inr(subst_term(t->t0, x, v), t->pos);
    case TermTag::Fold:
      return m_fold(subst_term(t->t0, x, v), t->pos);
    case TermTag::Next:
      return m_next(subst_term(t->t0, x, v), t->pos);
    case TermTag::Pair:
      return m_pair(subst_term(t->t0, x, v), subst_term(t->t1, x, v), t->pos);
    case TermTag::Cons:
      return m_cons(subst_term(t->t0, x, v), subst_term(t->t1, x, v), t->pos);
    case TermTag::LetPair:
      return m_letpair(t->x, t->y, subst_term(t->t0, x, v),
                       subst_term(t->t1, x, v), t->pos);
    case TermTag::App:
      return m_app(subst(t->iso, x, v), subst_term(t->t0, x, v), t->pos);
    case TermTag::DelayedApp:
      return m_dapp(subst(t->iso, x, v), subst_term(t->t0, x, v), t->pos);
  }
  return t;
}

struct Norm {
  int n;
  const IsoGlobals* globals;

  // Expand a named global when it blocks a reduction position.
  IsoPtr expanded(const IsoPtr& w) {
    if (w->tag == IsoTag::FVar) {
      auto it = globals->find(w->x);
      if (it != globals->end() && it->second.body) return go(it->second.body);
    }
    return w;
  }

  IsoPtr go(const IsoPtr& w) {
    switch (w->tag) {
      case IsoTag::FVar:
      case IsoTag::Clauses:
      case IsoTag::ZeroIso:
      case IsoTag::Lambda:
        return w;
      case IsoTag::AppIso: {
        IsoPtr f = expanded(go(w->i0));
        IsoPtr a = go(w->i1);
        if (f->tag == IsoTag::Lambda) return go(subst(f->i0, f->x, a));
        if (f->tag == IsoTag::ZeroIso && f->ann->tag == FunTag::Arrow)
          return w_zeroiso(f->ann->fb, w->pos);
        throw std::logic_error("normalize: application head is not a function");
      }
      case IsoTag::Fix:
        return iterate(w, n + 1, w_zeroiso(w->ann, w->pos));
      case IsoTag::NextIso: {
        IsoPtr b = go(w->i0);
        if (b->tag == IsoTag::ZeroIso)
          return w_zeroiso(ft_later(b->ann, w->pos), w->pos);
        return w_nextiso(b, w->pos);
      }
      case IsoTag::DelayedAppIso: {
        IsoPtr f = expanded(go(w->i0));
        IsoPtr a = expanded(go(w->i1));
        if (f->tag == IsoTag::ZeroIso) {
          FunPtr lat = f->ann;  // @(T1 -> T2)
          if (lat->tag != FunTag::LaterF || lat->fa->tag != FunTag::Arrow)
            throw std::logic_error("normalize: bad delayed application type");
          return w_zeroiso(ft_later(lat->fa->fb, w->pos), w->pos);
        }
        if (f->tag == IsoTag::NextIso) {
          if (a->tag == IsoTag::NextIso)
            return go(w_nextiso(w_appiso(f->i0, a->i0, w->pos), w->pos));
          if (a->tag == IsoTag::ZeroIso) {
            FunPtr la = a->ann;  // @T1
            if (la->tag != FunTag::LaterF)
              throw std::logic_error("normalize: bad delayed argument type");
            return go(w_nextiso(
                w_appiso(f->i0, w_zeroiso(la->fa, a->pos), w->pos), w->pos));
          }
          throw std::logic_error("normalize: delayed argument did not reduce");
        }
        throw std::logic_error("normalize: delayed application head did not reduce");
      }
      case IsoTag::Compose:
        throw std::logic_error("normalize: composition sugar survived desugaring");
    }
    return w;
  }

  IsoPtr iterate(const IsoPtr& fx, int k, IsoPtr placeholder) {
    IsoPtr u = std::move(placeholder);
    for (int j = 0; j < k; ++j)
      u = go(subst(fx->i0, fx->x, w_nextiso(u, fx->pos)));
    return u;
  }
};

}  // namespace

std::set<std::string> free_iso_vars(const IsoPtr& w) {
  std::set<std::string> bound, out;
  fiv_iso(w, bound, out);
  return out;
}

IsoPtr subst_iso(const IsoPtr& w, const std::string& x, const IsoPtr& v) {
  return subst(w, x, v);
}

IsoPtr normalize_fun(const IsoPtr& w, int n, const IsoGlobals& globals) {
  Norm nm{n, &globals};
  return nm.go(w);
}

IsoPtr iterate_fix(const IsoPtr& fix_node, int k, const IsoPtr& placeholder,
                   int n, const IsoGlobals& globals) {
  if (fix_node->tag != IsoTag::Fix)
    throw std::logic_error("iterate_fix: not a fix expression");
  Norm nm{n, &globals};
  return nm.iterate(fix_node, k, placeholder);
}

}  // namespace gpm
