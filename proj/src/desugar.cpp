#include "gpm/desugar.hpp"

#include <map>
#include <set>

#include "gpm/diagnostics.hpp"
#include "gpm/parser.hpp"

namespace gpm {

TermPtr desugar_term(const TermPtr& t) {
  if (!t) return t;
  switch (t->tag) {
    case TermTag::Unit:
    case TermTag::Var:
      return t;
    case TermTag::EmptyList:
      return m_fold(m_inl(m_unit(t->pos), t->pos), t->pos);
    case TermTag::Lit0:
      return m_inl(m_unit(t->pos), t->pos);
    case TermTag::Lit1:
      return m_inr(m_unit(t->pos), t->pos);
    case TermTag::Cons:
      return m_fold(
          m_inr(m_pair(desugar_term(t->t0), desugar_term(t->t1), t->pos), t->pos),
          t->pos);
    case TermTag::InL:
      return m_inl(desugar_term(t->t0), t->pos);
    case TermTag::InR:
      return m_inr(desugar_term(t->t0), t->pos);
    case TermTag::Pair:
      return m_pair(desugar_term(t->t0), desugar_term(t->t1), t->pos);
    case TermTag::LetPair:
      return m_letpair(t->x, t->y, desugar_term(t->t0), desugar_term(t->t1), t->pos);
    case TermTag::Fold:
      return m_fold(desugar_term(t->t0), t->pos);
    case TermTag::Next:
      return m_next(desugar_term(t->t0), t->pos);
    case TermTag::App:
      return m_app(desugar_iso(t->iso), desugar_term(t->t0), t->pos);
    case TermTag::DelayedApp:
      return m_dapp(desugar_iso(t->iso), desugar_term(t->t0), t->pos);
  }
  return t;
}

IsoPtr desugar_iso(const IsoPtr& w) {
  if (!w) return w;
  switch (w->tag) {
    case IsoTag::FVar:
    case IsoTag::ZeroIso:
      return w;
    case IsoTag::Clauses: {
      std::vector<Clause> cs;
      cs.reserve(w->clauses.size());
      for (const auto& c : w->clauses)
        cs.push_back(Clause{desugar_term(c.lhs), desugar_term(c.rhs), c.pos});
      return w_clauses(std::move(cs), w->pos);
    }
    case IsoTag::Lambda:
      return w_lambda(w->x, w->ann, desugar_iso(w->i0), w->pos);
    case IsoTag::Fix:
      return w_fix(w->x, w->ann, desugar_iso(w->i0), w->pos);
    case IsoTag::AppIso:
      return w_appiso(desugar_iso(w->i0), desugar_iso(w->i1), w->pos);
    case IsoTag::NextIso:
      return w_nextiso(desugar_iso(w->i0), w->pos);
    case IsoTag::DelayedAppIso:
      return w_dappiso(desugar_iso(w->i0), desugar_iso(w->i1), w->pos);
    case IsoTag::Compose: {
      // f << g  ==>  { x <-> f (g x) }
      IsoPtr f = desugar_iso(w->i0);
      IsoPtr g = desugar_iso(w->i1);
      TermPtr x = m_var("x", w->pos);
      TermPtr rhs = m_app(f, m_app(g, x, w->pos), w->pos);
      return w_clauses({Clause{x, rhs, w->pos}}, w->pos);
    }
  }
  return w;
}

Program desugar_program(const Program& p) {
  Program out;
  out.decls.reserve(p.decls.size());
  for (const auto& d : p.decls) {
    Decl nd = d;
    if (nd.iso) nd.iso = desugar_iso(nd.iso);
    if (nd.term) nd.term = desugar_term(nd.term);
    out.decls.push_back(std::move(nd));
  }
  return out;
}

namespace {

class Resolver {
 public:
  Program run(const Program& p) {
    for (const auto& b : builtin_iso_names()) builtin_.insert(b);
    Program out;
    for (const auto& d : p.decls) {
      Decl nd = d;
      switch (d.kind) {
        case DeclKind::Type:
          nd.type = type(d.type);
          aliases_[d.name] = nd.type;
          break;
        case DeclKind::Iso: {
          nd.funty = funty(d.funty);
          std::set<std::string> ibound;
          nd.iso = iso(d.iso, ibound);
          break;
        }
        case DeclKind::Term: {
          nd.type = type(d.type);
          std::set<std::string> tbound, ibound;
          nd.term = term(d.term, tbound, ibound);
          terms_[d.name] = nd.term;
          break;
        }
      }
      out.decls.push_back(std::move(nd));
    }
    return out;
  }

 private:
  std::map<std::string, TypePtr> aliases_;
  std::map<std::string, TermPtr> terms_;
  std::set<std::string> builtin_;

  TypePtr type(const TypePtr& t) {
    if (!t) return t;
    switch (t->tag) {
      case TypeTag::Zero:
      case TypeTag::One:
      case TypeTag::TVar:
        return t;
      case TypeTag::Named: {
        auto it = aliases_.find(t->name);
        if (it == aliases_.end())
          throw CheckError(Errc::UnknownName, "unknown type name '" + t->name + "'",
                           t->pos);
        return it->second;
      }
      case TypeTag::Sum:
        return t_sum(type(t->a), type(t->b), t->pos);
      case TypeTag::Prod:
        return t_prod(type(t->a), type(t->b), t->pos);
      case TypeTag::Later:
        return t_later(type(t->a), t->pos);
      case TypeTag::Mu:
        return t_mu(t->name, type(t->a), t->pos);
    }
    return t;
  }

  FunPtr funty(const FunPtr& f) {
    if (!f) return f;
    switch (f->tag) {
      case FunTag::Iso:
        return ft_iso(type(f->a), type(f->b), f->pos);
      case FunTag::LaterF:
        return ft_later(funty(f->fa), f->pos);
      case FunTag::Arrow:
        return ft_arrow(funty(f->fa), funty(f->fb), f->pos);
    }
    return f;
  }

  static void pattern_vars(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->tag == TermTag::Var) {
      out.insert(t->x);
      return;
    }
    pattern_vars(t->t0, out);
    pattern_vars(t->t1, out);
  }

  TermPtr term(const TermPtr& t, std::set<std::string>& tbound,
               std::set<std::string>& ibound) {
    if (!t) return t;
    switch (t->tag) {
      case TermTag::Unit:
      case TermTag::EmptyList:
      case TermTag::Lit0:
      case TermTag::Lit1:
        return t;
      case TermTag::Var: {
        if (tbound.count(t->x)) return t;
        auto it = terms_.find(t->x);
        return it == terms_.end() ? t : it->second;
      }
      case TermTag::InL:
        return m_inl(term(t->t0, tbound, ibound), t->pos);
      case TermTag::InR:
        return m_inr(term(t->t0, tbound, ibound), t->pos);
      case TermTag::Fold:
        return m_fold(term(t->t0, tbound, ibound), t->pos);
      case TermTag::Next:
        return m_next(term(t->t0, tbound, ibound), t->pos);
      case TermTag::Pair:
      case TermTag::Cons: {
        TermPtr a = term(t->t0, tbound, ibound), b = term(t->t1, tbound, ibound);
        return t->tag == TermTag::Pair ? m_pair(a, b, t->pos) : m_cons(a, b, t->pos);
      }
      case TermTag::LetPair: {
        TermPtr subj = term(t->t0, tbound, ibound);
        bool fx = tbound.insert(t->x).second;
        bool fy = tbound.insert(t->y).second;
        TermPtr body = term(t->t1, tbound, ibound);
        if (fx) tbound.erase(t->x);
        if (fy) tbound.erase(t->y);
        return m_letpair(t->x, t->y, subj, body, t->pos);
      }
      case TermTag::App:
      case TermTag::DelayedApp: {
        IsoPtr f = iso(t->iso, ibound);
        TermPtr a = term(t->t0, tbound, ibound);
        return t->tag == TermTag::App ? m_app(f, a, t->pos) : m_dapp(f, a, t->pos);
      }
    }
    return t;
  }

  IsoPtr iso(const IsoPtr& w, std::set<std::string>& ibound) {
    if (!w) return w;
    switch (w->tag) {
      case IsoTag::FVar:
        // Iso declarations stay as named references; the semantics layer
        // resolves them through its global environment so that clause
        // families keep their declared types across normalization.
        return w;
      case IsoTag::ZeroIso:
        return w_zeroiso(funty(w->ann), w->pos);
      case IsoTag::Clauses: {
        std::vector<Clause> cs;
        cs.reserve(w->clauses.size());
        for (const auto& c : w->clauses) {
          std::set<std::string> vars;  // pattern binders shadow global terms
          pattern_vars(c.lhs, vars);
          cs.push_back(
              Clause{term(c.lhs, vars, ibound), term(c.rhs, vars, ibound), c.pos});
        }
        return w_clauses(std::move(cs), w->pos);
      }
      case IsoTag::Lambda:
      case IsoTag::Fix: {
        bool fresh = ibound.insert(w->x).second;
        IsoPtr body = iso(w->i0, ibound);
        if (fresh) ibound.erase(w->x);
        FunPtr ann = funty(w->ann);
        return w->tag == IsoTag::Lambda ? w_lambda(w->x, ann, body, w->pos)
                                        : w_fix(w->x, ann, body, w->pos);
      }
      case IsoTag::AppIso:
        return w_appiso(iso(w->i0, ibound), iso(w->i1, ibound), w->pos);
      case IsoTag::NextIso:
        return w_nextiso(iso(w->i0, ibound), w->pos);
      case IsoTag::DelayedAppIso:
        return w_dappiso(iso(w->i0, ibound), iso(w->i1, ibound), w->pos);
      case IsoTag::Compose:
        return w_compose(iso(w->i0, ibound), iso(w->i1, ibound), w->pos);
    }
    return w;
  }
};

}  // namespace

Program resolve_program(const Program& p) { return Resolver().run(p); }

}  // namespace gpm
