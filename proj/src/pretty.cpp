#include "gpm/pretty.hpp"

#include <sstream>

namespace gpm {

namespace {

// Type precedence: mu = 0, sum = 1, prod = 2, @/atom = 3.
void ty(std::ostringstream& os, const TypePtr& t, int ctx) {
  switch (t->tag) {
    case TypeTag::Zero: os << "0"; return;
    case TypeTag::One: os << "1"; return;
    case TypeTag::TVar:
    case TypeTag::Named: os << t->name; return;
    case TypeTag::Mu: {
      bool par = ctx > 0;
      if (par) os << "(";
      os << "mu " << t->name << " . ";
      ty(os, t->a, 0);
      if (par) os << ")";
      return;
    }
    case TypeTag::Sum: {
      bool par = ctx > 1;
      if (par) os << "(";
      ty(os, t->a, 1);
      os << " + ";
      ty(os, t->b, 2);
      if (par) os << ")";
      return;
    }
    case TypeTag::Prod: {
      bool par = ctx > 2;
      if (par) os << "(";
      ty(os, t->a, 2);
      os << " * ";
      ty(os, t->b, 3);
      if (par) os << ")";
      return;
    }
    case TypeTag::Later:
      // "@ @X" with a space: the lexer would read "@@" as the delayed
      // application operator.
      os << (t->a->tag == TypeTag::Later ? "@ " : "@");
      ty(os, t->a, 3);
      return;
  }
}

// Fun type precedence: -> = 0, <-> = 1, @ = 2.
void fty(std::ostringstream& os, const FunPtr& t, int ctx) {
  switch (t->tag) {
    case FunTag::Arrow: {
      bool par = ctx > 0;
      if (par) os << "(";
      fty(os, t->fa, 1);
      os << " -> ";
      fty(os, t->fb, 0);
      if (par) os << ")";
      return;
    }
    case FunTag::Iso: {
      bool par = ctx > 1;
      if (par) os << "(";
      ty(os, t->a, 0);
      os << " <-> ";
      ty(os, t->b, 0);
      if (par) os << ")";
      return;
    }
    case FunTag::LaterF:
      os << (t->fa->tag == FunTag::LaterF ? "@ " : "@");
      fty(os, t->fa, 2);
      return;
  }
}

// Expression precedence, shared by terms and isos:
// :: = 0, @@ = 1, << = 2, application = 3, prefix = 4, atom = 5.
// let/lambda/fix extend maximally right and print at level 0.
void tm(std::ostringstream& os, const TermPtr& t, int ctx);
void is(std::ostringstream& os, const IsoPtr& w, int ctx);

void tm(std::ostringstream& os, const TermPtr& t, int ctx) {
  switch (t->tag) {
    case TermTag::Unit: os << "()"; return;
    case TermTag::Var: os << t->x; return;
    case TermTag::EmptyList: os << "[]"; return;
    case TermTag::Lit0: os << "'0"; return;
    case TermTag::Lit1: os << "'1"; return;
    case TermTag::Pair:
      os << "(";
      tm(os, t->t0, 0);
      os << ", ";
      tm(os, t->t1, 0);
      os << ")";
      return;
    case TermTag::Cons: {
      bool par = ctx > 0;
      if (par) os << "(";
      tm(os, t->t0, 1);
      os << " :: ";
      tm(os, t->t1, 0);
      if (par) os << ")";
      return;
    }
    case TermTag::DelayedApp: {
      bool par = ctx > 1;
      if (par) os << "(";
      is(os, t->iso, 1);
      os << " @@ ";
      tm(os, t->t0, 2);
      if (par) os << ")";
      return;
    }
    case TermTag::App: {
      bool par = ctx > 3;
      if (par) os << "(";
      is(os, t->iso, 3);
      os << " ";
      tm(os, t->t0, 4);
      if (par) os << ")";
      return;
    }
    case TermTag::InL:
    case TermTag::InR:
    case TermTag::Fold:
    case TermTag::Next: {
      bool par = ctx > 4;
      if (par) os << "(";
      os << (t->tag == TermTag::InL    ? "inl "
             : t->tag == TermTag::InR  ? "inr "
             : t->tag == TermTag::Fold ? "fold "
                                       : "next ");
      tm(os, t->t0, 4);
      if (par) os << ")";
      return;
    }
    case TermTag::LetPair: {
      bool par = ctx > 0;
      if (par) os << "(";
      os << "let (" << t->x << ", " << t->y << ") = ";
      tm(os, t->t0, 0);
      os << " in ";
      tm(os, t->t1, 0);
      if (par) os << ")";
      return;
    }
  }
}

void is(std::ostringstream& os, const IsoPtr& w, int ctx) {
  switch (w->tag) {
    case IsoTag::FVar: os << w->x; return;
    case IsoTag::Clauses: {
      os << "{ ";
      bool first = true;
      for (const auto& c : w->clauses) {
        if (!first) os << " | ";
        first = false;
        tm(os, c.lhs, 0);
        os << " <-> ";
        tm(os, c.rhs, 0);
      }
      os << " }";
      return;
    }
    case IsoTag::Compose: {
      bool par = ctx > 2;
      if (par) os << "(";
      is(os, w->i0, 2);
      os << " << ";
      is(os, w->i1, 3);
      if (par) os << ")";
      return;
    }
    case IsoTag::DelayedAppIso: {
      bool par = ctx > 1;
      if (par) os << "(";
      is(os, w->i0, 1);
      os << " @@ ";
      is(os, w->i1, 2);
      if (par) os << ")";
      return;
    }
    case IsoTag::AppIso: {
      bool par = ctx > 3;
      if (par) os << "(";
      is(os, w->i0, 3);
      os << " ";
      is(os, w->i1, 4);
      if (par) os << ")";
      return;
    }
    case IsoTag::NextIso: {
      bool par = ctx > 4;
      if (par) os << "(";
      os << "next ";
      is(os, w->i0, 4);
      if (par) os << ")";
      return;
    }
    case IsoTag::Lambda:
    case IsoTag::Fix: {
      bool par = ctx > 0;
      if (par) os << "(";
      os << (w->tag == IsoTag::Lambda ? "\\" : "fix ") << w->x << " : ";
      fty(os, w->ann, 0);
      os << " . ";
      is(os, w->i0, 0);
      if (par) os << ")";
      return;
    }
    case IsoTag::ZeroIso:
      // Internal placeholder; shows up only in debug dumps, never re-parsed.
      os << "<zero-iso>";
      return;
  }
}

}  // namespace

std::string show_type(const TypePtr& t) {
  std::ostringstream os;
  ty(os, t, 0);
  return os.str();
}

std::string show_funty(const FunPtr& t) {
  std::ostringstream os;
  fty(os, t, 0);
  return os.str();
}

std::string show_term(const TermPtr& t) {
  std::ostringstream os;
  tm(os, t, 0);
  return os.str();
}

std::string show_iso(const IsoPtr& w) {
  std::ostringstream os;
  is(os, w, 0);
  return os.str();
}

std::string show_program(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.decls) {
    switch (d.kind) {
      case DeclKind::Type:
        os << "type " << d.name << " = " << show_type(d.type) << ";\n";
        break;
      case DeclKind::Iso:
        os << "iso " << d.name << " : " << show_funty(d.funty) << " = "
           << show_iso(d.iso) << ";\n";
        break;
      case DeclKind::Term:
        os << "term " << d.name << " : " << show_type(d.type) << " = "
           << show_term(d.term) << ";\n";
        break;
    }
  }
  return os.str();
}

}  // namespace gpm
