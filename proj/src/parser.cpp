#include "gpm/parser.hpp"

#include <set>

#include "gpm/diagnostics.hpp"
#include "gpm/lexer.hpp"

namespace gpm {

const std::vector<std::string>& builtin_iso_names() {
  static const std::vector<std::string> names = {"had", "rot2", "rot3", "rotgrad"};
  return names;
}

namespace {

// Either a term or an iso, depending on which pointer is set.
struct EObj {
  TermPtr t;
  IsoPtr w;
  Pos pos;
  bool is_term() const { return t != nullptr; }
};

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {
    for (const auto& b : builtin_iso_names()) iso_scope_.insert(b);
  }

  Program program() {
    Program p;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      Decl d = decl();
      if (!names.insert(d.name).second)
        throw CheckError(Errc::DuplicateDecl, "redeclaration of '" + d.name + "'", d.pos);
      p.decls.push_back(std::move(d));
    }
    return p;
  }

  TypePtr type_only() {
    TypePtr t = type();
    expect(Tok::End, "after type");
    return t;
  }

  FunPtr funty_only() {
    FunPtr t = funty();
    expect(Tok::End, "after function type");
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t at_ = 0;
  std::set<std::string> iso_scope_;
  std::set<std::string> term_scope_;
  std::vector<std::string> mu_stack_;
  bool pattern_mode_ = false;
  std::set<std::string>* pattern_vars_ = nullptr;

  const Token& peek(int k = 0) const {
    size_t j = at_ + k;
    return toks_[j < toks_.size() ? j : toks_.size() - 1];
  }
  Token take() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }
  Token expect(Tok k, const std::string& ctx) {
    if (!at(k))
      throw CheckError(Errc::ParseError,
                       std::string("expected ") + tok_name(k) + " " + ctx + ", got " +
                           tok_name(peek().kind),
                       peek().pos);
    return take();
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw CheckError(Errc::ParseError, msg, peek().pos);
  }

  // ---------------------------------------------------------------- decls

  Decl decl() {
    Pos p = peek().pos;
    if (eat(Tok::KwType)) {
      std::string name = expect(Tok::Ident, "after 'type'").text;
      expect(Tok::Eq, "in type declaration");
      TypePtr body = type();
      expect(Tok::Semi, "after type declaration");
      return Decl{DeclKind::Type, name, body, nullptr, nullptr, nullptr, p};
    }
    if (eat(Tok::KwIso)) {
      std::string name = expect(Tok::Ident, "after 'iso'").text;
      expect(Tok::Colon, "in iso declaration");
      FunPtr ann = funty();
      expect(Tok::Eq, "in iso declaration");
      IsoPtr body = iso_expr();
      expect(Tok::Semi, "after iso declaration");
      iso_scope_.insert(name);
      return Decl{DeclKind::Iso, name, nullptr, ann, body, nullptr, p};
    }
    if (eat(Tok::KwTerm)) {
      std::string name = expect(Tok::Ident, "after 'term'").text;
      expect(Tok::Colon, "in term declaration");
      TypePtr ann = type();
      expect(Tok::Eq, "in term declaration");
      TermPtr body = term_expr();
      expect(Tok::Semi, "after term declaration");
      term_scope_.insert(name);
      return Decl{DeclKind::Term, name, ann, nullptr, nullptr, body, p};
    }
    fail("expected a 'type', 'iso' or 'term' declaration");
  }

  // ---------------------------------------------------------------- types

  TypePtr type() {
    if (at(Tok::KwMu)) return type_mu();
    return type_sum();
  }

  TypePtr type_mu() {
    Pos p = take().pos;  // 'mu'
    std::string x = expect(Tok::Ident, "after 'mu'").text;
    expect(Tok::Dot, "after mu binder");
    mu_stack_.push_back(x);
    TypePtr body = type();
    mu_stack_.pop_back();
    return t_mu(x, body, p);
  }

  TypePtr type_sum() {
    TypePtr t = type_prod();
    while (at(Tok::Plus)) {
      Pos p = take().pos;
      t = t_sum(t, type_prod(), p);
    }
    return t;
  }

  TypePtr type_prod() {
    TypePtr t = type_atom();
    while (at(Tok::Star)) {
      Pos p = take().pos;
      t = t_prod(t, type_atom(), p);
    }
    return t;
  }

  TypePtr type_atom() {
    Pos p = peek().pos;
    if (eat(Tok::At)) return t_later(type_atom(), p);
    if (at(Tok::KwMu)) return type_mu();
    if (at(Tok::Num)) return take().text == "0" ? t_zero(p) : t_one(p);
    if (eat(Tok::LParen)) {
      TypePtr t = type();
      expect(Tok::RParen, "closing a type");
      return t;
    }
    if (at(Tok::Ident)) {
      std::string name = take().text;
      for (auto it = mu_stack_.rbegin(); it != mu_stack_.rend(); ++it)
        if (*it == name) return t_tvar(name, p);
      return t_named(name, p);
    }
    fail("expected a type");
  }

  // ------------------------------------------------------------- fun types

  FunPtr funty() {
    FunPtr a = funty_atom();
    if (at(Tok::Arrow)) {
      Pos p = take().pos;
      return ft_arrow(a, funty(), p);
    }
    return a;
  }

  FunPtr funty_atom() {
    Pos p = peek().pos;
    // First try "type <-> type": a leading @ or ( may belong to the left
    // type rather than to the function type, so this branch must win when
    // it parses.
    size_t save = at_;
    try {
      TypePtr a = type();
      expect(Tok::IsoArrow, "in iso type");
      TypePtr b = type();
      return ft_iso(a, b, p);
    } catch (const CheckError&) {
      at_ = save;
    }
    if (eat(Tok::At)) return ft_later(funty_atom(), p);
    if (eat(Tok::LParen)) {
      FunPtr t = funty();
      expect(Tok::RParen, "closing a function type");
      return t;
    }
    fail("expected a function type");
  }

  // ----------------------------------------------------------- expressions

  TermPtr term_expr() {
    EObj e = expr();
    if (!e.is_term())
      throw CheckError(Errc::ParseError, "expected a term, found an iso expression",
                       e.pos);
    return e.t;
  }

  IsoPtr iso_expr() {
    EObj e = expr();
    if (e.is_term())
      throw CheckError(Errc::ParseError, "expected an iso, found a term", e.pos);
    return e.w;
  }

  EObj expr() { return cons_level(); }

  EObj cons_level() {
    EObj h = dapp_level();
    if (at(Tok::ConsOp)) {
      Pos p = take().pos;
      EObj t = cons_level();
      if (!h.is_term() || !t.is_term())
        throw CheckError(Errc::ParseError, "'::' joins two terms", p);
      return {m_cons(h.t, t.t, p), nullptr, h.pos};
    }
    return h;
  }

  EObj dapp_level() {
    EObj f = compose_level();
    while (at(Tok::AtAt)) {
      Pos p = take().pos;
      if (f.is_term())
        throw CheckError(Errc::ParseError, "left operand of '@@' must be an iso", p);
      EObj a = compose_level();
      if (a.is_term())
        f = {m_dapp(f.w, a.t, p), nullptr, f.pos};
      else
        f = {nullptr, w_dappiso(f.w, a.w, p), f.pos};
    }
    return f;
  }

  EObj compose_level() {
    EObj f = app_level();
    while (at(Tok::ComposeOp)) {
      Pos p = take().pos;
      EObj g = app_level();
      if (f.is_term() || g.is_term())
        throw CheckError(Errc::ParseError, "'<<' composes two isos", p);
      f = {nullptr, w_compose(f.w, g.w, p), f.pos};
    }
    return f;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::LParen:
      case Tok::LBrace:
      case Tok::Nil:
      case Tok::Bit0:
      case Tok::Bit1:
      case Tok::Ident:
      case Tok::Backslash:
      case Tok::KwLet:
      case Tok::KwFix:
      case Tok::KwInl:
      case Tok::KwInr:
      case Tok::KwFold:
      case Tok::KwNext:
        return true;
      default:
        return false;
    }
  }

  EObj app_level() {
    EObj f = prefix();
    while (starts_atom()) {
      EObj a = prefix();
      if (f.is_term())
        throw CheckError(Errc::ParseError,
                         "a term cannot be applied to an argument (did you mean an "
                         "iso here?)",
                         a.pos);
      if (a.is_term())
        f = {m_app(f.w, a.t, a.pos), nullptr, f.pos};
      else
        f = {nullptr, w_appiso(f.w, a.w, a.pos), f.pos};
    }
    return f;
  }

  EObj prefix() {
    Pos p = peek().pos;
    if (eat(Tok::KwInl)) return {m_inl(operand("inl"), p), nullptr, p};
    if (eat(Tok::KwInr)) return {m_inr(operand("inr"), p), nullptr, p};
    if (eat(Tok::KwFold)) return {m_fold(operand("fold"), p), nullptr, p};
    if (eat(Tok::KwNext)) {
      EObj a = prefix();
      if (a.is_term()) return {m_next(a.t, p), nullptr, p};
      return {nullptr, w_nextiso(a.w, p), p};
    }
    return atom();
  }

  TermPtr operand(const char* who) {
    EObj a = prefix();
    if (!a.is_term())
      throw CheckError(Errc::ParseError,
                       std::string("'") + who + "' takes a term operand", a.pos);
    return a.t;
  }

  EObj atom() {
    Pos p = peek().pos;
    switch (peek().kind) {
      case Tok::Nil:
        take();
        return {m_nil(p), nullptr, p};
      case Tok::Bit0:
        take();
        return {m_lit0(p), nullptr, p};
      case Tok::Bit1:
        take();
        return {m_lit1(p), nullptr, p};
      case Tok::LParen: {
        take();
        if (eat(Tok::RParen)) return {m_unit(p), nullptr, p};
        EObj first = expr();
        if (eat(Tok::Comma)) {
          EObj second = expr();
          expect(Tok::RParen, "closing a pair");
          if (!first.is_term() || !second.is_term())
            throw CheckError(Errc::ParseError, "pair components must be terms", p);
          return {m_pair(first.t, second.t, p), nullptr, p};
        }
        expect(Tok::RParen, "closing a parenthesis");
        return first;
      }
      case Tok::LBrace:
        return clauses();
      case Tok::Backslash: {
        take();
        std::string x = expect(Tok::Ident, "after '\\'").text;
        expect(Tok::Colon, "after lambda binder (annotation required)");
        FunPtr ann = funty();
        expect(Tok::Dot, "after lambda annotation");
        bool fresh = iso_scope_.insert(x).second;
        IsoPtr body = iso_expr();
        if (fresh) iso_scope_.erase(x);
        return {nullptr, w_lambda(x, ann, body, p), p};
      }
      case Tok::KwFix: {
        take();
        std::string x = expect(Tok::Ident, "after 'fix'").text;
        expect(Tok::Colon, "after fix binder (annotation required)");
        FunPtr ann = funty();
        expect(Tok::Dot, "after fix annotation");
        bool fresh = iso_scope_.insert(x).second;
        IsoPtr body = iso_expr();
        if (fresh) iso_scope_.erase(x);
        return {nullptr, w_fix(x, ann, body, p), p};
      }
      case Tok::KwLet: {
        take();
        expect(Tok::LParen, "after 'let'");
        std::string x = expect(Tok::Ident, "as first let binder").text;
        expect(Tok::Comma, "between let binders");
        std::string y = expect(Tok::Ident, "as second let binder").text;
        expect(Tok::RParen, "after let binders");
        expect(Tok::Eq, "in let");
        TermPtr subj = term_expr();
        expect(Tok::KwIn, "in let");
        if (pattern_mode_ && pattern_vars_) {
          pattern_vars_->insert(x);
          pattern_vars_->insert(y);
        }
        bool fx = term_scope_.insert(x).second;
        bool fy = term_scope_.insert(y).second;
        TermPtr body = term_expr();
        if (fx) term_scope_.erase(x);
        if (fy) term_scope_.erase(y);
        return {m_letpair(x, y, subj, body, p), nullptr, p};
      }
      case Tok::Ident: {
        std::string name = take().text;
        if (pattern_mode_) {
          if (pattern_vars_) pattern_vars_->insert(name);
          return {m_var(name, p), nullptr, p};
        }
        if (term_scope_.count(name)) return {m_var(name, p), nullptr, p};
        if (iso_scope_.count(name)) return {nullptr, w_fvar(name, p), p};
        // Unknown names default to term variables; the typechecker reports
        // them as unbound with a better context than the parser could.
        return {m_var(name, p), nullptr, p};
      }
      default:
        fail("expected an expression");
    }
  }

  EObj clauses() {
    Pos p = expect(Tok::LBrace, "opening clauses").pos;
    bool outer_mode = pattern_mode_;
    std::set<std::string>* outer_vars = pattern_vars_;
    std::vector<Clause> cs;
    do {
      Pos cp = peek().pos;
      std::set<std::string> vars;
      pattern_mode_ = true;
      pattern_vars_ = &vars;
      TermPtr lhs = term_expr();
      pattern_mode_ = outer_mode;
      pattern_vars_ = outer_vars;
      expect(Tok::IsoArrow, "between clause sides");
      std::vector<std::string> added;
      for (const auto& v : vars)
        if (term_scope_.insert(v).second) added.push_back(v);
      TermPtr rhs = term_expr();
      for (const auto& v : added) term_scope_.erase(v);
      cs.push_back(Clause{lhs, rhs, cp});
    } while (eat(Tok::Bar));
    expect(Tok::RBrace, "closing clauses");
    return {nullptr, w_clauses(std::move(cs), p), p};
  }
};

}  // namespace

Program parse_program(const std::string& src) { return Parser(src).program(); }

TypePtr parse_type_string(const std::string& src) { return Parser(src).type_only(); }

FunPtr parse_funty_string(const std::string& src) { return Parser(src).funty_only(); }

}  // namespace gpm
