#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "gpm/ast.hpp"
#include "gpm/desugar.hpp"
#include "gpm/diagnostics.hpp"
#include "gpm/parser.hpp"
#include "gpm/pretty.hpp"

using namespace gpm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Errc parse_errc(const std::string& src) {
  try {
    parse_program(src);
  } catch (const CheckError& e) {
    return e.diag.code;
  }
  FAIL("expected a parse error");
  return Errc::ParseError;
}

}  // namespace

TEST_CASE("type parsing: precedence and structure") {
  TypePtr t = parse_type_string("1 + 1 * @X");
  REQUIRE(t->tag == TypeTag::Sum);
  CHECK(t->a->tag == TypeTag::One);
  REQUIRE(t->b->tag == TypeTag::Prod);
  CHECK(t->b->b->tag == TypeTag::Later);
  CHECK(t->b->b->a->tag == TypeTag::Named);  // free names are alias references

  TypePtr m = parse_type_string("mu X . 1 + (1+1) * @X");
  REQUIRE(m->tag == TypeTag::Mu);
  CHECK(m->name == "X");
  CHECK(m->a->b->b->a->tag == TypeTag::TVar);  // bound occurrence
  CHECK(type_eq(m, parse_type_string("mu Y . 1 + (1 + 1) * @Y")));
  CHECK_FALSE(type_eq(m, parse_type_string("mu X . 1 + @X")));

  CHECK(parse_type_string("@ @ 1")->a->tag == TypeTag::Later);
  CHECK(parse_type_string("((0))")->tag == TypeTag::Zero);
}

TEST_CASE("function type parsing") {
  FunPtr f = parse_funty_string("(1+1) <-> (1+1)");
  REQUIRE(f->tag == FunTag::Iso);
  CHECK(type_eq(f->a, f->b));

  FunPtr a = parse_funty_string("((1 <-> 1)) -> (@1 <-> @1)");
  REQUIRE(a->tag == FunTag::Arrow);
  CHECK(a->fa->tag == FunTag::Iso);
  REQUIRE(a->fb->tag == FunTag::Iso);
  CHECK(a->fb->a->tag == TypeTag::Later);

  FunPtr l = parse_funty_string("@(1 <-> 1)");
  REQUIRE(l->tag == FunTag::LaterF);
  CHECK(l->fa->tag == FunTag::Iso);

  // -> associates to the right
  FunPtr rr = parse_funty_string("(1 <-> 1) -> (1 <-> 1) -> (1 <-> 1)");
  REQUIRE(rr->tag == FunTag::Arrow);
  CHECK(rr->fb->tag == FunTag::Arrow);
}

TEST_CASE("pretty printer round-trips through the parser") {
  for (const char* s : {"0", "1", "1 + 1", "mu X . 1 + (1+1) * @X",
                        "mu X . 1 + @X", "@(1 * (0 + 1))",
                        "mu X . 1 + @X * (1 + @ @ X)"}) {
    TypePtr t = parse_type_string(s);
    CHECK(type_eq(t, parse_type_string(show_type(t))));
  }
  for (const char* s :
       {"(1+1) <-> (1+1)", "@((1+1) <-> 1)",
        "((1+1) <-> (1+1)) -> ((1+1) <-> (1+1)) -> (1 <-> 1)"}) {
    FunPtr t = parse_funty_string(s);
    CHECK(funty_eq(t, parse_funty_string(show_funty(t))));
  }
}

TEST_CASE("term sugar desugars to the kernel forms") {
  Program p = parse_program(
      "type B = 1 + 1;\n"
      "type LB = mu X . 1 + B * @X;\n"
      "term t : LB = '0 :: next ('1 :: next []);\n");
  Program d = desugar_program(p);
  const Decl* td = find_decl(d, "t");
  REQUIRE(td != nullptr);
  // '0 :: u  ==>  fold (inr (inl (), u))
  const TermPtr& t = td->term;
  REQUIRE(t->tag == TermTag::Fold);
  REQUIRE(t->t0->tag == TermTag::InR);
  REQUIRE(t->t0->t0->tag == TermTag::Pair);
  CHECK(t->t0->t0->t0->tag == TermTag::InL);
  CHECK(t->t0->t0->t0->t0->tag == TermTag::Unit);
  REQUIRE(t->t0->t0->t1->tag == TermTag::Next);
  // [] ==> fold (inl ())
  TermPtr inner = t->t0->t0->t1->t0;         // '1 :: next []
  TermPtr nil = inner->t0->t0->t1->t0;       // []
  CHECK(nil->tag == TermTag::Fold);
  CHECK(nil->t0->tag == TermTag::InL);
  CHECK(nil->t0->t0->tag == TermTag::Unit);
  CHECK(term_eq(nil, m_fold(m_inl(m_unit()))));
}

TEST_CASE("composition sugar becomes a clause family") {
  Program p = parse_program(
      "type B = 1 + 1;\n"
      "iso f : B <-> B = { x <-> x };\n"
      "iso g : B <-> B = { x <-> x };\n"
      "iso h : B <-> B = f << g;\n");
  Program d = desugar_program(p);
  const Decl* hd = find_decl(d, "h");
  REQUIRE(hd != nullptr);
  REQUIRE(hd->iso->tag == IsoTag::Clauses);
  REQUIRE(hd->iso->clauses.size() == 1);
  const Clause& c = hd->iso->clauses[0];
  CHECK(c.lhs->tag == TermTag::Var);
  REQUIRE(c.rhs->tag == TermTag::App);  // f (g x)
  CHECK(c.rhs->iso->tag == IsoTag::FVar);
  CHECK(c.rhs->t0->tag == TermTag::App);
}

TEST_CASE("iso versus term classification follows declarations") {
  // applying a declared iso to a term is fine; applying a term is not
  parse_program("type B = 1 + 1;\niso f : B <-> B = { x <-> x };\n"
                "term t : B = f '0;\n");
  CHECK(parse_errc("type B = 1 + 1;\nterm t : B = g '0;\n") == Errc::ParseError);
  // iso arguments to @@ must be delayed applications of isos
  parse_program("type B = 1 + 1;\niso f : @B <-> @B = { u <-> u };\n");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_program("type B = 1 +\n;");
    FAIL("expected a parse error");
  } catch (const CheckError& e) {
    CHECK(e.diag.code == Errc::ParseError);
    CHECK(e.diag.pos.line >= 1);
  }
  CHECK(parse_errc("term t : 1 = (;") == Errc::ParseError);
  CHECK(parse_errc("iso f : 1 <-> 1 = { x <-> };") == Errc::ParseError);
  CHECK(parse_errc("type T = 2;") == Errc::ParseError);  // numerals are 0/1 only
  CHECK(parse_errc("iso f : 1 <-> 1 = { x <-> x }") == Errc::ParseError);  // missing ;
}

TEST_CASE("clause families parse with | separators and patterns bind variables") {
  Program p = parse_program(
      "type B = 1 + 1;\n"
      "iso f : B <-> B = { inl u <-> inr u | inr u <-> inl u };\n");
  const Decl* d = find_decl(p, "f");
  REQUIRE(d->iso->tag == IsoTag::Clauses);
  CHECK(d->iso->clauses.size() == 2);
  CHECK(d->iso->clauses[0].lhs->tag == TermTag::InL);
  CHECK(d->iso->clauses[0].lhs->t0->tag == TermTag::Var);
}

TEST_CASE("demo programs parse and desugar") {
  for (const char* f : {"/flip.gpm", "/map.gpm", "/nats.gpm", "/qctrl.gpm",
                        "/rot.gpm", "/qft.gpm"}) {
    Program p = parse_program(slurp(std::string(GPM_DEMO_DIR) + f));
    CHECK(p.decls.size() >= 2);
    Program d = desugar_program(p);
    // desugaring is idempotent
    Program d2 = desugar_program(d);
    for (size_t i = 0; i < d.decls.size(); ++i) {
      if (d.decls[i].kind == DeclKind::Iso)
        CHECK(iso_eq(d.decls[i].iso, d2.decls[i].iso));
      if (d.decls[i].kind == DeclKind::Term)
        CHECK(term_eq(d.decls[i].term, d2.decls[i].term));
    }
  }
}

TEST_CASE("let pairs and delayed application parse") {
  Program p = parse_program(
      "type B = 1 + 1;\n"
      "iso f : B * B <-> B * B = { p <-> let (a, b) = p in (b, a) };\n");
  const Decl* d = find_decl(p, "f");
  const Clause& c = d->iso->clauses[0];
  REQUIRE(c.rhs->tag == TermTag::LetPair);
  CHECK(c.rhs->x == "a");
  CHECK(c.rhs->y == "b");
  REQUIRE(c.rhs->t1->tag == TermTag::Pair);
}
