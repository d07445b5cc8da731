#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "gpm/driver.hpp"

using namespace gpm;

namespace {

std::string demo(const std::string& name) {
  std::ifstream in(std::string(GPM_DEMO_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Errc check_errc(const std::string& src) {
  try {
    load_program(src);
  } catch (const CheckError& e) {
    return e.diag.code;
  }
  FAIL("expected the program to be rejected");
  return Errc::ParseError;
}

}  // namespace

TEST_CASE("the demo programs typecheck") {
  for (const char* f : {"flip.gpm", "map.gpm", "nats.gpm", "qctrl.gpm",
                        "rot.gpm", "qft.gpm"}) {
    CAPTURE(f);
    CHECK_NOTHROW(load_program(demo(f)));
  }
}

TEST_CASE("the negative demos are rejected with their specific codes") {
  CHECK(check_errc(demo("bad_unguarded.gpm")) == Errc::UnguardedMu);
  CHECK(check_errc(demo("bad_depth.gpm")) == Errc::DepthMismatch);
  CHECK(check_errc(demo("bad_overlap.gpm")) == Errc::OverlappingPatterns);
}

TEST_CASE("guardedness is enforced wherever types are written") {
  CHECK(check_errc("type Bad = mu X . X;") == Errc::UnguardedMu);
  CHECK(check_errc("type Bad = mu X . X * @X;") == Errc::UnguardedMu);
  CHECK(check_errc("iso f : (mu X . X * X) <-> 1 = { x <-> () };") ==
        Errc::UnguardedMu);
  CHECK(check_errc("term t : mu X . 1 + X = fold (inl ());") == Errc::UnguardedMu);
  // guarded occurrences are fine, including under products and sums
  CHECK_NOTHROW(load_program("type Ok = mu X . 1 + @X * (1 + @ @ X);"));
}

TEST_CASE("clause sides must balance") {
  const char* prelude = "type B = 1 + 1;\n";
  // depth: a bare variable against the same variable under next
  CHECK(check_errc(std::string(prelude) +
                   "iso f : B <-> @B = { x <-> next x };") ==
        Errc::DepthMismatch);
  // variable sets must agree
  CHECK(check_errc(std::string(prelude) + "iso f : B <-> B = { x <-> y };") ==
        Errc::ClauseContextMismatch);
  // linear patterns
  CHECK(check_errc(std::string(prelude) +
                   "iso f : B * B <-> B * B = { (x, x) <-> (x, x) };") ==
        Errc::VarUsedTwice);
  // latency: a variable matched under next cannot be used outside one
  CHECK(check_errc(std::string(prelude) +
                   "iso notb : B <-> B = { '0 <-> '1 | '1 <-> '0 };\n"
                   "iso f : B * @B <-> B * @B = "
                   "{ ('0, next y) <-> ((notb y), next y) };") ==
        Errc::LatencyMismatch);
  // matching the same depth on both sides is fine
  CHECK_NOTHROW(load_program(std::string(prelude) +
                             "iso f : @B <-> @B = { next x <-> next x };"));
}

TEST_CASE("overlapping and mismatched clause families are rejected") {
  const char* prelude = "type B = 1 + 1;\n";
  CHECK(check_errc(std::string(prelude) +
                   "iso f : B <-> B = { '0 <-> '0 | '0 <-> '1 };") ==
        Errc::OverlappingPatterns);
  // a variable pattern overlaps everything
  CHECK(check_errc(std::string(prelude) +
                   "iso f : B <-> B = { x <-> x | '0 <-> '0 };") ==
        Errc::OverlappingPatterns);
  // right-hand sides must be non-overlapping too
  CHECK(check_errc(std::string(prelude) +
                   "iso f : B <-> B = { '0 <-> '1 | '1 <-> '1 };") ==
        Errc::OverlappingPatterns);
  // partial families are allowed: totality is not required
  CHECK_NOTHROW(
      load_program(std::string(prelude) + "iso f : B <-> B = { '0 <-> '1 };"));
}

TEST_CASE("discrimination looks through fold, next and let bodies") {
  // the two right-hand sides differ only inside a let body
  const char* src =
      "type B = 1 + 1;\n"
      "type P = B * B;\n"
      "iso swap : P <-> P = { p <-> let (a, b) = p in (b, a) };\n";
  CHECK_NOTHROW(load_program(src));
  // heads under fold discriminate
  CHECK_NOTHROW(load_program(
      "type N = mu X . 1 + @X;\n"
      "iso f : N <-> N = { fold (inl u) <-> fold (inl u) "
      "| fold (inr v) <-> fold (inr v) };\n"));
}

TEST_CASE("plain type errors") {
  CHECK(check_errc("type B = 1 + 1;\nterm t : B = ();") == Errc::TypeMismatch);
  CHECK(check_errc("type B = 1 + 1;\nterm t : B = x;") == Errc::UnboundVar);
  CHECK(check_errc("type A = 1;\ntype A = 1;") == Errc::DuplicateDecl);
  CHECK(check_errc("iso had : (1+1) <-> (1+1) = { x <-> x };") ==
        Errc::DuplicateDecl);
  CHECK(check_errc("type B = 1 + 1;\n"
                   "iso f : B <-> B = { x <-> x };\n"
                   "iso f : B <-> B = { x <-> x };") == Errc::DuplicateDecl);
}

TEST_CASE("builtins have their declared types") {
  const auto& b = builtin_iso_types();
  REQUIRE(b.count("had"));
  REQUIRE(b.count("rot2"));
  REQUIRE(b.count("rot3"));
  REQUIRE(b.count("rotgrad"));
  CHECK(funty_eq(b.at("had"), parse_funty_string("(1+1) <-> (1+1)")));
  CHECK(funty_eq(b.at("rot2"), parse_funty_string("(1+1) <-> (1+1)")));
  CHECK(funty_eq(b.at("rot3"), parse_funty_string("(1+1) <-> (1+1)")));
  CHECK(funty_eq(b.at("rotgrad"),
                 parse_funty_string("(mu X . 1 + (1+1) * @X) <-> "
                                    "(mu X . 1 + (1+1) * @X)")));
}

TEST_CASE("higher-order iso expressions check against their annotations") {
  const char* prelude =
      "type B = 1 + 1;\n"
      "type LB = mu X . 1 + B * @X;\n"
      "iso notb : B <-> B = { '0 <-> '1 | '1 <-> '0 };\n";
  // lambda, application, delayed application through fix
  CHECK_NOTHROW(load_program(
      std::string(prelude) +
      "iso map : (B <-> B) -> (LB <-> LB) =\n"
      "  fix phi : (B <-> B) -> (LB <-> LB) . \\psi : B <-> B . {\n"
      "      [] <-> []\n"
      "    | h :: t <-> (psi h) :: ((phi @@ next psi) @@ t)\n"
      "  };\n"
      "iso mapnot : LB <-> LB = map notb;\n"));
  // annotation mismatch on the lambda binder
  CHECK(check_errc(std::string(prelude) +
                   "iso f : (B <-> B) -> (B <-> B) = \\g : @B <-> @B . g;") ==
        Errc::TypeMismatch);
  // applying a first-order iso as if it took an argument
  CHECK(check_errc(std::string(prelude) + "iso f : B <-> B = notb notb;") ==
        Errc::TypeMismatch);
}

TEST_CASE("terms can reference earlier term declarations") {
  CHECK_NOTHROW(load_program(
      "type N = mu X . 1 + @X;\n"
      "term zero : N = fold (inl ());\n"
      "term one : N = fold (inr (next zero));\n"));
  // forward references are not allowed
  CHECK(check_errc("type N = mu X . 1 + @X;\n"
                   "term one : N = fold (inr (next zero));\n"
                   "term zero : N = fold (inl ());\n") == Errc::UnboundVar);
}
