#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gpm/driver.hpp"
#include "gpm/eval.hpp"
#include "gpm/props.hpp"

using namespace gpm;

namespace {

std::string test_program() {
  return std::string(prop_corpus()) +
         "iso half : Bit <-> Bit = { '0 <-> '1 };\n"
         "term b1 : Bit = '1;\n"
         "term l2 : LBit = '1 :: next ('0 :: next []);\n"
         "term stuck : Bit = half '1;\n"
         "term quantum : Bit = had '0;\n";
}

struct Fixture {
  LoadedProgram lp = load_program(test_program());
  ValuePtr run(const std::string& name, int budget) {
    const Decl* d = find_decl(lp.resolved, name);
    REQUIRE(d != nullptr);
    return eval(d->term, {}, budget, lp.globals);
  }
  ValuePtr apply(const std::string& iso, const ValuePtr& v, int budget) {
    return apply_iso(lp.globals.at(iso).body, v, budget, lp.globals);
  }
};

ValuePtr vbit(int b) { return b ? v_inr(v_unit()) : v_inl(v_unit()); }

ValuePtr vnil() { return v_fold(v_inl(v_unit())); }
ValuePtr vcons(ValuePtr h, ValuePtr t) {
  return v_fold(v_inr(v_pair(std::move(h), v_next(std::move(t)))));
}

}  // namespace

TEST_CASE("values render in surface syntax") {
  Fixture fx;
  CHECK(show_value(fx.run("b1", 0)) == "'1");
  CHECK(show_value(fx.run("l2", 2)) == "'1 :: next ('0 :: next [])");
  CHECK(show_value(vnil()) == "[]");
  CHECK(show_value(v_pair(vbit(0), v_next(v_unit()))) == "('0, next ())");
}

TEST_CASE("the budget bounds how deep evaluation forces") {
  Fixture fx;
  ValuePtr shallow = fx.run("l2", 0);
  CHECK(show_value(shallow) == "'1 :: next _");
  // forcing afterwards reaches the same value as evaluating deep enough
  ValuePtr forced = force_value(shallow, 2, fx.lp.globals);
  CHECK(value_eq(forced, fx.run("l2", 2)));
  CHECK(show_value(forced) == "'1 :: next ('0 :: next [])");
}

TEST_CASE("next nesting depth of forced values") {
  CHECK(next_depth(v_unit()) == 0);
  CHECK(next_depth(v_next(v_unit())) == 1);
  CHECK(next_depth(v_next(v_next(v_unit()))) == 2);
  CHECK(next_depth(vcons(vbit(1), vnil())) == 1);
  CHECK(next_depth(v_pair(v_next(v_unit()), v_unit())) == 1);
}

TEST_CASE("applying clause isos forwards") {
  Fixture fx;
  CHECK(show_value(fx.apply("notb", vbit(0), 0)) == "'1");
  CHECK(show_value(fx.apply("flip", fx.run("l2", 3), 3)) ==
        "'0 :: next ('0 :: next [])");
  CHECK(show_value(fx.apply("mapnot", fx.run("l2", 3), 3)) ==
        "'0 :: next ('1 :: next [])");
  // the fixed point unrolls as far as the budget feeds it
  ValuePtr deep = vcons(vbit(0), vcons(vbit(0), vcons(vbit(1), vnil())));
  CHECK(show_value(force_value(fx.apply("mapnot", deep, 3), 3, fx.lp.globals)) ==
        "'1 :: next ('1 :: next ('0 :: next []))");
}

TEST_CASE("partial isos get stuck outside their domain") {
  Fixture fx;
  CHECK(show_value(fx.apply("half", vbit(0), 0)) == "'1");
  try {
    fx.run("stuck", 0);
    FAIL("'1 is outside half's domain");
  } catch (const CheckError& e) {
    CHECK(e.diag.code == Errc::StuckMatch);
  }
}

TEST_CASE("quantum builtins cannot be evaluated classically") {
  Fixture fx;
  try {
    fx.run("quantum", 0);
    FAIL("had has no classical evaluation");
  } catch (const CheckError& e) {
    CHECK(e.diag.code == Errc::NonClassicalIso);
  }
}

TEST_CASE("reversing clauses runs the iso backwards") {
  Fixture fx;
  IsoPtr rev = reverse_clauses(fx.lp.globals.at("half").body);
  CHECK(show_value(apply_iso(rev, vbit(1), 0, fx.lp.globals)) == "'0");
  try {
    apply_iso(rev, vbit(0), 0, fx.lp.globals);
    FAIL("'0 is outside the reverse's domain");
  } catch (const CheckError& e) {
    CHECK(e.diag.code == Errc::StuckMatch);
  }
  // reversing a clause iso twice gives back its behavior
  IsoPtr rev2 = reverse_clauses(rev);
  CHECK(show_value(apply_iso(rev2, vbit(0), 0, fx.lp.globals)) == "'1");
  // flip is an involution: reversed or not, same function
  ValuePtr l = fx.run("l2", 3);
  CHECK(value_eq(apply_iso(reverse_clauses(fx.lp.globals.at("flip").body), l, 3,
                           fx.lp.globals),
                 fx.apply("flip", l, 3)));
}

TEST_CASE("pattern matching binds linearly and respects the budget") {
  Fixture fx;
  // p = h :: t  against  ['1]
  const Decl* d = find_decl(fx.lp.resolved, "l2");
  ValuePtr v = eval(d->term, {}, 2, fx.lp.globals);
  TermPtr pat = m_fold(m_inr(m_pair(m_var("h"), m_var("t"))));
  auto env = match_pattern(pat, v, 2, fx.lp.globals);
  REQUIRE(env.has_value());
  CHECK(show_value(env->at("h")) == "'1");
  CHECK(env->count("t") == 1);
  // a mismatching constructor yields no binding rather than an error
  CHECK(!match_pattern(m_fold(m_inl(m_unit())), v, 2, fx.lp.globals).has_value());
}

TEST_CASE("structural value equality ignores sharing") {
  CHECK(value_eq(vcons(vbit(1), vnil()), vcons(vbit(1), vnil())));
  CHECK(!value_eq(vcons(vbit(1), vnil()), vcons(vbit(0), vnil())));
  CHECK(!value_eq(vbit(0), v_unit()));
}
