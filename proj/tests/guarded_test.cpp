#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gpm/guarded.hpp"
#include "gpm/hilb.hpp"
#include "gpm/parser.hpp"
#include "gpm/pinj.hpp"

using namespace gpm;

namespace {

ShapePtr bit() { return sum_shape(one_shape(), one_shape()); }

// the constant not-family on the two-element shape
StagedMor<Pinj> notb_staged() {
  auto x = constant_cochain<Pinj>(bit());
  PinjMor n = Pinj::from_pairs(bit(), bit(), {{0, 1}, {1, 0}});
  return StagedMor<Pinj>(x, x, [n](int) { return n; });
}

}  // namespace

TEST_CASE("the naturals grow one point per stage") {
  TypePtr nat = parse_type_string("mu X . 1 + @X");
  auto om = denote_type<Pinj>(nat, {});
  // stage recurrence: S(0) = 1 + 0, S(n+1) = 1 + S(n)
  ShapePtr s = sum_shape(one_shape(), zero_shape());
  for (int n = 0; n < 5; ++n) {
    CHECK(shape_eq(om.shape(n), s));
    CHECK(shape_dim(om.shape(n)) == n + 1);
    s = sum_shape(one_shape(), s);
  }
  CHECK(restrictions_are_dagger_epi(om, 5));

  auto omh = denote_type<Hilb>(nat, {});
  for (int n = 0; n < 5; ++n) CHECK(shape_dim(omh.shape(n)) == n + 1);
  CHECK(restrictions_are_dagger_epi(omh, 5));
}

TEST_CASE("bit lists double and add one per stage") {
  TypePtr lb = parse_type_string("mu X . 1 + (1 + 1) * @X");
  auto om = denote_type<Pinj>(lb, {});
  auto omh = denote_type<Hilb>(lb, {});
  int64_t expect = 1;
  for (int n = 0; n < 6; ++n) {
    CHECK(shape_dim(om.shape(n)) == expect);
    CHECK(shape_dim(omh.shape(n)) == expect);
    expect = 2 * expect + 1;
  }
  CHECK(restrictions_are_dagger_epi(om, 6));
  CHECK(restrictions_are_dagger_epi(omh, 6));
}

TEST_CASE("later shifts a cochain down one stage") {
  auto x = constant_cochain<Pinj>(bit());
  auto lx = later(x);
  CHECK(shape_eq(lx.shape(0), zero_shape()));
  CHECK(shape_eq(lx.shape(1), bit()));
  CHECK(shape_eq(lx.shape(3), bit()));
  // the stage-0 restriction collapses everything into the empty shape
  CHECK(Pinj::eq(lx.restr(0), Pinj::bang(bit())));
  CHECK(Pinj::eq(lx.restr(1), Pinj::id(bit())));
}

TEST_CASE("next is natural but has no natural dagger") {
  TypePtr nat = parse_type_string("mu X . 1 + @X");
  auto om = denote_type<Pinj>(nat, {});
  auto nx = next_mor(om);
  CHECK(is_natural(nx, 4));
  CHECK(!is_daggerable(nx, 3));

  auto omh = denote_type<Hilb>(nat, {});
  auto nxh = next_mor(omh);
  CHECK(is_natural(nxh, 4));
  CHECK(!is_daggerable(nxh, 3));

  // even on a constant cochain the stage-0 collapse breaks the dagger
  auto x = constant_cochain<Pinj>(bit());
  CHECK(is_natural(next_mor(x), 4));
  CHECK(!is_daggerable(next_mor(x), 3));
}

TEST_CASE("conjugating by next shifts a family by one stage") {
  auto f = notb_staged();
  auto cf = conjugate_by_next(f);
  CHECK(is_natural(cf, 4));
  CHECK(shape_eq(cf.src().shape(0), zero_shape()));
  for (int n = 0; n < 3; ++n) CHECK(Pinj::eq(cf.at(n + 1), f.at(n)));
  // every component of notb is an iso, so the shift is an (n+1)-iso
  CHECK(is_n_iso(f, 3));
  CHECK(is_n_iso(cf, 4));
  // next of something non-invertible gains exactly the one free stage
  auto half = StagedMor<Pinj>(f.src(), f.src(), [](int) {
    return Pinj::from_pairs(bit(), bit(), {{0, 0}});
  });
  CHECK(is_n_iso(half, 0));
  CHECK(!is_n_iso(half, 1));
  CHECK(is_n_iso(conjugate_by_next(half), 1));
  CHECK(!is_n_iso(conjugate_by_next(half), 2));
}

TEST_CASE("later distributes over sums by stagewise isos") {
  auto x = constant_cochain<Pinj>(bit());
  auto y = constant_cochain<Pinj>(one_shape());
  auto d = dist_later_sum(x, y);
  CHECK(is_natural(d, 4));
  for (int n = 0; n <= 4; ++n) CHECK(mor_is_dagger_iso<Pinj>(d.at(n), backend_tol<Pinj>()));
  // above stage zero the two sides have identical shapes and d is identity
  CHECK(Pinj::eq(d.at(2), Pinj::id(d.src().shape(2))));
  // at stage zero it is the empty unitor into O + O
  CHECK(shape_eq(d.src().shape(0), zero_shape()));
  CHECK(shape_eq(d.dst().shape(0), sum_shape(zero_shape(), zero_shape())));
  CHECK(d.at(0).pairs.empty());

  auto dh = dist_later_sum(constant_cochain<Hilb>(bit()),
                           constant_cochain<Hilb>(one_shape()));
  CHECK(is_natural(dh, 4));
  for (int n = 0; n <= 4; ++n) CHECK(mor_is_dagger_iso<Hilb>(dh.at(n), backend_tol<Hilb>()));
}

TEST_CASE("sum injections partition the identity") {
  auto x = constant_cochain<Pinj>(bit());
  auto y = constant_cochain<Pinj>(one_shape());
  auto il = inj_l_nat(x, y);
  auto ir = inj_r_nat(x, y);
  CHECK(is_natural(il, 4));
  CHECK(is_natural(ir, 4));
  for (int n = 0; n < 3; ++n) {
    PinjMor l = il.at(n), r = ir.at(n);
    CHECK(Pinj::is_dagger_mono(l));
    CHECK(Pinj::is_dagger_mono(r));
    PinjMor ll = Pinj::compose(l, Pinj::dagger(l));
    PinjMor rr = Pinj::compose(r, Pinj::dagger(r));
    REQUIRE(Pinj::compatible(ll, rr));
    CHECK(Pinj::eq(Pinj::join(ll, rr), Pinj::id(sum_shape(bit(), one_shape()))));
  }
}

TEST_CASE("types act functorially on staged morphisms") {
  // grab the mu body so X is a resolved bound variable
  TypePtr body = parse_type_string("mu X . 1 + (1 + 1) * @X")->a;
  // supply source/destination cochains and the morphism for X by hand
  auto x = constant_cochain<Pinj>(bit());
  TypeEnv<Pinj> env{{"X", x}};
  auto f = notb_staged();
  MorEnv<Pinj> mf{{"X", f}};

  auto Ff = functor_on_mor<Pinj>(body, env, env, mf);
  CHECK(is_natural(Ff, 4));

  // identities map to identities
  MorEnv<Pinj> mid{{"X", id_nat(x)}};
  auto Fid = functor_on_mor<Pinj>(body, env, env, mid);
  auto idF = id_nat(denote_type<Pinj>(body, env));
  for (int n = 0; n <= 3; ++n) CHECK(Pinj::eq(Fid.at(n), idF.at(n)));

  // notb is an involution, so F(notb) . F(notb) = F(id) = id
  for (int n = 0; n <= 3; ++n)
    CHECK(Pinj::eq(Pinj::compose(Ff.at(n), Ff.at(n)), idF.at(n)));
}

TEST_CASE("truncations of a recursive type stabilize stage by stage") {
  TypePtr nat = parse_type_string("mu X . 1 + @X");
  auto om = denote_type<Pinj>(nat, {});
  for (int j = 0; j <= 3; ++j)
    for (int m = j + 1; m <= j + 4; ++m)
      CHECK(shape_eq(mu_iterate<Pinj>(nat, {}, m).shape(j), om.shape(j)));
  // below the threshold the tower is still growing
  CHECK(!shape_eq(mu_iterate<Pinj>(nat, {}, 2).shape(2), om.shape(2)));
}

TEST_CASE("folding a recursive type is the identity on stabilized shapes") {
  TypePtr lb = parse_type_string("mu X . 1 + (1 + 1) * @X");
  auto fi = fold_iso<Pinj>(lb, {});
  CHECK(is_natural(fi, 4));
  CHECK(is_daggerable(fi, 4));
  for (int n = 0; n <= 4; ++n) {
    CHECK(shape_eq(fi.src().shape(n), fi.dst().shape(n)));
    CHECK(mor_is_dagger_iso<Pinj>(fi.at(n), backend_tol<Pinj>()));
  }
}

TEST_CASE("restricting a component of a natural family gives the previous one") {
  TypePtr nat = parse_type_string("mu X . 1 + @X");
  auto om = denote_type<Pinj>(nat, {});
  auto idn = id_nat(om);
  for (int n = 0; n < 4; ++n)
    CHECK(Pinj::eq(restrict_hom<Pinj>(idn.at(n + 1), om, om, n), idn.at(n)));
  auto f = notb_staged();
  for (int n = 0; n < 4; ++n)
    CHECK(Pinj::eq(restrict_hom<Pinj>(f.at(n + 1), f.src(), f.dst(), n),
                   f.at(n)));
}

TEST_CASE("composition and dagger of staged families are stagewise") {
  auto f = notb_staged();
  auto g = compose_nat(f, f);
  for (int n = 0; n < 3; ++n)
    CHECK(Pinj::eq(g.at(n), Pinj::id(bit())));
  auto fd = dagger_nat(f);
  for (int n = 0; n < 3; ++n)
    CHECK(Pinj::eq(fd.at(n), Pinj::dagger(f.at(n))));
  auto bn = bang_nat(f.src());
  for (int n = 0; n < 3; ++n) CHECK(bn.at(n).pairs.empty());
}
