#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>

#include "gpm/hilb.hpp"
#include "gpm/pinj.hpp"
#include "gpm/shapes.hpp"

using namespace gpm;
using std::complex;

namespace {
ShapePtr bit() { return sum_shape(one_shape(), one_shape()); }
}  // namespace

TEST_CASE("shapes are interned and measured") {
  CHECK(sum_shape(one_shape(), zero_shape()) ==
        sum_shape(one_shape(), zero_shape()));
  CHECK(shape_dim(zero_shape()) == 0);
  CHECK(shape_dim(one_shape()) == 1);
  CHECK(shape_dim(bit()) == 2);
  CHECK(shape_dim(prod_shape(bit(), bit())) == 4);
  CHECK(shape_dim(sum_shape(bit(), prod_shape(bit(), bit()))) == 6);
  CHECK(show_shape(bit()) == "(1+1)");
  CHECK(show_shape(prod_shape(bit(), one_shape())) == "((1+1)*1)");
  CHECK(show_shape(zero_shape()) == "0");
}

TEST_CASE("element enumeration is inl-block then inr-block, left-major pairs") {
  auto& be = enumerate_elems(bit());
  REQUIRE(be.size() == 2);
  CHECK(render_elem(be[0]) == "inl(*)");
  CHECK(render_elem(be[1]) == "inr(*)");

  ShapePtr p = prod_shape(bit(), bit());
  auto& pe = enumerate_elems(p);
  REQUIRE(pe.size() == 4);
  CHECK(render_elem(pe[0]) == "(inl(*),inl(*))");
  CHECK(render_elem(pe[1]) == "(inl(*),inr(*))");
  CHECK(render_elem(pe[2]) == "(inr(*),inl(*))");
  CHECK(render_elem(pe[3]) == "(inr(*),inr(*))");

  CHECK(enumerate_elems(zero_shape()).empty());
  CHECK(render_elem(enumerate_elems(one_shape())[0]) == "*");

  // indices round-trip, and foreign elements are rejected
  for (size_t i = 0; i < pe.size(); ++i)
    CHECK(elem_index(p, pe[i]) == (int64_t)i);
  CHECK(elem_index(bit(), star_elem()) == -1);
  CHECK(elem_index(bit(), inr_elem(star_elem())) == 1);
}

TEST_CASE("display normalization prunes dead zeros and reassociates sums") {
  ShapePtr b = bit();
  CHECK(shape_eq(display_shape(sum_shape(b, zero_shape())), b));
  CHECK(shape_eq(display_shape(prod_shape(b, zero_shape())), zero_shape()));
  CHECK(shape_eq(display_shape(prod_shape(one_shape(), b)), b));
  ShapePtr right = sum_shape(one_shape(), sum_shape(one_shape(), one_shape()));
  ShapePtr left = sum_shape(sum_shape(one_shape(), one_shape()), one_shape());
  CHECK(shape_eq(display_shape(right), left));
  // raw construction is untouched
  CHECK(!shape_eq(right, left));
}

TEST_CASE("coherence bijections compose to identities") {
  ShapePtr x = bit(), y = one_shape(), z = bit();

  ElemBij s1 = coherence_bij(Coh::SymmSum, x, y);
  ElemBij s2 = coherence_bij(Coh::SymmSum, y, x);
  CHECK(compose_bij(s2, s1).map == identity_bij(sum_shape(x, y)).map);

  ElemBij a = coherence_bij(Coh::AssocSum, x, y, z);
  ElemBij ai = invert_bij(a);
  CHECK(compose_bij(ai, a).map == identity_bij(sum_shape(sum_shape(x, y), z)).map);

  ElemBij d = coherence_bij(Coh::DistribL, x, y, z);
  CHECK(d.map.size() == (size_t)shape_dim(prod_shape(sum_shape(x, y), z)));
  CHECK(compose_bij(invert_bij(d), d).map ==
        identity_bij(prod_shape(sum_shape(x, y), z)).map);

  // unitors move elements without reordering blocks
  ElemBij ul = coherence_bij(Coh::UnitlProd, x);
  CHECK(ul.map == identity_bij(x).map);
  ElemBij us = coherence_bij(Coh::UnitrSum, x);
  CHECK(us.map == identity_bij(x).map);

  // annihilators relate empty element sets
  ElemBij an = coherence_bij(Coh::AnnihL, x);
  CHECK(an.map.empty());
  CHECK(shape_eq(an.dst, zero_shape()));
}

TEST_CASE("partial injections: categorical laws are exact") {
  ShapePtr b = bit();
  PinjMor f = Pinj::from_pairs(b, b, {{1, 0}});  // inr |-> inl, else undefined
  PinjMor n = Pinj::from_pairs(b, b, {{0, 1}, {1, 0}});

  CHECK(Pinj::eq(Pinj::compose(f, Pinj::id(b)), f));
  CHECK(Pinj::eq(Pinj::compose(Pinj::id(b), f), f));
  CHECK(Pinj::eq(Pinj::dagger(Pinj::dagger(f)), f));
  CHECK(Pinj::eq(Pinj::dagger(Pinj::compose(n, f)),
                 Pinj::compose(Pinj::dagger(f), Pinj::dagger(n))));
  // f . f~ . f = f  (partial injections form an inverse category)
  CHECK(Pinj::eq(Pinj::compose(f, Pinj::compose(Pinj::dagger(f), f)), f));

  // from_pairs normalizes order
  CHECK(Pinj::from_pairs(b, b, {{1, 0}, {0, 1}}).pairs ==
        std::vector<std::pair<int64_t, int64_t>>{{0, 1}, {1, 0}});

  CHECK(Pinj::apply(f, 1) == 0);
  CHECK(!Pinj::apply(f, 0).has_value());
}

TEST_CASE("partial injections: flags mean what they say") {
  ShapePtr b = bit();
  PinjMor n = Pinj::from_pairs(b, b, {{0, 1}, {1, 0}});
  PinjMor half = Pinj::from_pairs(b, b, {{0, 0}});
  PinjMor into4 = Pinj::from_pairs(b, prod_shape(b, b), {{0, 0}, {1, 3}});

  CHECK(Pinj::is_total(n));
  CHECK(Pinj::is_surjective(n));
  CHECK(Pinj::is_dagger_iso(n));
  CHECK(Pinj::is_plain_iso(n));

  CHECK(!Pinj::is_total(half));
  CHECK(!Pinj::is_surjective(half));
  CHECK(!Pinj::is_dagger_mono(half));
  CHECK(!Pinj::is_dagger_epi(half));

  CHECK(Pinj::is_total(into4));
  CHECK(Pinj::is_dagger_mono(into4));
  CHECK(!Pinj::is_dagger_epi(into4));
  CHECK(Pinj::is_dagger_epi(Pinj::dagger(into4)));

  // the maps in and out of the empty shape
  CHECK(Pinj::bang(b).pairs.empty());
  CHECK(Pinj::cobang(b).pairs.empty());
  CHECK(Pinj::is_dagger_epi(Pinj::bang(b)));   // onto the empty set
  CHECK(!Pinj::is_dagger_mono(Pinj::bang(b)));
  CHECK(Pinj::is_dagger_iso(Pinj::id(zero_shape())));
}

TEST_CASE("partial injections: tensors act blockwise") {
  ShapePtr b = bit();
  PinjMor n = Pinj::from_pairs(b, b, {{0, 1}, {1, 0}});
  PinjMor i = Pinj::id(b);

  PinjMor s = Pinj::tensor_sum(n, i);
  CHECK(shape_eq(s.src, sum_shape(b, b)));
  CHECK(s.pairs == std::vector<std::pair<int64_t, int64_t>>{
                       {0, 1}, {1, 0}, {2, 2}, {3, 3}});

  PinjMor p = Pinj::tensor_prod(i, n);  // left factor major
  CHECK(shape_eq(p.src, prod_shape(b, b)));
  CHECK(p.pairs == std::vector<std::pair<int64_t, int64_t>>{
                       {0, 1}, {1, 0}, {2, 3}, {3, 2}});

  // interchange with composition
  PinjMor lhs = Pinj::tensor_prod(Pinj::compose(n, n), Pinj::compose(i, n));
  PinjMor rhs =
      Pinj::compose(Pinj::tensor_prod(n, i), Pinj::tensor_prod(n, n));
  CHECK(Pinj::eq(lhs, rhs));
}

TEST_CASE("partial injections: joins require disjointness") {
  ShapePtr b = bit();
  PinjMor a = Pinj::from_pairs(b, b, {{0, 1}});
  PinjMor c = Pinj::from_pairs(b, b, {{1, 0}});
  PinjMor clash_dom = Pinj::from_pairs(b, b, {{0, 0}});
  PinjMor clash_img = Pinj::from_pairs(b, b, {{1, 1}});

  REQUIRE(Pinj::compatible(a, c));
  PinjMor j = Pinj::join(a, c);
  CHECK(Pinj::eq(j, Pinj::from_pairs(b, b, {{0, 1}, {1, 0}})));
  CHECK(Pinj::eq(Pinj::join(c, a), j));
  CHECK(Pinj::eq(Pinj::join(a, Pinj::zero(b, b)), a));

  CHECK(!Pinj::compatible(a, clash_dom));  // both defined at inl
  CHECK(!Pinj::compatible(a, clash_img));  // both hit inr
  CHECK_THROWS_AS(Pinj::join(a, clash_dom), IncompatibleJoin);
  CHECK_THROWS_AS(Pinj::join(a, clash_img), IncompatibleJoin);

  // daggers of compatible morphisms stay compatible
  CHECK(Pinj::compatible(Pinj::dagger(a), Pinj::dagger(c)));
  CHECK(Pinj::eq(Pinj::dagger(j),
                 Pinj::join(Pinj::dagger(a), Pinj::dagger(c))));
}

TEST_CASE("lifted bijections are dagger isos in both backends") {
  ShapePtr x = bit(), y = one_shape();
  ElemBij sym = coherence_bij(Coh::SymmSum, x, y);

  PinjMor ps = Pinj::lift_bij(sym);
  CHECK(Pinj::is_dagger_iso(ps));
  CHECK(Pinj::eq(Pinj::compose(Pinj::lift_bij(invert_bij(sym)), ps),
                 Pinj::id(sum_shape(x, y))));

  HilbMor hs = Hilb::lift_bij(sym);
  CHECK(Hilb::is_dagger_iso(hs));
  CHECK(Hilb::eq(Hilb::compose(Hilb::dagger(hs), hs),
                 Hilb::id(sum_shape(x, y))));
}

TEST_CASE("matrices: dagger, kronecker and direct sum") {
  ShapePtr b = bit();
  Eigen::MatrixXcd m(2, 2);
  m << complex<double>(0, 0), complex<double>(0, 1),
      complex<double>(1, 0), complex<double>(0, 0);
  HilbMor f = Hilb::make(b, b, m);

  HilbMor fd = Hilb::dagger(f);
  CHECK(fd.m(1, 0) == complex<double>(0, -1));
  CHECK(fd.m(0, 1) == complex<double>(1, 0));
  CHECK(Hilb::eq(Hilb::dagger(fd), f));

  HilbMor kron = Hilb::tensor_prod(f, Hilb::id(b));
  REQUIRE(kron.m.rows() == 4);
  CHECK(kron.m(0, 2) == complex<double>(0, 1));  // f(0,1) * id(0,0)
  CHECK(kron.m(1, 3) == complex<double>(0, 1));
  CHECK(kron.m(2, 0) == complex<double>(1, 0));
  CHECK(kron.m(0, 1) == complex<double>(0, 0));

  HilbMor ds = Hilb::tensor_sum(f, Hilb::id(b));
  REQUIRE(ds.m.rows() == 4);
  CHECK(ds.m(0, 1) == complex<double>(0, 1));
  CHECK(ds.m(2, 2) == complex<double>(1, 0));
  CHECK(ds.m(3, 3) == complex<double>(1, 0));
  CHECK(ds.m(2, 0) == complex<double>(0, 0));
}

TEST_CASE("matrices: flags, tolerance, joins") {
  ShapePtr b = bit();
  double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd hm(2, 2);
  hm << r, r, r, -r;
  HilbMor h = Hilb::make(b, b, hm);

  CHECK(Hilb::is_dagger_iso(h));
  CHECK(Hilb::is_dagger_mono(h));
  CHECK(Hilb::is_dagger_epi(h));
  CHECK(Hilb::eq(Hilb::compose(h, h), Hilb::id(b)));

  // invertible but not unitary
  Eigen::MatrixXcd sm = Eigen::MatrixXcd::Zero(2, 2);
  sm(0, 0) = 2.0;
  sm(1, 1) = 1.0;
  HilbMor s = Hilb::make(b, b, sm);
  CHECK(Hilb::is_plain_iso(s));
  CHECK(!Hilb::is_dagger_iso(s));

  // isometry that is not a coisometry
  HilbMor col = Hilb::from_pairs(one_shape(), b, {{0, 0}});
  CHECK(Hilb::is_dagger_mono(col));
  CHECK(!Hilb::is_dagger_epi(col));

  // tolerance controls equality
  Eigen::MatrixXcd hm2 = hm;
  hm2(0, 0) += 1e-12;
  CHECK(Hilb::eq(h, Hilb::make(b, b, hm2)));
  hm2(0, 0) += 1e-6;
  CHECK(!Hilb::eq(h, Hilb::make(b, b, hm2)));
  CHECK(Hilb::eq(h, Hilb::make(b, b, hm2), 1e-3));

  // joins demand orthogonal supports, as for partial injections
  HilbMor a = Hilb::from_pairs(b, b, {{0, 1}});
  HilbMor c = Hilb::from_pairs(b, b, {{1, 0}});
  HilbMor clash = Hilb::from_pairs(b, b, {{0, 0}});
  REQUIRE(Hilb::compatible(a, c));
  CHECK(Hilb::eq(Hilb::join(a, c), Hilb::from_pairs(b, b, {{0, 1}, {1, 0}})));
  CHECK(!Hilb::compatible(a, clash));
  CHECK_THROWS_AS(Hilb::join(a, clash), IncompatibleJoin);
  CHECK(Hilb::is_zero(Hilb::zero(b, b)));
}
