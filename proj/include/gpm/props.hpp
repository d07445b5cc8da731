// Executable property suites over the staged semantics: naturality and
// restriction coherence of every constructed family, dagger-epi restriction
// maps, the later/sum distribution, next-naturality at the injections,
// n-isomorphism promotion, daggerability of checked isos, join laws,
// fixed-point laws (placeholder independence and iterate convergence) and
// shape stabilization of recursive types. Each suite runs over a built-in
// program corpus plus seeded random types and isos, in both backends where
// the material is classical and in the matrix backend alone where not.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gpm/driver.hpp"
#include "gpm/gen.hpp"
#include "gpm/guarded.hpp"
#include "gpm/normalize.hpp"
#include "gpm/pretty.hpp"
#include "gpm/semantics.hpp"

namespace gpm {

struct PropResult {
  std::string suite;
  int pass = 0;
  int fail = 0;
  std::vector<std::string> failures;  // first few witnesses
};

struct PropOptions {
  int stage_bound = 6;
  uint64_t seed = 1;
  int random_types = 38;  // random_types + random isos (12) = 50 random inputs
  std::string only;       // restrict to a single suite when non-empty
};

inline std::vector<std::string> prop_suite_names() {
  return {"naturality",  "restrict-hom", "dagger-epi",      "later-sum-dist",
          "nu-iota",     "niso",         "daggerable",      "join-laws",
          "fix-placeholder", "fix-iterate", "stabilization"};
}

// The built-in corpus the suites exercise: booleans and guarded lists with
// the head-flip, elementwise map, controlled application, the rotation
// cascade, and the delayed-rotation transform over the quantum builtins.
inline const char* prop_corpus() {
  return R"(type Bit = 1 + 1;
type LBit = mu X . 1 + Bit * @X;
type Nat = mu X . 1 + @X;

iso idbit : Bit <-> Bit = { x <-> x };
iso notb : Bit <-> Bit = { '0 <-> '1 | '1 <-> '0 };
iso idnat : Nat <-> Nat = { x <-> x };

iso flip : LBit <-> LBit = {
    [] <-> []
  | '0 :: next t <-> '1 :: next t
  | '1 :: next t <-> '0 :: next t
};

iso map : (Bit <-> Bit) -> (LBit <-> LBit) =
  fix phi : (Bit <-> Bit) -> (LBit <-> LBit) . \psi : Bit <-> Bit . {
      [] <-> []
    | h :: t <-> (psi h) :: ((phi @@ next psi) @@ t)
  };
iso mapnot : LBit <-> LBit = map notb;

iso qctrl : (Bit <-> Bit) -> (Bit <-> Bit) -> (Bit * Bit <-> Bit * Bit) =
  \f : Bit <-> Bit . \g : Bit <-> Bit . {
      ('0, y) <-> ('0, f y)
    | ('1, y) <-> ('1, g y)
  };
iso cnot : Bit * Bit <-> Bit * Bit = (qctrl idbit) notb;

iso rot : (Bit <-> Bit) -> (Bit <-> Bit) -> (LBit <-> LBit) =
  fix phi : (Bit <-> Bit) -> (Bit <-> Bit) -> (LBit <-> LBit) .
  \psi : Bit <-> Bit . \psi2 : Bit <-> Bit . {
      [] <-> []
    | h :: t <-> (psi2 h) :: (((phi @@ next psi) @@ next (psi << psi2)) @@ t)
  };
iso rotnot : LBit <-> LBit = (rot notb) idbit;

iso idd : @LBit <-> @LBit = { u <-> u };
iso gradd : @LBit <-> @LBit = { u <-> (next rotgrad) @@ u };
iso crot : Bit * @LBit <-> Bit * @LBit =
  (\f : @LBit <-> @LBit . \g : @LBit <-> @LBit . {
      ('0, y) <-> ('0, f y)
    | ('1, y) <-> ('1, g y)
  }) idd gradd;

iso qft : (Bit <-> Bit) -> (LBit <-> LBit) =
  fix phi : (Bit <-> Bit) -> (LBit <-> LBit) . \psi : Bit <-> Bit . {
      [] <-> []
    | h :: next t <->
        let (h2, t2) = crot ((psi h), next t) in
        h2 :: ((phi @@ next psi) @@ t2)
  };
iso qfthad : LBit <-> LBit = qft had;
)";
}

namespace props_detail {

// Shared random inputs, generated once so both backends see the same data.
// Random isos are generated as source text and loaded alongside the corpus:
// that keeps every iso leaf a named reference, which is what the term-level
// application rules can synthesize, and exercises the printer/parser pair.
struct RandomInputs {
  std::vector<TypePtr> types;
  std::string iso_decls;
  std::vector<std::string> iso_names;  // all classical
  std::vector<std::pair<std::string, TypePtr>> functor_bodies;  // var fixed "X"
};

inline TypePtr small_type(Gen& g, int maxdim) {
  for (int a = 0; a < 80; ++a) {
    TypePtr t = gen_type(g, 2);
    bool ok = true;
    for (int n = 0; n <= 6 && ok; ++n) ok = type_dim_at(t, n) <= maxdim;
    if (ok) return t;
  }
  return t_one();
}

inline TermPtr nil_term() { return m_fold(m_inl(m_unit())); }

inline RandomInputs make_random_inputs(const PropOptions& opt) {
  RandomInputs r;
  Gen gt(opt.seed);
  for (int i = 0; i < opt.random_types; ++i) r.types.push_back(gen_type(gt, 4));

  Gen gi(opt.seed ^ 0x9e3779b97f4a7c15ull);
  std::string& src = r.iso_decls;
  auto add = [&](const std::string& name, const std::string& decl) {
    src += decl;
    r.iso_names.push_back(name);
  };
  for (int i = 0; i < 4; ++i) {  // sum swaps on random summands
    std::string n = "rswap" + std::to_string(i);
    std::string d = "(" + show_type(small_type(gi, 32)) + ")";
    std::string c = d + " + " + d;
    add(n, "iso " + n + " : " + c + " <-> " + c +
               " = { inl x <-> inr x | inr x <-> inl x };\n");
  }
  for (int i = 0; i < 2; ++i) {  // identities on full random types
    std::string n = "rid" + std::to_string(i);
    std::string a = "(" + show_type(gen_type(gi, 4)) + ")";
    add(n, "iso " + n + " : " + a + " <-> " + a + " = { x <-> x };\n");
  }
  for (int i = 0; i < 3; ++i) {  // elementwise maps of swaps over tiny summands
    std::string en = "relem" + std::to_string(i);
    std::string mn = "rmap" + std::to_string(i);
    std::string d = "(" + show_type(small_type(gi, 1)) + ")";
    std::string c = "(" + d + " + " + d + ")";
    std::string lc = "(mu X . 1 + " + c + " * @X)";
    std::string ct = c + " <-> " + c;
    add(en, "iso " + en + " : " + ct +
                " = { inl x <-> inr x | inr x <-> inl x };\n");
    add(mn, "iso " + mn + " : " + lc + " <-> " + lc +
                " = (fix phi : (" + ct + ") -> (" + lc + " <-> " + lc +
                ") . \\psi : " + ct +
                " . {\n    [] <-> []\n  | h :: t <-> (psi h) :: ((phi @@ next psi) @@ t)\n}) " +
                en + ";\n");
  }

  Gen gf(opt.seed ^ 0x5851f42d4c957f2dull);
  for (int i = 0; i < 8; ++i)
    r.functor_bodies.emplace_back("rfunc" + std::to_string(i),
                                  gen_functor_body(gf, "X", 4));
  return r;
}

// Per-backend pools of denoted material.
template <class B>
struct Pool {
  Denoter<B>* den = nullptr;
  std::vector<std::pair<std::string, Cochain<B>>> types;
  std::vector<std::pair<std::string, StagedMor<B>>> mors;     // natural families
  std::vector<std::pair<std::string, StagedMor<B>>> checked;  // checked isos
};

template <class B>
void build_pool(Pool<B>& P, Denoter<B>& den, const LoadedProgram& lp,
                const RandomInputs& rnd, bool classical_only) {
  P.den = &den;
  for (const char* name : {"Bit", "LBit", "Nat"}) {
    const Decl* d = find_decl(lp.resolved, name);
    P.types.emplace_back(name, den.type_den(d->type));
  }
  for (size_t i = 0; i < rnd.types.size(); ++i)
    P.types.emplace_back("rty" + std::to_string(i), den.type_den(rnd.types[i]));

  std::vector<std::string> names = {"idbit", "notb",   "idnat", "flip",
                                    "mapnot", "cnot",  "rotnot", "idd"};
  if (!classical_only)
    for (const char* q : {"gradd", "crot", "qfthad", "had", "rot2", "rot3", "rotgrad"})
      names.push_back(q);
  for (const std::string& n : rnd.iso_names) names.push_back(n);
  for (const std::string& n : names)
    P.checked.emplace_back((classical_only ? "pinj:" : "hilb:") + n,
                           den.iso_staged(n));

  P.mors = P.checked;
  std::string tag = classical_only ? "pinj:" : "hilb:";
  for (const auto& [name, x] : P.types) {
    P.mors.emplace_back(tag + "id[" + name + "]", id_nat(x));
    P.mors.emplace_back(tag + "next[" + name + "]", next_mor(x));
    P.mors.emplace_back(tag + "bang[" + name + "]", bang_nat(x));
  }
  // functorial actions of the corpus recursive bodies on next
  for (const char* name : {"LBit", "Nat"}) {
    const Decl* d = find_decl(lp.resolved, name);
    const TypePtr& mu = d->type;
    StagedMor<B> f = next_mor(den.type_den(mu));
    P.mors.emplace_back(tag + "F[" + std::string(name) + "](next)",
                        functor_on_mor<B>(mu->a, mu->name, f, {}));
    P.mors.emplace_back(tag + "fold[" + std::string(name) + "]",
                        fold_iso<B>(mu, {}));
  }
}

struct Recorder {
  PropResult* r;
  void check(bool ok, const std::string& witness) {
    if (ok) {
      ++r->pass;
    } else {
      ++r->fail;
      if (r->failures.size() < 5) r->failures.push_back(witness);
    }
  }
};

// A non-zero alternative placeholder of a fix annotation: lambdas down to
// the iso core, which becomes the partial identity on the empty list.
inline IsoPtr alt_placeholder(const FunPtr& t, int depth = 0) {
  if (t->tag == FunTag::Arrow)
    return w_lambda("altp" + std::to_string(depth), t->fa,
                    alt_placeholder(t->fb, depth + 1));
  if (t->tag == FunTag::Iso)
    return w_clauses({{nil_term(), nil_term(), {}}});
  return w_zeroiso(t);
}

template <class B>
void run_backend_suites(Pool<B>& P, const LoadedProgram& lp,
                        const PropOptions& opt,
                        std::map<std::string, PropResult>& out) {
  const int N = opt.stage_bound;
  const double tol = backend_tol<B>();
  auto want = [&](const char* s) { return opt.only.empty() || opt.only == s; };
  auto rec = [&](const char* s) { return Recorder{&out[s]}; };

  if (want("naturality")) {
    Recorder R = rec("naturality");
    for (const auto& [name, f] : P.mors)
      R.check(is_natural(f, N, tol), name);
  }

  if (want("restrict-hom")) {
    Recorder R = rec("restrict-hom");
    for (const auto& [name, f] : P.mors) {
      bool ok = true;
      for (int n = 0; n < N && ok; ++n)
        ok = mor_eq<B>(restrict_hom<B>(f.at(n + 1), f.src(), f.dst(), n),
                       f.at(n), tol);
      R.check(ok, name);
    }
  }

  if (want("dagger-epi")) {
    Recorder R = rec("dagger-epi");
    for (const auto& [name, x] : P.types)
      R.check(restrictions_are_dagger_epi(x, N, tol), name);
  }

  size_t nt = P.types.size();
  if (want("later-sum-dist")) {
    Recorder R = rec("later-sum-dist");
    for (size_t i = 0; i < std::min<size_t>(8, nt); ++i) {
      const auto& [xn, x] = P.types[i];
      const auto& [yn, y] = P.types[(i * 7 + 3) % nt];
      StagedMor<B> d = dist_later_sum(x, y);
      bool ok = is_natural(d, N, tol);
      for (int n = 0; n <= N && ok; ++n) ok = mor_is_dagger_iso<B>(d.at(n), tol);
      R.check(ok, "dist[" + xn + "," + yn + "]");
    }
  }

  if (want("nu-iota")) {
    Recorder R = rec("nu-iota");
    for (size_t i = 0; i < std::min<size_t>(8, nt); ++i) {
      const auto& [xn, x] = P.types[i];
      const auto& [yn, y] = P.types[(i * 5 + 2) % nt];
      auto xy = sum_cochain(x, y);
      // next is natural at the left injection ...
      auto l1 = compose_nat(next_mor(xy), inj_l_nat(x, y));
      auto r1 = compose_nat(conjugate_by_next(inj_l_nat(x, y)), next_mor(x));
      // ... and the distribution turns next-into-sum into sum-of-nexts.
      auto l2 = compose_nat(dist_later_sum(x, y), compose_nat(next_mor(xy), inj_l_nat(x, y)));
      auto r2 = compose_nat(inj_l_nat(later(x), later(y)), next_mor(x));
      bool ok = true;
      for (int n = 0; n <= N && ok; ++n)
        ok = mor_eq<B>(l1.at(n), r1.at(n), tol) && mor_eq<B>(l2.at(n), r2.at(n), tol);
      R.check(ok, "nu-iota[" + xn + "," + yn + "]");
    }
  }

  if (want("niso")) {
    Recorder R = rec("niso");
    for (const auto& [name, f] : P.mors)
      for (int n = 0; n <= 2; ++n)
        if (is_n_iso(f, n, tol))
          R.check(is_n_iso(conjugate_by_next(f), n + 1, tol),
                  name + " n=" + std::to_string(n));
  }

  if (want("daggerable")) {
    Recorder R = rec("daggerable");
    for (const auto& [name, f] : P.checked)
      R.check(is_daggerable(f, N, tol), name);
  }

  if (want("join-laws")) {
    Recorder R = rec("join-laws");
    Gen g(opt.seed ^ 0xabcdefull);
    for (int s = 0; s < 12; ++s) {
      int sti = g.range(0, (int)nt - 1), ssi = g.range(0, 3);
      int dti = g.range(0, (int)nt - 1), dsi = g.range(0, 3);
      ShapePtr src = P.types[sti].second.shape(ssi);
      ShapePtr dst = P.types[dti].second.shape(dsi);
      typename B::Mor f, h;
      if constexpr (std::is_same_v<B, Hilb>)
        std::tie(f, h) = gen_compatible_hilb(g, src, dst);
      else
        std::tie(f, h) = gen_compatible_pinj(g, src, dst);
      std::string w = "sample " + std::to_string(s);
      R.check(mor_compatible<B>(f, h, tol), w + " compatible");
      auto j = mor_join<B>(f, h, tol);
      R.check(mor_eq<B>(j, mor_join<B>(h, f, tol), tol), w + " commutative");
      R.check(mor_compatible<B>(B::dagger(f), B::dagger(h), tol), w + " daggers compatible");
      R.check(mor_eq<B>(B::dagger(j),
                        mor_join<B>(B::dagger(f), B::dagger(h), tol), tol),
              w + " dagger of join");
      R.check(mor_eq<B>(mor_join<B>(f, B::zero(src, dst), tol), f, tol),
              w + " zero unit");
    }
  }

  // Fixed-point suites: unfold with explicit placeholders and compare the
  // denotations of the applied first-order instances.
  struct FixCase {
    const char* fix;
    std::vector<const char*> args;
    bool classical;
  };
  std::vector<FixCase> cases = {{"map", {"notb"}, true},
                                {"rot", {"notb", "idbit"}, true},
                                {"qft", {"had"}, false}};
  bool classical_only = std::is_same_v<B, Pinj>;
  auto applied = [&](IsoPtr u, const FixCase& c) {
    for (const char* a : c.args) u = w_appiso(u, w_fvar(a));
    return u;
  };
  int fixN = std::min(N, 4);

  if (want("fix-placeholder")) {
    Recorder R = rec("fix-placeholder");
    for (const auto& c : cases) {
      if (classical_only && !c.classical) continue;
      const Decl* d = find_decl(lp.resolved, c.fix);
      FunPtr ity = d->funty;
      while (ity->tag == FunTag::Arrow) ity = ity->fb;
      for (int n = 0; n <= fixN; ++n) {
        IsoPtr u0 = iterate_fix(d->iso, n + 1, w_zeroiso(d->iso->ann), n, lp.globals);
        IsoPtr u1 = iterate_fix(d->iso, n + 1, alt_placeholder(d->iso->ann), n, lp.globals);
        auto m0 = P.den->iso_expr_mor(applied(u0, c), ity, n);
        auto m1 = P.den->iso_expr_mor(applied(u1, c), ity, n);
        R.check(mor_eq<B>(m0, m1, tol),
                std::string(c.fix) + " stage " + std::to_string(n));
      }
    }
  }

  if (want("fix-iterate")) {
    Recorder R = rec("fix-iterate");
    for (const auto& c : cases) {
      if (classical_only && !c.classical) continue;
      const Decl* d = find_decl(lp.resolved, c.fix);
      FunPtr ity = d->funty;
      while (ity->tag == FunTag::Arrow) ity = ity->fb;
      for (int n = 0; n <= fixN; ++n) {
        IsoPtr u1 = iterate_fix(d->iso, n + 1, w_zeroiso(d->iso->ann), n, lp.globals);
        IsoPtr u2 = iterate_fix(d->iso, n + 2, w_zeroiso(d->iso->ann), n, lp.globals);
        auto m1 = P.den->iso_expr_mor(applied(u1, c), ity, n);
        auto m2 = P.den->iso_expr_mor(applied(u2, c), ity, n);
        R.check(mor_eq<B>(m1, m2, tol),
                std::string(c.fix) + " stage " + std::to_string(n));
      }
    }
  }
}

inline void run_stabilization(const LoadedProgram& lp, const RandomInputs& rnd,
                              const PropOptions& opt,
                              std::map<std::string, PropResult>& out) {
  Recorder R{&out["stabilization"]};
  std::vector<std::pair<std::string, TypePtr>> mus;
  for (const char* name : {"Nat", "LBit"})
    mus.emplace_back(name, find_decl(lp.resolved, name)->type);
  for (const auto& [name, body] : rnd.functor_bodies)
    mus.emplace_back(name, t_mu("X", body));

  for (const auto& [name, mu] : mus) {
    Cochain<Pinj> full = denote_type<Pinj>(mu, {});
    for (int j = 0; j <= 4; ++j) {
      ShapePtr s0 = mu_iterate<Pinj>(mu, {}, j + 1).shape(j);
      bool ok = shape_eq(full.shape(j), s0);
      for (int m = j + 2; m <= j + 4 && ok; ++m)
        ok = shape_eq(mu_iterate<Pinj>(mu, {}, m).shape(j), s0);
      R.check(ok, name + " stage " + std::to_string(j));
    }
  }
}

}  // namespace props_detail

inline std::vector<PropResult> run_prop_suites(const PropOptions& opt) {
  props_detail::RandomInputs rnd = props_detail::make_random_inputs(opt);
  LoadedProgram lp = load_program(std::string(prop_corpus()) + rnd.iso_decls);

  Denoter<Pinj> dp(lp.globals);
  Denoter<Hilb> dh(lp.globals);
  props_detail::Pool<Pinj> pp;
  props_detail::Pool<Hilb> ph;
  props_detail::build_pool(pp, dp, lp, rnd, /*classical_only=*/true);
  props_detail::build_pool(ph, dh, lp, rnd, /*classical_only=*/false);

  std::map<std::string, PropResult> out;
  props_detail::run_backend_suites(pp, lp, opt, out);
  props_detail::run_backend_suites(ph, lp, opt, out);
  if (opt.only.empty() || opt.only == "stabilization")
    props_detail::run_stabilization(lp, rnd, opt, out);

  std::vector<PropResult> res;
  for (const std::string& name : prop_suite_names()) {
    auto it = out.find(name);
    if (it == out.end()) continue;
    it->second.suite = name;
    res.push_back(std::move(it->second));
  }
  return res;
}

inline bool all_passed(const std::vector<PropResult>& rs) {
  if (rs.empty()) return false;
  for (const auto& r : rs)
    if (r.fail > 0) return false;
  return true;
}

}  // namespace gpm
