// The guarded construction over a dagger-rig backend: cochains of shapes
// connected by dagger-epi restriction maps, staged morphisms between them,
// the later/next structure, denotation of recursive types via truncated
// terminal sequences, and the functorial action used both for recursive-type
// restrictions and for the n-isomorphism analyses.
//
// Everything here is templated over a backend B (Pinj or Hilb) exposing the
// dagger-rig operations; morphism equality is exact for partial injections
// and tolerance-based for matrices, smoothed over by the mor_* wrappers.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gpm/ast.hpp"
#include "gpm/diagnostics.hpp"
#include "gpm/shapes.hpp"

namespace gpm {

// ---------------------------------------------------------------------------
// Backend-uniform wrappers. Pinj comparisons are exact and take no tolerance;
// Hilb ones do. Template code below calls these instead of B::... directly.

template <class B>
double backend_tol() {
  if constexpr (requires { B::default_tol; })
    return B::default_tol;
  else
    return 0.0;
}

template <class B>
bool mor_eq(const typename B::Mor& f, const typename B::Mor& g, double tol) {
  if constexpr (requires { B::eq(f, g, tol); })
    return B::eq(f, g, tol);
  else
    return B::eq(f, g);
}

template <class B>
bool mor_compatible(const typename B::Mor& f, const typename B::Mor& g,
                    double tol) {
  if constexpr (requires { B::compatible(f, g, tol); })
    return B::compatible(f, g, tol);
  else
    return B::compatible(f, g);
}

template <class B>
typename B::Mor mor_join(const typename B::Mor& f, const typename B::Mor& g,
                         double tol) {
  if constexpr (requires { B::join(f, g, tol); })
    return B::join(f, g, tol);
  else
    return B::join(f, g);
}

template <class B>
bool mor_is_dagger_epi(const typename B::Mor& f, double tol) {
  if constexpr (requires { B::is_dagger_epi(f, tol); })
    return B::is_dagger_epi(f, tol);
  else
    return B::is_dagger_epi(f);
}

template <class B>
bool mor_is_dagger_iso(const typename B::Mor& f, double tol) {
  if constexpr (requires { B::is_dagger_iso(f, tol); })
    return B::is_dagger_iso(f, tol);
  else
    return B::is_dagger_iso(f);
}

template <class B>
bool mor_is_plain_iso(const typename B::Mor& f, double tol) {
  if constexpr (requires { B::is_plain_iso(f, tol); })
    return B::is_plain_iso(f, tol);
  else
    return B::is_plain_iso(f);
}

// ---------------------------------------------------------------------------
// Cochain: stage-indexed shapes X(0), X(1), ... with restriction maps
// r^X_n : X(n+1) -> X(n). Values are immutable; the shared state only caches.

template <class B>
class Cochain {
 public:
  using Mor = typename B::Mor;
  using ShapeFn = std::function<ShapePtr(int)>;
  using RestrFn = std::function<Mor(int)>;

  Cochain() = default;
  Cochain(ShapeFn sf, RestrFn rf)
      : st_(std::make_shared<State>(State{std::move(sf), std::move(rf), {}, {}})) {}

  bool valid() const { return st_ != nullptr; }

  ShapePtr shape(int n) const {
    if (n < 0) throw std::logic_error("cochain: negative stage");
    auto& memo = st_->shapes;
    if ((int)memo.size() <= n) memo.resize(n + 1, nullptr);
    if (!memo[n]) memo[n] = st_->shape_fn(n);
    return memo[n];
  }

  // r^X_n : X(n+1) -> X(n)
  Mor restr(int n) const {
    if (n < 0) throw std::logic_error("cochain: negative stage");
    auto& memo = st_->restrs;
    if ((int)memo.size() <= n) memo.resize(n + 1);
    if (!memo[n]) memo[n] = st_->restr_fn(n);
    return *memo[n];
  }

  // Identity of the underlying lazy object; used as an env fingerprint.
  const void* key() const { return st_.get(); }

 private:
  struct State {
    ShapeFn shape_fn;
    RestrFn restr_fn;
    std::vector<ShapePtr> shapes;
    std::vector<std::optional<Mor>> restrs;
  };
  std::shared_ptr<State> st_;
};

// ---------------------------------------------------------------------------
// StagedMor: a stage-indexed family f_n : X(n) -> Y(n). Naturality against
// the restrictions is a property (is_natural), not a construction invariant,
// so that deliberately broken families can be built in tests.

template <class B>
class StagedMor {
 public:
  using Mor = typename B::Mor;
  using AtFn = std::function<Mor(int)>;

  StagedMor() = default;
  StagedMor(Cochain<B> src, Cochain<B> dst, AtFn at)
      : st_(std::make_shared<State>(
            State{std::move(src), std::move(dst), std::move(at), {}})) {}

  bool valid() const { return st_ != nullptr; }
  const Cochain<B>& src() const { return st_->src; }
  const Cochain<B>& dst() const { return st_->dst; }

  Mor at(int n) const {
    if (n < 0) throw std::logic_error("staged morphism: negative stage");
    auto& memo = st_->memo;
    if ((int)memo.size() <= n) memo.resize(n + 1);
    if (!memo[n]) memo[n] = st_->at_fn(n);
    return *memo[n];
  }

 private:
  struct State {
    Cochain<B> src, dst;
    AtFn at_fn;
    std::vector<std::optional<Mor>> memo;
  };
  std::shared_ptr<State> st_;
};

// ---------------------------------------------------------------------------
// Basic cochains and staged morphisms.

template <class B>
Cochain<B> constant_cochain(ShapePtr s) {
  return Cochain<B>([s](int) { return s; }, [s](int) { return B::id(s); });
}

template <class B>
Cochain<B> zero_cochain() {
  return constant_cochain<B>(zero_shape());
}

template <class B>
Cochain<B> sum_cochain(Cochain<B> x, Cochain<B> y) {
  return Cochain<B>(
      [x, y](int n) { return sum_shape(x.shape(n), y.shape(n)); },
      [x, y](int n) { return B::tensor_sum(x.restr(n), y.restr(n)); });
}

template <class B>
Cochain<B> prod_cochain(Cochain<B> x, Cochain<B> y) {
  return Cochain<B>(
      [x, y](int n) { return prod_shape(x.shape(n), y.shape(n)); },
      [x, y](int n) { return B::tensor_prod(x.restr(n), y.restr(n)); });
}

// (later X)(0) = O and (later X)(n+1) = X(n); the stage-0 restriction is the
// unique map X(0) -> O.
template <class B>
Cochain<B> later(Cochain<B> x) {
  return Cochain<B>(
      [x](int n) { return n == 0 ? zero_shape() : x.shape(n - 1); },
      [x](int n) {
        return n == 0 ? B::bang(x.shape(0)) : x.restr(n - 1);
      });
}

template <class B>
StagedMor<B> id_nat(Cochain<B> x) {
  return StagedMor<B>(x, x, [x](int n) { return B::id(x.shape(n)); });
}

// The unique staged morphism into the zero cochain (terminal = zero object).
template <class B>
StagedMor<B> bang_nat(Cochain<B> x) {
  return StagedMor<B>(x, zero_cochain<B>(),
                      [x](int n) { return B::bang(x.shape(n)); });
}

// next : X -> later X, with stage 0 the unique map to O and stage n+1 = r^X_n.
template <class B>
StagedMor<B> next_mor(Cochain<B> x) {
  return StagedMor<B>(x, later(x), [x](int n) {
    return n == 0 ? B::bang(x.shape(0)) : x.restr(n - 1);
  });
}

// Functorial action of later on staged morphisms: nu_Y . f . nu_X^dagger,
// which concretely shifts the family by one stage.
template <class B>
StagedMor<B> conjugate_by_next(StagedMor<B> f) {
  return StagedMor<B>(later(f.src()), later(f.dst()), [f](int n) {
    return n == 0 ? B::id(zero_shape()) : f.at(n - 1);
  });
}

template <class B>
StagedMor<B> sum_mor(StagedMor<B> f, StagedMor<B> g) {
  return StagedMor<B>(sum_cochain(f.src(), g.src()),
                      sum_cochain(f.dst(), g.dst()),
                      [f, g](int n) { return B::tensor_sum(f.at(n), g.at(n)); });
}

template <class B>
StagedMor<B> prod_mor(StagedMor<B> f, StagedMor<B> g) {
  return StagedMor<B>(prod_cochain(f.src(), g.src()),
                      prod_cochain(f.dst(), g.dst()),
                      [f, g](int n) { return B::tensor_prod(f.at(n), g.at(n)); });
}

template <class B>
StagedMor<B> compose_nat(StagedMor<B> g, StagedMor<B> f) {
  return StagedMor<B>(f.src(), g.dst(),
                      [f, g](int n) { return B::compose(g.at(n), f.at(n)); });
}

// Pointwise dagger. The result need not be natural; is_daggerable says when.
template <class B>
StagedMor<B> dagger_nat(StagedMor<B> f) {
  return StagedMor<B>(f.dst(), f.src(),
                      [f](int n) { return B::dagger(f.at(n)); });
}

// Coproduct injections at morphism and staged level. iota_1 is built as
// X -> X+0 -> X+Y so that both backends get it from the same coherence data.
template <class B>
typename B::Mor inj_l_mor(ShapePtr x, ShapePtr y) {
  auto embed = B::lift_bij(invert_bij(coherence_bij(Coh::UnitrSum, x)));
  return B::compose(B::tensor_sum(B::id(x), B::cobang(y)), embed);
}

template <class B>
typename B::Mor inj_r_mor(ShapePtr x, ShapePtr y) {
  auto embed = B::lift_bij(invert_bij(coherence_bij(Coh::UnitlSum, y)));
  return B::compose(B::tensor_sum(B::cobang(x), B::id(y)), embed);
}

template <class B>
StagedMor<B> inj_l_nat(Cochain<B> x, Cochain<B> y) {
  return StagedMor<B>(x, sum_cochain(x, y), [x, y](int n) {
    return inj_l_mor<B>(x.shape(n), y.shape(n));
  });
}

template <class B>
StagedMor<B> inj_r_nat(Cochain<B> x, Cochain<B> y) {
  return StagedMor<B>(y, sum_cochain(x, y), [x, y](int n) {
    return inj_r_mor<B>(x.shape(n), y.shape(n));
  });
}

// later(X + Y) -> later X + later Y. Stages n+1 are identities on the nose;
// stage 0 is the (empty) unitor O -> O + O.
template <class B>
StagedMor<B> dist_later_sum(Cochain<B> x, Cochain<B> y) {
  auto src = later(sum_cochain(x, y));
  auto dst = sum_cochain(later(x), later(y));
  return StagedMor<B>(src, dst, [x, y](int n) {
    if (n == 0)
      return B::lift_bij(
          invert_bij(coherence_bij(Coh::UnitlSum, zero_shape())));
    return B::id(sum_shape(x.shape(n - 1), y.shape(n - 1)));
  });
}

// r^Y_n . f . (r^X_n)^dagger : X(n) -> Y(n), for f : X(n+1) -> Y(n+1). For a
// natural daggerable family this recovers f_n from f_{n+1}.
template <class B>
typename B::Mor restrict_hom(const typename B::Mor& f, const Cochain<B>& x,
                             const Cochain<B>& y, int n) {
  return B::compose(y.restr(n), B::compose(f, B::dagger(x.restr(n))));
}

// ---------------------------------------------------------------------------
// Property analyses (all bounded by a stage cap N).

template <class B>
bool is_natural(const StagedMor<B>& f, int N, double tol = backend_tol<B>()) {
  for (int n = 0; n < N; ++n) {
    auto lhs = B::compose(f.dst().restr(n), f.at(n + 1));
    auto rhs = B::compose(f.at(n), f.src().restr(n));
    if (!mor_eq<B>(lhs, rhs, tol)) return false;
  }
  return true;
}

// f is daggerable when the pointwise daggers again form a natural family:
// f^dagger_n . r^Y_n = r^X_n . f^dagger_{n+1} for all n < N.
template <class B>
bool is_daggerable(const StagedMor<B>& f, int N,
                   double tol = backend_tol<B>()) {
  for (int n = 0; n < N; ++n) {
    auto lhs = B::compose(B::dagger(f.at(n)), f.dst().restr(n));
    auto rhs = B::compose(f.src().restr(n), B::dagger(f.at(n + 1)));
    if (!mor_eq<B>(lhs, rhs, tol)) return false;
  }
  return true;
}

// n-isomorphism: the first n components are (plain) isomorphisms.
template <class B>
bool is_n_iso(const StagedMor<B>& f, int n, double tol = backend_tol<B>()) {
  for (int k = 0; k < n; ++k)
    if (!mor_is_plain_iso<B>(f.at(k), tol)) return false;
  return true;
}

template <class B>
bool restrictions_are_dagger_epi(const Cochain<B>& x, int N,
                                 double tol = backend_tol<B>()) {
  for (int n = 0; n < N; ++n)
    if (!mor_is_dagger_epi<B>(x.restr(n), tol)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Type denotation. Types must be resolved (no Named nodes) and well-formed;
// the environment carries cochains for free type variables.

template <class B>
using TypeEnv = std::map<std::string, Cochain<B>>;
template <class B>
using MorEnv = std::map<std::string, StagedMor<B>>;

template <class B>
Cochain<B> denote_type(const TypePtr& a, const TypeEnv<B>& env);

template <class B>
StagedMor<B> functor_on_mor(const TypePtr& a, const TypeEnv<B>& se,
                            const TypeEnv<B>& de, const MorEnv<B>& me);

namespace detail {

// Shared lazy state for one recursive type: the truncated terminal sequence
// towers[k] = F^k Z together with the chain us[k] = F^k(!) : F^{k+1}Z -> F^k Z.
template <class B>
struct MuState {
  std::string var;
  TypePtr body;
  TypeEnv<B> env;
  std::vector<Cochain<B>> towers;
  std::vector<StagedMor<B>> us;

  void ensure_towers(int k) {
    if (towers.empty()) towers.push_back(zero_cochain<B>());
    while ((int)towers.size() <= k) {
      TypeEnv<B> e = env;
      e[var] = towers.back();
      towers.push_back(denote_type<B>(body, e));
    }
  }

  void ensure_us(int k) {
    ensure_towers(k + 1);
    if (us.empty()) us.push_back(bang_nat<B>(towers[1]));
    while ((int)us.size() <= k) {
      int j = (int)us.size();
      TypeEnv<B> se = env, de = env;
      se[var] = towers[j];
      de[var] = towers[j - 1];
      MorEnv<B> me;
      me[var] = us[j - 1];
      us.push_back(functor_on_mor<B>(body, se, de, me));
    }
  }
};

// Lazy chain of functorial actions for a nested recursive type inside
// functor_on_mor: vs[k] : (mu under se)-tower_k -> (mu under de)-tower_k.
template <class B>
struct MuMorState {
  std::string var;
  TypePtr body;
  TypeEnv<B> se, de;
  MorEnv<B> me;
  std::vector<Cochain<B>> src_towers, dst_towers;
  std::vector<StagedMor<B>> vs;

  void ensure(int k) {
    if (src_towers.empty()) {
      src_towers.push_back(zero_cochain<B>());
      dst_towers.push_back(zero_cochain<B>());
      vs.push_back(id_nat<B>(src_towers[0]));
    }
    while ((int)vs.size() <= k) {
      int j = (int)vs.size();
      TypeEnv<B> se2 = se, de2 = de;
      se2[var] = src_towers[j - 1];
      de2[var] = dst_towers[j - 1];
      MorEnv<B> me2 = me;
      me2[var] = vs[j - 1];
      vs.push_back(functor_on_mor<B>(body, se2, de2, me2));
      src_towers.push_back(denote_type<B>(body, se2));
      dst_towers.push_back(denote_type<B>(body, de2));
    }
  }
};

}  // namespace detail

// F^m Z for the recursive type muA (stage truncation helper; exposed for the
// shape-stabilization property).
template <class B>
Cochain<B> mu_iterate(const TypePtr& muA, const TypeEnv<B>& env, int m) {
  if (muA->tag != TypeTag::Mu) throw std::logic_error("mu_iterate: not a mu type");
  Cochain<B> x = zero_cochain<B>();
  for (int i = 0; i < m; ++i) {
    TypeEnv<B> e = env;
    e[muA->name] = x;
    x = denote_type<B>(muA->a, e);
  }
  return x;
}

template <class B>
Cochain<B> denote_type(const TypePtr& a, const TypeEnv<B>& env) {
  switch (a->tag) {
    case TypeTag::Zero:
      return zero_cochain<B>();
    case TypeTag::One:
      return constant_cochain<B>(one_shape());
    case TypeTag::Sum:
      return sum_cochain(denote_type<B>(a->a, env), denote_type<B>(a->b, env));
    case TypeTag::Prod:
      return prod_cochain(denote_type<B>(a->a, env), denote_type<B>(a->b, env));
    case TypeTag::Later:
      return later(denote_type<B>(a->a, env));
    case TypeTag::TVar: {
      auto it = env.find(a->name);
      if (it == env.end())
        throw CheckError(Errc::UnboundTypeVar,
                         "type variable '" + a->name + "' has no denotation",
                         a->pos);
      return it->second;
    }
    case TypeTag::Mu: {
      auto st = std::make_shared<detail::MuState<B>>();
      st->var = a->name;
      st->body = a->a;
      st->env = env;
      // Omega(n) = F^{n+1} Z (n); r^Omega_n = F^{n+1}(!)_n . r^{F^{n+2}Z}_n.
      return Cochain<B>(
          [st](int n) {
            st->ensure_towers(n + 1);
            return st->towers[n + 1].shape(n);
          },
          [st](int n) {
            st->ensure_us(n + 1);
            st->ensure_towers(n + 2);
            return B::compose(st->us[n + 1].at(n),
                              st->towers[n + 2].restr(n));
          });
    }
    case TypeTag::Named:
      throw std::logic_error("denote_type: unresolved type name '" + a->name +
                             "'");
  }
  throw std::logic_error("denote_type: bad tag");
}

template <class B>
StagedMor<B> functor_on_mor(const TypePtr& a, const TypeEnv<B>& se,
                            const TypeEnv<B>& de, const MorEnv<B>& me) {
  switch (a->tag) {
    case TypeTag::Zero:
    case TypeTag::One:
      return id_nat<B>(denote_type<B>(a, se));
    case TypeTag::TVar: {
      auto it = me.find(a->name);
      if (it != me.end()) return it->second;
      return id_nat<B>(denote_type<B>(a, se));
    }
    case TypeTag::Sum:
      return sum_mor(functor_on_mor<B>(a->a, se, de, me),
                     functor_on_mor<B>(a->b, se, de, me));
    case TypeTag::Prod:
      return prod_mor(functor_on_mor<B>(a->a, se, de, me),
                      functor_on_mor<B>(a->b, se, de, me));
    case TypeTag::Later:
      return conjugate_by_next(functor_on_mor<B>(a->a, se, de, me));
    case TypeTag::Mu: {
      auto st = std::make_shared<detail::MuMorState<B>>();
      st->var = a->name;
      st->body = a->a;
      st->se = se;
      st->de = de;
      st->me = me;
      auto src = denote_type<B>(a, se);
      auto dst = denote_type<B>(a, de);
      return StagedMor<B>(src, dst, [st](int n) {
        st->ensure(n + 1);
        return st->vs[n + 1].at(n);
      });
    }
    case TypeTag::Named:
      throw std::logic_error("functor_on_mor: unresolved type name '" +
                             a->name + "'");
  }
  throw std::logic_error("functor_on_mor: bad tag");
}

// Single-variable convenience form: the action of X |-> A on f, in env.
template <class B>
StagedMor<B> functor_on_mor(const TypePtr& a, const std::string& var,
                            const StagedMor<B>& f, const TypeEnv<B>& env) {
  TypeEnv<B> se = env, de = env;
  se[var] = f.src();
  de[var] = f.dst();
  MorEnv<B> me;
  me[var] = f;
  return functor_on_mor<B>(a, se, de, me);
}

// fold : F(Omega) -> Omega. For guarded recursive types the two sides have
// literally equal stage shapes (shape stabilization), so every component is
// an identity; the equality is asserted so a non-guarded functor slipping
// through fails loudly instead of silently misdenoting.
template <class B>
StagedMor<B> fold_iso(const TypePtr& muA, const TypeEnv<B>& env) {
  if (muA->tag != TypeTag::Mu) throw std::logic_error("fold_iso: not a mu type");
  auto omega = denote_type<B>(muA, env);
  TypeEnv<B> e = env;
  e[muA->name] = omega;
  auto f_omega = denote_type<B>(muA->a, e);
  return StagedMor<B>(f_omega, omega, [f_omega, omega, muA](int n) {
    ShapePtr s = f_omega.shape(n);
    ShapePtr t = omega.shape(n);
    if (!shape_eq(s, t))
      throw CheckError(Errc::ShapeStabilizationFailure,
                       "unfolding of '" + muA->name +
                           "' did not stabilize at stage " + std::to_string(n) +
                           ": " + show_shape(s) + " vs " + show_shape(t),
                       muA->pos);
    return B::id(s);
  });
}

}  // namespace gpm
