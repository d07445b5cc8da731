#include "gpm/gen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>

#include "gpm/shapes.hpp"
#include "gpm/typecheck.hpp"

namespace gpm {

namespace {

constexpr int64_t kDimClamp = 1'000'000'000;

int64_t clamped_mul(int64_t a, int64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kDimClamp / b) return kDimClamp;
  return a * b;
}

// Dimension of a type at each stage 0..n under an environment assigning a
// per-stage dimension vector to every bound mu variable. Mirrors the staged
// interpretation: @ shifts the stage down (empty at stage 0) and mu is the
// (n+1)-fold iterate of its body from the empty cochain.
std::vector<int64_t> dims_upto(const TypePtr& a, int n,
                               std::map<std::string, std::vector<int64_t>>& env) {
  std::vector<int64_t> out(static_cast<size_t>(n) + 1, 0);
  switch (a->tag) {
    case TypeTag::Zero:
      return out;
    case TypeTag::One:
      std::fill(out.begin(), out.end(), 1);
      return out;
    case TypeTag::Sum: {
      auto l = dims_upto(a->a, n, env), r = dims_upto(a->b, n, env);
      for (int m = 0; m <= n; ++m) out[m] = std::min(kDimClamp, l[m] + r[m]);
      return out;
    }
    case TypeTag::Prod: {
      auto l = dims_upto(a->a, n, env), r = dims_upto(a->b, n, env);
      for (int m = 0; m <= n; ++m) out[m] = clamped_mul(l[m], r[m]);
      return out;
    }
    case TypeTag::Later: {
      auto l = dims_upto(a->a, n, env);
      for (int m = 1; m <= n; ++m) out[m] = l[m - 1];
      return out;
    }
    case TypeTag::TVar:
      return env.at(a->name);
    case TypeTag::Mu: {
      std::vector<int64_t> cur(static_cast<size_t>(n) + 1, 0);
      for (int it = 0; it <= n; ++it) {
        env[a->name] = cur;
        cur = dims_upto(a->a, n, env);
      }
      env.erase(a->name);
      return cur;
    }
    case TypeTag::Named:
      throw std::logic_error("dims_upto: unresolved type name");
  }
  return out;
}

struct VarInfo {
  std::string name;
  bool usable;  // true once at least one @ separates us from its binder
};

TypePtr gen_leaf(Gen& g, const std::vector<VarInfo>& vars) {
  std::vector<std::string> usable;
  for (const auto& v : vars)
    if (v.usable) usable.push_back(v.name);
  int r = g.range(0, 9);
  if (!usable.empty() && r < 4)
    return t_tvar(usable[static_cast<size_t>(g.range(0, static_cast<int>(usable.size()) - 1))]);
  if (r == 9) return t_zero();
  return t_one();
}

TypePtr gen_rec(Gen& g, int depth, std::vector<VarInfo> vars, int& mu_budget) {
  if (depth == 0) return gen_leaf(g, vars);
  int r = g.range(0, 99);
  if (r < 25)
    return t_sum(gen_rec(g, depth - 1, vars, mu_budget),
                 gen_rec(g, depth - 1, vars, mu_budget));
  if (r < 40)
    return t_prod(gen_rec(g, depth - 1, vars, mu_budget),
                  gen_rec(g, depth - 1, vars, mu_budget));
  if (r < 65) {
    for (auto& v : vars) v.usable = true;
    return t_later(gen_rec(g, depth - 1, vars, mu_budget));
  }
  if (r < 80 && mu_budget > 0) {
    std::string x = "M" + std::to_string(mu_budget--);
    vars.push_back({x, false});
    return t_mu(x, gen_rec(g, depth - 1, vars, mu_budget));
  }
  return gen_leaf(g, vars);
}

std::vector<int64_t> shuffled_indices(Gen& g, int64_t n) {
  std::vector<int64_t> v(static_cast<size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  for (int i = static_cast<int>(n) - 1; i > 0; --i)
    std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(g.range(0, i))]);
  return v;
}

std::vector<std::pair<int64_t, int64_t>> gen_pairs(Gen& g, int64_t ns, int64_t nd) {
  auto si = shuffled_indices(g, ns), di = shuffled_indices(g, nd);
  int64_t maxk = std::min(ns, nd);
  int64_t k = maxk == 0 ? 0 : g.range(0, static_cast<int>(maxk));
  std::vector<std::pair<int64_t, int64_t>> pairs;
  for (int64_t i = 0; i < k; ++i)
    pairs.emplace_back(si[static_cast<size_t>(i)], di[static_cast<size_t>(i)]);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

int64_t type_dim_at(const TypePtr& a, int n) {
  std::map<std::string, std::vector<int64_t>> env;
  return dims_upto(a, n, env).at(static_cast<size_t>(n));
}

TypePtr gen_type(Gen& g, int depth) {
  for (int attempt = 0; attempt < 60; ++attempt) {
    int budget = 2;
    TypePtr t = gen_rec(g, depth, {}, budget);
    int64_t d = type_dim_at(t, 6);
    if (d >= 1 && d <= 64) return t;
  }
  return t_sum(t_one(), t_one());
}

TypePtr gen_functor_body(Gen& g, const std::string& var, int depth) {
  for (int attempt = 0; attempt < 80; ++attempt) {
    int budget = 1;
    TypePtr body = gen_rec(g, depth, {{var, false}}, budget);
    if (!tvar_free_in(var, body)) continue;
    if (!guarded_in(var, body)) continue;
    int64_t d = type_dim_at(t_mu(var, body), 6);
    if (d >= 1 && d <= 200) return body;
  }
  return t_sum(t_one(), t_later(t_tvar(var)));
}

PinjMor gen_pinj(Gen& g, ShapePtr src, ShapePtr dst) {
  return Pinj::from_pairs(src, dst, gen_pairs(g, shape_dim(src), shape_dim(dst)));
}

std::pair<PinjMor, PinjMor> gen_compatible_pinj(Gen& g, ShapePtr src, ShapePtr dst) {
  auto pairs = gen_pairs(g, shape_dim(src), shape_dim(dst));
  std::vector<std::pair<int64_t, int64_t>> fp, gp;
  for (const auto& pr : pairs) (g.coin() ? fp : gp).push_back(pr);
  return {Pinj::from_pairs(src, dst, fp), Pinj::from_pairs(src, dst, gp)};
}

std::pair<HilbMor, HilbMor> gen_compatible_hilb(Gen& g, ShapePtr src, ShapePtr dst) {
  auto pairs = gen_pairs(g, shape_dim(src), shape_dim(dst));
  Eigen::MatrixXcd fm = Eigen::MatrixXcd::Zero(shape_dim(dst), shape_dim(src));
  Eigen::MatrixXcd gm = fm;
  for (const auto& [s, d] : pairs) {
    std::complex<double> phase = std::polar(1.0, 2.0 * M_PI * g.unit());
    (g.coin() ? fm : gm)(d, s) = phase;
  }
  return {Hilb::make(src, dst, std::move(fm)), Hilb::make(src, dst, std::move(gm))};
}

}  // namespace gpm
