#pragma once

// Finite-dimensional complex matrix backend.  A morphism A -> B is a
// dim(B) x dim(A) matrix acting on basis column vectors; the basis of a
// shape is its canonical element enumeration (see shapes.hpp).  The dagger
// is the conjugate transpose, the tensor is the Kronecker product and the
// sum is the block direct sum, so the same staged-semantics templates run
// over this backend and over partial injections unchanged.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpm/shapes.hpp"

namespace gpm {

struct HilbMor {
  ShapePtr src = nullptr;
  ShapePtr dst = nullptr;
  Eigen::MatrixXcd m;  // rows indexed by dst elements, cols by src elements
};

struct Hilb {
  using Mor = HilbMor;
  static constexpr const char* name = "hilb";
  static constexpr double default_tol = 1e-9;

  static Mor make(ShapePtr src, ShapePtr dst, Eigen::MatrixXcd m);

  static Mor id(ShapePtr a);
  static Mor zero(ShapePtr src, ShapePtr dst);
  static Mor bang(ShapePtr src);    // A -> 0
  static Mor cobang(ShapePtr dst);  // 0 -> A

  static Mor compose(const Mor& g, const Mor& f);  // g after f
  static Mor dagger(const Mor& f);
  static Mor tensor_prod(const Mor& f, const Mor& g);
  static Mor tensor_sum(const Mor& f, const Mor& g);

  // Join of compatible morphisms: f + g.  Compatibility here is the
  // orthogonality condition f~ . g = 0 and f . g~ = 0 (up to tol), which
  // makes + a partial-order join on subspaces the way union is for
  // partial injections.
  static bool compatible(const Mor& f, const Mor& g, double tol = default_tol);
  static Mor join(const Mor& f, const Mor& g, double tol = default_tol);

  static Mor lift_bij(const ElemBij& b);
  // 0/1 matrix with a unit at (dst,src) for each listed pair; the partial
  // injection embedding used by the evaluator-agreement harness.
  static Mor from_pairs(ShapePtr src, ShapePtr dst,
                        std::vector<std::pair<int64_t, int64_t>> pairs);

  static bool eq(const Mor& f, const Mor& g, double tol = default_tol);
  static bool is_zero(const Mor& f, double tol = default_tol);
  static bool is_dagger_mono(const Mor& f, double tol = default_tol);  // isometry
  static bool is_dagger_epi(const Mor& f, double tol = default_tol);   // coisometry
  static bool is_dagger_iso(const Mor& f, double tol = default_tol);   // unitary
  static bool is_plain_iso(const Mor& f, double tol = default_tol);    // invertible

  static std::string describe(const Mor& f);
};

}  // namespace gpm
