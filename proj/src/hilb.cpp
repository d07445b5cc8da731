#include "gpm/hilb.hpp"

#include <sstream>
#include <stdexcept>

namespace gpm {

namespace {

double max_abs(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace

HilbMor Hilb::make(ShapePtr src, ShapePtr dst, Eigen::MatrixXcd m) {
  if (m.rows() != shape_dim(dst) || m.cols() != shape_dim(src))
    throw std::logic_error("hilb: matrix dimensions disagree with shapes");
  return HilbMor{src, dst, std::move(m)};
}

HilbMor Hilb::id(ShapePtr a) {
  int64_t d = shape_dim(a);
  return {a, a, Eigen::MatrixXcd::Identity(d, d)};
}

HilbMor Hilb::zero(ShapePtr src, ShapePtr dst) {
  return {src, dst, Eigen::MatrixXcd::Zero(shape_dim(dst), shape_dim(src))};
}

HilbMor Hilb::bang(ShapePtr src) {
  return {src, zero_shape(), Eigen::MatrixXcd::Zero(0, shape_dim(src))};
}

HilbMor Hilb::cobang(ShapePtr dst) {
  return {zero_shape(), dst, Eigen::MatrixXcd::Zero(shape_dim(dst), 0)};
}

HilbMor Hilb::compose(const Mor& g, const Mor& f) {
  if (!shape_eq(f.dst, g.src))
    throw std::logic_error("hilb: compose shape mismatch: " + show_shape(f.dst) +
                           " vs " + show_shape(g.src));
  return {f.src, g.dst, g.m * f.m};
}

HilbMor Hilb::dagger(const Mor& f) { return {f.dst, f.src, f.m.adjoint()}; }

HilbMor Hilb::tensor_prod(const Mor& f, const Mor& g) {
  // Kronecker product with the left factor major, matching the element
  // enumeration of product shapes.  Written out by hand so that 0-dimensional
  // factors behave (Eigen's kroneckerProduct is in an unsupported module
  // anyway).
  int64_t fr = f.m.rows(), fc = f.m.cols(), gr = g.m.rows(), gc = g.m.cols();
  Eigen::MatrixXcd out(fr * gr, fc * gc);
  for (int64_t i = 0; i < fr; ++i)
    for (int64_t j = 0; j < fc; ++j)
      out.block(i * gr, j * gc, gr, gc) = f.m(i, j) * g.m;
  return {prod_shape(f.src, g.src), prod_shape(f.dst, g.dst), std::move(out)};
}

HilbMor Hilb::tensor_sum(const Mor& f, const Mor& g) {
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(f.m.rows() + g.m.rows(), f.m.cols() + g.m.cols());
  out.topLeftCorner(f.m.rows(), f.m.cols()) = f.m;
  out.bottomRightCorner(g.m.rows(), g.m.cols()) = g.m;
  return {sum_shape(f.src, g.src), sum_shape(f.dst, g.dst), std::move(out)};
}

bool Hilb::compatible(const Mor& f, const Mor& g, double tol) {
  if (!shape_eq(f.src, g.src) || !shape_eq(f.dst, g.dst)) return false;
  return max_abs(f.m.adjoint() * g.m) <= tol && max_abs(f.m * g.m.adjoint()) <= tol;
}

HilbMor Hilb::join(const Mor& f, const Mor& g, double tol) {
  if (!compatible(f, g, tol)) throw IncompatibleJoin{"summands are not orthogonal"};
  return {f.src, f.dst, f.m + g.m};
}

HilbMor Hilb::lift_bij(const ElemBij& b) {
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Zero(shape_dim(b.dst), shape_dim(b.src));
  for (int64_t i = 0; i < (int64_t)b.map.size(); ++i) m(b.map[i], i) = 1.0;
  return {b.src, b.dst, std::move(m)};
}

HilbMor Hilb::from_pairs(ShapePtr src, ShapePtr dst,
                         std::vector<std::pair<int64_t, int64_t>> pairs) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(shape_dim(dst), shape_dim(src));
  for (auto& [i, j] : pairs) m(j, i) = 1.0;
  return {src, dst, std::move(m)};
}

bool Hilb::eq(const Mor& f, const Mor& g, double tol) {
  if (!shape_eq(f.src, g.src) || !shape_eq(f.dst, g.dst)) return false;
  return max_abs(f.m - g.m) <= tol;
}

bool Hilb::is_zero(const Mor& f, double tol) { return max_abs(f.m) <= tol; }

bool Hilb::is_dagger_mono(const Mor& f, double tol) {
  int64_t d = f.m.cols();
  return max_abs(f.m.adjoint() * f.m - Eigen::MatrixXcd::Identity(d, d)) <= tol;
}

bool Hilb::is_dagger_epi(const Mor& f, double tol) {
  int64_t d = f.m.rows();
  return max_abs(f.m * f.m.adjoint() - Eigen::MatrixXcd::Identity(d, d)) <= tol;
}

bool Hilb::is_dagger_iso(const Mor& f, double tol) {
  return is_dagger_mono(f, tol) && is_dagger_epi(f, tol);
}

bool Hilb::is_plain_iso(const Mor& f, double tol) {
  if (f.m.rows() != f.m.cols()) return false;
  if (f.m.rows() == 0) return true;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(f.m);
  lu.setThreshold(tol);
  return lu.isInvertible();
}

std::string Hilb::describe(const Mor& f) {
  std::ostringstream os;
  os << show_shape(f.src) << " -> " << show_shape(f.dst) << "\n";
  for (int64_t i = 0; i < f.m.rows(); ++i) {
    for (int64_t j = 0; j < f.m.cols(); ++j) {
      std::complex<double> c = f.m(i, j);
      if (j) os << "  ";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%+.4f%+.4fi", c.real(), c.imag());
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace gpm
