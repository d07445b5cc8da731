#include "gpm/pinj.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gpm {

namespace {

void check_invariant(const PinjMor& f) {
  std::set<int64_t> seen_src, seen_dst;
  int64_t sd = shape_dim(f.src), dd = shape_dim(f.dst);
  int64_t prev = -1;
  for (auto [i, j] : f.pairs) {
    if (i <= prev) throw std::logic_error("PinjMor: pairs not strictly sorted by source");
    prev = i;
    if (i < 0 || i >= sd || j < 0 || j >= dd)
      throw std::logic_error("PinjMor: index out of range");
    if (!seen_dst.insert(j).second)
      throw std::logic_error("PinjMor: target index repeated (not injective)");
  }
}

} // namespace

PinjMor Pinj::id(ShapePtr s) {
  PinjMor f{s, s, {}};
  int64_t d = shape_dim(s);
  f.pairs.reserve(static_cast<size_t>(d));
  for (int64_t i = 0; i < d; ++i) f.pairs.emplace_back(i, i);
  return f;
}

PinjMor Pinj::zero(ShapePtr src, ShapePtr dst) { return PinjMor{src, dst, {}}; }

PinjMor Pinj::bang(ShapePtr s) { return PinjMor{s, zero_shape(), {}}; }

PinjMor Pinj::cobang(ShapePtr s) { return PinjMor{zero_shape(), s, {}}; }

PinjMor Pinj::compose(const PinjMor& g, const PinjMor& f) {
  if (!shape_eq(f.dst, g.src))
    throw std::logic_error("Pinj::compose: middle shapes differ: " + show_shape(f.dst) +
                           " vs " + show_shape(g.src));
  std::map<int64_t, int64_t> gm(g.pairs.begin(), g.pairs.end());
  PinjMor out{f.src, g.dst, {}};
  for (auto [i, j] : f.pairs) {
    auto it = gm.find(j);
    if (it != gm.end()) out.pairs.emplace_back(i, it->second);
  }
  return out;
}

PinjMor Pinj::dagger(const PinjMor& f) {
  PinjMor out{f.dst, f.src, {}};
  out.pairs.reserve(f.pairs.size());
  for (auto [i, j] : f.pairs) out.pairs.emplace_back(j, i);
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

PinjMor Pinj::tensor_prod(const PinjMor& f, const PinjMor& g) {
  PinjMor out{prod_shape(f.src, g.src), prod_shape(f.dst, g.dst), {}};
  int64_t gsd = shape_dim(g.src), gdd = shape_dim(g.dst);
  for (auto [i1, j1] : f.pairs)
    for (auto [i2, j2] : g.pairs)
      out.pairs.emplace_back(i1 * gsd + i2, j1 * gdd + j2);
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

PinjMor Pinj::tensor_sum(const PinjMor& f, const PinjMor& g) {
  PinjMor out{sum_shape(f.src, g.src), sum_shape(f.dst, g.dst), {}};
  int64_t fsd = shape_dim(f.src), fdd = shape_dim(f.dst);
  for (auto [i, j] : f.pairs) out.pairs.emplace_back(i, j);
  for (auto [i, j] : g.pairs) out.pairs.emplace_back(fsd + i, fdd + j);
  return out;
}

bool Pinj::compatible(const PinjMor& f, const PinjMor& g) {
  if (!shape_eq(f.src, g.src) || !shape_eq(f.dst, g.dst)) return false;
  std::set<int64_t> dom, img;
  for (auto [i, j] : f.pairs) {
    dom.insert(i);
    img.insert(j);
  }
  for (auto [i, j] : g.pairs)
    if (dom.count(i) || img.count(j)) return false;
  return true;
}

PinjMor Pinj::join(const PinjMor& f, const PinjMor& g) {
  if (!compatible(f, g))
    throw IncompatibleJoin{"join of partial injections with overlapping domain or image"};
  PinjMor out{f.src, f.dst, f.pairs};
  out.pairs.insert(out.pairs.end(), g.pairs.begin(), g.pairs.end());
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

PinjMor Pinj::lift_bij(const ElemBij& b) {
  PinjMor out{b.src, b.dst, {}};
  out.pairs.reserve(b.map.size());
  for (size_t i = 0; i < b.map.size(); ++i)
    out.pairs.emplace_back(static_cast<int64_t>(i), b.map[i]);
  return out;
}

PinjMor Pinj::from_pairs(ShapePtr src, ShapePtr dst,
                         std::vector<std::pair<int64_t, int64_t>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  PinjMor f{src, dst, std::move(pairs)};
  check_invariant(f);
  return f;
}

bool Pinj::eq(const PinjMor& f, const PinjMor& g) {
  return shape_eq(f.src, g.src) && shape_eq(f.dst, g.dst) && f.pairs == g.pairs;
}

bool Pinj::is_total(const PinjMor& f) {
  return static_cast<int64_t>(f.pairs.size()) == shape_dim(f.src);
}

bool Pinj::is_surjective(const PinjMor& f) {
  return static_cast<int64_t>(f.pairs.size()) == shape_dim(f.dst);
}

bool Pinj::is_dagger_mono(const PinjMor& f) { return is_total(f); }
bool Pinj::is_dagger_epi(const PinjMor& f) { return is_surjective(f); }
bool Pinj::is_dagger_iso(const PinjMor& f) { return is_total(f) && is_surjective(f); }
bool Pinj::is_plain_iso(const PinjMor& f) { return is_dagger_iso(f); }

std::optional<int64_t> Pinj::apply(const PinjMor& f, int64_t i) {
  auto it = std::lower_bound(f.pairs.begin(), f.pairs.end(), std::make_pair(i, int64_t{-1}));
  if (it != f.pairs.end() && it->first == i) return it->second;
  return std::nullopt;
}

std::string Pinj::describe(const PinjMor& f) {
  std::ostringstream os;
  os << show_shape(f.src) << " -> " << show_shape(f.dst) << " {";
  const auto& se = enumerate_elems(f.src);
  const auto& de = enumerate_elems(f.dst);
  bool first = true;
  for (auto [i, j] : f.pairs) {
    if (!first) os << ", ";
    first = false;
    os << render_elem(se[static_cast<size_t>(i)]) << " -> "
       << render_elem(de[static_cast<size_t>(j)]);
  }
  os << "}";
  return os.str();
}

} // namespace gpm
