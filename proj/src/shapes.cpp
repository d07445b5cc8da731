#include "gpm/shapes.hpp"

#include <map>
#include <stdexcept>
#include <tuple>

namespace gpm {

namespace {

// Interning tables. Deliberately leaked: shapes live for the process.
std::map<std::tuple<int, ShapePtr, ShapePtr>, ObjShape*>& shape_table() {
  static auto* t = new std::map<std::tuple<int, ShapePtr, ShapePtr>, ObjShape*>;
  return *t;
}

ShapePtr intern_shape(ShapeTag tag, ShapePtr l, ShapePtr r) {
  auto key = std::make_tuple(static_cast<int>(tag), l, r);
  auto& tab = shape_table();
  auto it = tab.find(key);
  if (it != tab.end()) return it->second;
  auto* s = new ObjShape{tag, l, r};
  tab.emplace(key, s);
  return s;
}

std::map<std::tuple<int, ElemPtr, ElemPtr>, ElemTree*>& elem_table() {
  static auto* t = new std::map<std::tuple<int, ElemPtr, ElemPtr>, ElemTree*>;
  return *t;
}

ElemPtr intern_elem(ElemTree::Tag tag, ElemPtr a, ElemPtr b) {
  auto key = std::make_tuple(static_cast<int>(tag), a, b);
  auto& tab = elem_table();
  auto it = tab.find(key);
  if (it != tab.end()) return it->second;
  auto* e = new ElemTree{tag, a, b};
  tab.emplace(key, e);
  return e;
}

} // namespace

ShapePtr zero_shape() { return intern_shape(ShapeTag::Zero, nullptr, nullptr); }
ShapePtr one_shape() { return intern_shape(ShapeTag::One, nullptr, nullptr); }
ShapePtr sum_shape(ShapePtr a, ShapePtr b) { return intern_shape(ShapeTag::Sum, a, b); }
ShapePtr prod_shape(ShapePtr a, ShapePtr b) { return intern_shape(ShapeTag::Prod, a, b); }

ElemPtr star_elem() { return intern_elem(ElemTree::Tag::Star, nullptr, nullptr); }
ElemPtr inl_elem(ElemPtr e) { return intern_elem(ElemTree::Tag::Inl, e, nullptr); }
ElemPtr inr_elem(ElemPtr e) { return intern_elem(ElemTree::Tag::Inr, e, nullptr); }
ElemPtr pair_elem(ElemPtr a, ElemPtr b) { return intern_elem(ElemTree::Tag::Pair, a, b); }

int64_t shape_dim(ShapePtr s) {
  if (s->dim_cache >= 0) return s->dim_cache;
  int64_t d = 0;
  switch (s->tag) {
    case ShapeTag::Zero: d = 0; break;
    case ShapeTag::One: d = 1; break;
    case ShapeTag::Sum: d = shape_dim(s->left) + shape_dim(s->right); break;
    case ShapeTag::Prod: d = shape_dim(s->left) * shape_dim(s->right); break;
  }
  s->dim_cache = d;
  return d;
}

std::string show_shape(ShapePtr s) {
  switch (s->tag) {
    case ShapeTag::Zero: return "0";
    case ShapeTag::One: return "1";
    case ShapeTag::Sum: return "(" + show_shape(s->left) + "+" + show_shape(s->right) + ")";
    case ShapeTag::Prod: return "(" + show_shape(s->left) + "*" + show_shape(s->right) + ")";
  }
  return "?";
}

const std::vector<ElemPtr>& enumerate_elems(ShapePtr s) {
  if (s->elems_ready) return s->elems_cache;
  std::vector<ElemPtr> out;
  switch (s->tag) {
    case ShapeTag::Zero:
      break;
    case ShapeTag::One:
      out.push_back(star_elem());
      break;
    case ShapeTag::Sum: {
      for (ElemPtr e : enumerate_elems(s->left)) out.push_back(inl_elem(e));
      for (ElemPtr e : enumerate_elems(s->right)) out.push_back(inr_elem(e));
      break;
    }
    case ShapeTag::Prod: {
      const auto& ls = enumerate_elems(s->left);
      const auto& rs = enumerate_elems(s->right);
      for (ElemPtr a : ls)
        for (ElemPtr b : rs) out.push_back(pair_elem(a, b));
      break;
    }
  }
  s->elems_cache = std::move(out);
  s->elems_ready = true;
  return s->elems_cache;
}

int64_t elem_index(ShapePtr s, ElemPtr e) {
  switch (s->tag) {
    case ShapeTag::Zero:
      return -1;
    case ShapeTag::One:
      return e->tag == ElemTree::Tag::Star ? 0 : -1;
    case ShapeTag::Sum: {
      if (e->tag == ElemTree::Tag::Inl) {
        int64_t i = elem_index(s->left, e->a);
        return i < 0 ? -1 : i;
      }
      if (e->tag == ElemTree::Tag::Inr) {
        int64_t i = elem_index(s->right, e->a);
        return i < 0 ? -1 : shape_dim(s->left) + i;
      }
      return -1;
    }
    case ShapeTag::Prod: {
      if (e->tag != ElemTree::Tag::Pair) return -1;
      int64_t i = elem_index(s->left, e->a);
      int64_t j = elem_index(s->right, e->b);
      if (i < 0 || j < 0) return -1;
      return i * shape_dim(s->right) + j;
    }
  }
  return -1;
}

std::string render_elem(ElemPtr e) {
  switch (e->tag) {
    case ElemTree::Tag::Star: return "*";
    case ElemTree::Tag::Inl: return "inl(" + render_elem(e->a) + ")";
    case ElemTree::Tag::Inr: return "inr(" + render_elem(e->a) + ")";
    case ElemTree::Tag::Pair: return "(" + render_elem(e->a) + "," + render_elem(e->b) + ")";
  }
  return "?";
}

ElemBij identity_bij(ShapePtr s) {
  ElemBij b{s, s, {}};
  int64_t d = shape_dim(s);
  b.map.resize(static_cast<size_t>(d));
  for (int64_t i = 0; i < d; ++i) b.map[static_cast<size_t>(i)] = i;
  return b;
}

ElemBij compose_bij(const ElemBij& g, const ElemBij& f) {
  if (!shape_eq(f.dst, g.src)) throw std::logic_error("compose_bij: shape mismatch");
  ElemBij out{f.src, g.dst, {}};
  out.map.resize(f.map.size());
  for (size_t i = 0; i < f.map.size(); ++i)
    out.map[i] = g.map[static_cast<size_t>(f.map[i])];
  return out;
}

ElemBij invert_bij(const ElemBij& f) {
  ElemBij out{f.dst, f.src, {}};
  out.map.assign(f.map.size(), -1);
  for (size_t i = 0; i < f.map.size(); ++i)
    out.map[static_cast<size_t>(f.map[i])] = static_cast<int64_t>(i);
  return out;
}

namespace {

// Builds a bijection from an element-level function; total by construction.
ElemBij bij_from_fn(ShapePtr src, ShapePtr dst, ElemPtr (*fn)(ElemPtr)) {
  ElemBij out{src, dst, {}};
  const auto& es = enumerate_elems(src);
  out.map.reserve(es.size());
  for (ElemPtr e : es) {
    int64_t j = elem_index(dst, fn(e));
    if (j < 0) throw std::logic_error("coherence_bij: image not in target shape");
    out.map.push_back(j);
  }
  return out;
}

} // namespace

ElemBij coherence_bij(Coh kind, ShapePtr x, ShapePtr y, ShapePtr z) {
  switch (kind) {
    case Coh::AssocSum: {
      ShapePtr src = sum_shape(sum_shape(x, y), z);
      ShapePtr dst = sum_shape(x, sum_shape(y, z));
      return bij_from_fn(src, dst, +[](ElemPtr e) -> ElemPtr {
        if (e->tag == ElemTree::Tag::Inl) {
          ElemPtr inner = e->a;
          if (inner->tag == ElemTree::Tag::Inl) return inl_elem(inner->a);
          return inr_elem(inl_elem(inner->a));
        }
        return inr_elem(inr_elem(e->a));
      });
    }
    case Coh::AssocProd: {
      ShapePtr src = prod_shape(prod_shape(x, y), z);
      ShapePtr dst = prod_shape(x, prod_shape(y, z));
      return bij_from_fn(src, dst, +[](ElemPtr e) -> ElemPtr {
        return pair_elem(e->a->a, pair_elem(e->a->b, e->b));
      });
    }
    case Coh::UnitlSum: {
      ShapePtr src = sum_shape(zero_shape(), x);
      return bij_from_fn(src, x, +[](ElemPtr e) -> ElemPtr { return e->a; });
    }
    case Coh::UnitrSum: {
      ShapePtr src = sum_shape(x, zero_shape());
      return bij_from_fn(src, x, +[](ElemPtr e) -> ElemPtr { return e->a; });
    }
    case Coh::UnitlProd: {
      ShapePtr src = prod_shape(one_shape(), x);
      return bij_from_fn(src, x, +[](ElemPtr e) -> ElemPtr { return e->b; });
    }
    case Coh::UnitrProd: {
      ShapePtr src = prod_shape(x, one_shape());
      return bij_from_fn(src, x, +[](ElemPtr e) -> ElemPtr { return e->a; });
    }
    case Coh::SymmSum: {
      ShapePtr src = sum_shape(x, y);
      ShapePtr dst = sum_shape(y, x);
      return bij_from_fn(src, dst, +[](ElemPtr e) -> ElemPtr {
        return e->tag == ElemTree::Tag::Inl ? inr_elem(e->a) : inl_elem(e->a);
      });
    }
    case Coh::SymmProd: {
      ShapePtr src = prod_shape(x, y);
      ShapePtr dst = prod_shape(y, x);
      return bij_from_fn(src, dst, +[](ElemPtr e) -> ElemPtr {
        return pair_elem(e->b, e->a);
      });
    }
    case Coh::DistribL: {
      ShapePtr src = prod_shape(sum_shape(x, y), z);
      ShapePtr dst = sum_shape(prod_shape(x, z), prod_shape(y, z));
      return bij_from_fn(src, dst, +[](ElemPtr e) -> ElemPtr {
        if (e->a->tag == ElemTree::Tag::Inl) return inl_elem(pair_elem(e->a->a, e->b));
        return inr_elem(pair_elem(e->a->a, e->b));
      });
    }
    case Coh::DistribR: {
      ShapePtr src = prod_shape(x, sum_shape(y, z));
      ShapePtr dst = sum_shape(prod_shape(x, y), prod_shape(x, z));
      return bij_from_fn(src, dst, +[](ElemPtr e) -> ElemPtr {
        if (e->b->tag == ElemTree::Tag::Inl) return inl_elem(pair_elem(e->a, e->b->a));
        return inr_elem(pair_elem(e->a, e->b->a));
      });
    }
    case Coh::AnnihL: {
      // 0*X and 0 are both empty; the bijection has no entries.
      return ElemBij{prod_shape(zero_shape(), x), zero_shape(), {}};
    }
    case Coh::AnnihR: {
      return ElemBij{prod_shape(x, zero_shape()), zero_shape(), {}};
    }
  }
  throw std::logic_error("coherence_bij: unknown kind");
}

namespace {

void flatten_sum(ShapePtr s, std::vector<ShapePtr>& parts) {
  if (s->tag == ShapeTag::Sum) {
    flatten_sum(s->left, parts);
    flatten_sum(s->right, parts);
  } else {
    parts.push_back(s);
  }
}

} // namespace

ShapePtr display_shape(ShapePtr s) {
  switch (s->tag) {
    case ShapeTag::Zero:
    case ShapeTag::One:
      return s;
    case ShapeTag::Prod: {
      ShapePtr l = display_shape(s->left);
      ShapePtr r = display_shape(s->right);
      if (l->tag == ShapeTag::Zero || r->tag == ShapeTag::Zero) return zero_shape();
      if (l->tag == ShapeTag::One) return r;
      if (r->tag == ShapeTag::One) return l;
      return prod_shape(l, r);
    }
    case ShapeTag::Sum: {
      std::vector<ShapePtr> parts, live;
      flatten_sum(s, parts);
      for (ShapePtr p : parts) {
        ShapePtr d = display_shape(p);
        if (d->tag != ShapeTag::Zero) live.push_back(d);
      }
      if (live.empty()) return zero_shape();
      ShapePtr acc = live[0];
      for (size_t i = 1; i < live.size(); ++i) acc = sum_shape(acc, live[i]);
      return acc;
    }
  }
  return s;
}

} // namespace gpm
