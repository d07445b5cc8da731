// Finite object shapes of the free ⊕/⊗ algebra over O and I, their canonical
// element enumerations, and the structural coherence bijections both backends
// lift. Shapes are hash-consed so equality is pointer equality and per-shape
// caches (dimension, element table) are shared.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace gpm {

struct ObjShape;
using ShapePtr = const ObjShape*; // interned, never freed

enum class ShapeTag : uint8_t { Zero, One, Sum, Prod };

struct ElemTree;
using ElemPtr = const ElemTree*; // interned, never freed

// An element of a shape: Star : I, Inl/Inr into sums, Pair into products.
struct ElemTree {
  enum class Tag : uint8_t { Star, Inl, Inr, Pair } tag;
  ElemPtr a = nullptr;
  ElemPtr b = nullptr;
};

struct ObjShape {
  ShapeTag tag;
  ShapePtr left = nullptr;
  ShapePtr right = nullptr;
  // caches, filled lazily (single-threaded sessions; see README)
  mutable int64_t dim_cache = -1;
  mutable std::vector<ElemPtr> elems_cache; // valid iff elems_ready
  mutable bool elems_ready = false;
};

ShapePtr zero_shape();
ShapePtr one_shape();
ShapePtr sum_shape(ShapePtr a, ShapePtr b);
ShapePtr prod_shape(ShapePtr a, ShapePtr b);

inline bool shape_eq(ShapePtr a, ShapePtr b) { return a == b; }

int64_t shape_dim(ShapePtr s);
std::string show_shape(ShapePtr s);

// Canonical enumeration: Zero -> [], One -> [*], Sum -> Inl-block then
// Inr-block, Prod -> lexicographic with the left component major.
const std::vector<ElemPtr>& enumerate_elems(ShapePtr s);

ElemPtr star_elem();
ElemPtr inl_elem(ElemPtr e);
ElemPtr inr_elem(ElemPtr e);
ElemPtr pair_elem(ElemPtr a, ElemPtr b);

// Index of an element in its shape's enumeration; -1 if it does not belong.
int64_t elem_index(ShapePtr s, ElemPtr e);
std::string render_elem(ElemPtr e); // "*", "inl(*)", "(inl(*),*)", ...

// A total bijection between the element sets of two shapes, stored as the
// image index per source index. Both backends lift these to morphisms.
struct ElemBij {
  ShapePtr src = nullptr;
  ShapePtr dst = nullptr;
  std::vector<int64_t> map; // map[src index] = dst index
};

ElemBij identity_bij(ShapePtr s);
ElemBij compose_bij(const ElemBij& g, const ElemBij& f); // g after f
ElemBij invert_bij(const ElemBij& f);

// Thrown by either backend when a join of non-orthogonal morphisms is asked for.
struct IncompatibleJoin {
  std::string reason;
};

enum class Coh {
  AssocSum,  // (X+Y)+Z -> X+(Y+Z)
  AssocProd, // (X*Y)*Z -> X*(Y*Z)
  UnitlSum,  // 0+X -> X
  UnitrSum,  // X+0 -> X
  UnitlProd, // 1*X -> X
  UnitrProd, // X*1 -> X
  SymmSum,   // X+Y -> Y+X
  SymmProd,  // X*Y -> Y*X
  DistribL,  // (X+Y)*Z -> (X*Z)+(Y*Z)
  DistribR,  // X*(Y+Z) -> (X*Y)+(X*Z)
  AnnihL,    // 0*X -> 0
  AnnihR,    // X*0 -> 0
};

// Structural coherence isos, defined once on element trees. Unused shape
// arguments (y, z) may be null for the unary kinds.
ElemBij coherence_bij(Coh kind, ShapePtr x, ShapePtr y = nullptr, ShapePtr z = nullptr);

// Display normalization for shapes: prune dead 0-summands/0-factors and
// re-associate sums to the left, as in hand-drawn stage pictures. Used for
// reporting only; the raw construction is never normalized.
ShapePtr display_shape(ShapePtr s);

} // namespace gpm
