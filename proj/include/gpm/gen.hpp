// Seeded generators for the property suites: random closed guarded types,
// random guarded functor bodies, and random (pairs of compatible) morphisms
// in both backends. All draws go through explicit modular reduction on a
// mt19937_64 stream, so a seed pins the exact sequence on every platform.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gpm/ast.hpp"
#include "gpm/hilb.hpp"
#include "gpm/pinj.hpp"

namespace gpm {

class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed) {}
  uint64_t raw() { return rng_(); }
  // inclusive bounds
  int range(int lo, int hi) {
    return lo + static_cast<int>(rng_() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool coin() { return range(0, 1) == 1; }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

// Stage-n dimension of a closed type, computed directly on the syntax (the
// independent size oracle the generators filter against).
int64_t type_dim_at(const TypePtr& a, int n);

// Random closed type of syntactic depth <= depth whose stage-6 dimension is
// kept small (resampled against type_dim_at).
TypePtr gen_type(Gen& g, int depth);

// Random body A with `var` free, occurring, and guarded (every occurrence
// under at least one @): the functor X |-> A for stabilization tests.
TypePtr gen_functor_body(Gen& g, const std::string& var, int depth);

// Uniformly random partial injection between the two element sets.
PinjMor gen_pinj(Gen& g, ShapePtr src, ShapePtr dst);

// Pair of compatible morphisms src -> dst (disjoint domains and disjoint
// images), the raw material of the join laws.
std::pair<PinjMor, PinjMor> gen_compatible_pinj(Gen& g, ShapePtr src, ShapePtr dst);
// Hilb counterpart: same support structure with random unit phases, giving
// two partial isometries with orthogonal domains and images.
std::pair<HilbMor, HilbMor> gen_compatible_hilb(Gen& g, ShapePtr src, ShapePtr dst);

}  // namespace gpm
