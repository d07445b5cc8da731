// Finite partial injections between shape element sets: the classical
// dagger-rig backend. A morphism is a partial injective map between the
// canonical enumerations of its source and target shapes, stored as an
// association list sorted by source index.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpm/shapes.hpp"

namespace gpm {

struct PinjMor {
  ShapePtr src = nullptr;
  ShapePtr dst = nullptr;
  // sorted by first component; both columns are duplicate-free
  std::vector<std::pair<int64_t, int64_t>> pairs;
};

// Dagger-rig backend over finite partial injections. All laws are exact.
struct Pinj {
  using Mor = PinjMor;
  static constexpr const char* name = "pinj";

  static Mor id(ShapePtr s);
  static Mor zero(ShapePtr src, ShapePtr dst); // nowhere-defined map
  static Mor bang(ShapePtr s);                 // unique s -> O
  static Mor cobang(ShapePtr s);               // unique O -> s
  static Mor compose(const Mor& g, const Mor& f); // g after f
  static Mor dagger(const Mor& f);
  static Mor tensor_prod(const Mor& f, const Mor& g);
  static Mor tensor_sum(const Mor& f, const Mor& g);
  static bool compatible(const Mor& f, const Mor& g); // disjoint domains and images
  static Mor join(const Mor& f, const Mor& g);        // throws IncompatibleJoin
  static Mor lift_bij(const ElemBij& b);
  static Mor from_pairs(ShapePtr src, ShapePtr dst,
                        std::vector<std::pair<int64_t, int64_t>> pairs);

  static bool eq(const Mor& f, const Mor& g);
  static bool is_total(const Mor& f);
  static bool is_surjective(const Mor& f);
  static bool is_dagger_mono(const Mor& f); // f†f = id, i.e. total
  static bool is_dagger_epi(const Mor& f);  // ff† = id, i.e. surjective
  static bool is_dagger_iso(const Mor& f);  // total bijection
  static bool is_plain_iso(const Mor& f);   // same as dagger iso here

  // Image index of a source index, if defined.
  static std::optional<int64_t> apply(const Mor& f, int64_t i);

  static std::string describe(const Mor& f); // for diagnostics
};

} // namespace gpm
