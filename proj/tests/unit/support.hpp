#pragma once

#include <cmath>
#include <functional>

#include <doctest.h>

#include "liesym/liegroup.hpp"
#include "liesym/rng.hpp"

namespace liesym::test {

/// Number of random cases each property test draws.
inline constexpr int kCases = 25;

/// Runs prop(rng, case) for kCases independent streams of one seed.
inline void for_cases(std::uint64_t seed, const std::function<void(Rng&, int)>& prop) {
  for (int c = 0; c < kCases; ++c) {
    Rng rng = Rng(seed).split(static_cast<std::uint64_t>(c));
    CAPTURE(c);
    prop(rng, c);
  }
}

inline LieAlgebraElement random_element(const MatrixLieGroup& g, Rng& rng, double scale = 1.0) {
  return g.element(scale * rng.normal_vector(g.dim()));
}

inline std::vector<MatrixLieGroup> sample_groups() {
  return {MatrixLieGroup::make(GroupKind::SO, 2), MatrixLieGroup::make(GroupKind::SO, 3),
          MatrixLieGroup::make(GroupKind::SO, 4), MatrixLieGroup::make(GroupKind::O, 3),
          MatrixLieGroup::make(GroupKind::SE, 2), MatrixLieGroup::make(GroupKind::SE, 3),
          MatrixLieGroup::make(GroupKind::GL, 3), MatrixLieGroup::make(GroupKind::T, 3),
          MatrixLieGroup::direct_product({MatrixLieGroup::make(GroupKind::SE, 2), MatrixLieGroup::make(GroupKind::SO, 3)})};
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace liesym::test
