#pragma once

#include "strata/linalg.hpp"

#include <optional>
#include <vector>

namespace strata {

inline constexpr std::size_t kDefaultPosetCap = 4096;

/// Number of connected components of the real points of `space` with the
/// given subspaces removed. Removed subspaces are first intersected with
/// `space`; those of codimension at least two do not disconnect and are
/// ignored, and the remaining hyperplanes are counted through the Möbius
/// function of their intersection poset (Zaslavsky). Returns nothing when the
/// poset grows past `poset_cap`.
std::optional<long> count_regions(const RationalSubspace& space, const std::vector<RationalSubspace>& removed,
                                  std::size_t poset_cap = kDefaultPosetCap);

/// Number of orbits of a finite linear group on the regions counted by
/// `count_regions`. Every matrix must map `space` onto itself and permute the
/// removed subspaces. Burnside: a region is fixed by g iff it meets the fixed
/// space of g, so the count averages region counts of the restricted
/// arrangements.
std::optional<long> count_region_orbits(const RationalSubspace& space, const std::vector<RationalSubspace>& removed,
                                        const std::vector<RationalMatrix>& group,
                                        std::size_t poset_cap = kDefaultPosetCap);

}  // namespace strata
