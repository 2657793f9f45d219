#include "strata/arrangement.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace strata {

std::optional<long> count_regions(const RationalSubspace& space, const std::vector<RationalSubspace>& removed,
                                  std::size_t poset_cap)
{
    std::set<RationalSubspace> hyperplanes;
    for (const auto& e : removed) {
        RationalSubspace cut = intersect(space, e);
        if (cut == space) return 0;
        if (cut.dim() + 1 == space.dim()) hyperplanes.insert(std::move(cut));
    }

    // Intersection poset, closed under meets with the hyperplanes.
    std::set<RationalSubspace> poset{space};
    std::vector<RationalSubspace> frontier{space};
    while (!frontier.empty()) {
        std::vector<RationalSubspace> next;
        for (const auto& x : frontier)
            for (const auto& h : hyperplanes) {
                RationalSubspace m = intersect(x, h);
                if (poset.insert(m).second) {
                    if (poset.size() > poset_cap) return std::nullopt;
                    next.push_back(std::move(m));
                }
            }
        frontier = std::move(next);
    }

    std::vector<RationalSubspace> elems(poset.begin(), poset.end());
    std::stable_sort(elems.begin(), elems.end(),
                     [](const RationalSubspace& a, const RationalSubspace& b) { return a.dim() > b.dim(); });
    std::vector<long> mu(elems.size(), 0);
    long regions = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i == 0) {
            mu[i] = 1;
        } else {
            long s = 0;
            for (std::size_t j = 0; j < i; ++j)
                if (elems[j].dim() > elems[i].dim() && elems[j].contains(elems[i])) s += mu[j];
            mu[i] = -s;
        }
        regions += std::labs(mu[i]);
    }
    return regions;
}

std::optional<long> count_region_orbits(const RationalSubspace& space, const std::vector<RationalSubspace>& removed,
                                        const std::vector<RationalMatrix>& group, std::size_t poset_cap)
{
    if (group.empty()) return count_regions(space, removed, poset_cap);
    // Only hyperplanes separate regions; a fixed space lying inside a removed
    // subspace of codimension two still meets the regions around it.
    std::vector<RationalSubspace> hyperplanes;
    for (const auto& e : removed) {
        RationalSubspace cut = intersect(space, e);
        if (cut == space) return 0;
        if (cut.dim() + 1 == space.dim()) hyperplanes.push_back(std::move(cut));
    }
    const std::size_t n = space.ambient_dim();
    long total = 0;
    for (const auto& g : group) {
        RationalSubspace fixed = intersect(space, kernel(g - RationalMatrix::identity(n)));
        auto r = count_regions(fixed, hyperplanes, poset_cap);
        if (!r) return std::nullopt;
        total += *r;
    }
    return total / static_cast<long>(group.size());
}

}  // namespace strata
