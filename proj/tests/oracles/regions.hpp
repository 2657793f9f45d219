#pragma once

// Brute-force region count of a central hyperplane arrangement in Q^d: a sign
// vector is realized iff the open cone {x : s_i <a_i, x> > 0} is nonempty,
// decided exactly by Fourier-Motzkin elimination on s_i <a_i, x> >= 1.

#include "strata/rational.hpp"

#include <cstdint>
#include <vector>

namespace strata::oracle {

struct Inequality {
    RationalVector a;  // a . x >= b
    Rational b;
};

inline bool feasible(std::vector<Inequality> rows, std::size_t d)
{
    for (std::size_t v = 0; v < d; ++v) {
        std::vector<Inequality> pos, neg, next;
        for (auto& r : rows) {
            if (r.a[v] > 0) pos.push_back(r);
            else if (r.a[v] < 0) neg.push_back(r);
            else next.push_back(r);
        }
        for (const auto& p : pos)
            for (const auto& n : neg) {
                // p.a[v] > 0, n.a[v] < 0: combine to cancel x_v.
                Rational cp = -n.a[v], cn = p.a[v];
                Inequality c{RationalVector(d), cp * p.b + cn * n.b};
                for (std::size_t j = 0; j < d; ++j) c.a[j] = cp * p.a[j] + cn * n.a[j];
                next.push_back(std::move(c));
            }
        rows = std::move(next);
    }
    for (const auto& r : rows)
        if (r.b > 0) return false;
    return true;
}

inline long brute_force_regions(const std::vector<RationalVector>& normals, std::size_t d)
{
    const std::size_t m = normals.size();
    if (m == 0) return 1;
    long count = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<Inequality> rows;
        for (std::size_t i = 0; i < m; ++i) {
            Inequality r{normals[i], Rational(1)};
            if (!(mask >> i & 1u))
                for (auto& c : r.a) c = -c;
            rows.push_back(std::move(r));
        }
        if (feasible(std::move(rows), d)) ++count;
    }
    return count;
}

/// Same count, extending sign vectors one hyperplane at a time and dropping a
/// prefix as soon as its cone is empty.
inline long brute_force_regions_pruned(const std::vector<RationalVector>& normals, std::size_t d)
{
    long count = 0;
    std::vector<Inequality> rows;
    auto extend = [&](auto&& self, std::size_t i) -> void {
        if (!feasible(rows, d)) return;
        if (i == normals.size()) {
            ++count;
            return;
        }
        for (int sign : {1, -1}) {
            Inequality r{normals[i], Rational(1)};
            if (sign < 0)
                for (auto& c : r.a) c = -c;
            rows.push_back(std::move(r));
            self(self, i + 1);
            rows.pop_back();
        }
    };
    extend(extend, 0);
    return count;
}

}  // namespace strata::oracle
