#pragma once

#include "support.hpp"
#include "strata/forms.hpp"

namespace strata::testing {

inline PolyForm random_form(RationalGen& gen, std::size_t n, int k, int max_poly_degree, int terms = 6)
{
    PolyForm f(n, k);
    for (int t = 0; t < terms; ++t) {
        Exponent e(n, 0);
        const long budget = gen.integer(0, max_poly_degree);
        for (long b = 0; b < budget; ++b) ++e[static_cast<std::size_t>(gen.integer(0, static_cast<long>(n) - 1))];
        std::uint32_t mask = 0;
        while (std::popcount(mask) < k) mask |= 1u << gen.integer(0, static_cast<long>(n) - 1);
        f.add(e, mask, gen.rational(5, 4));
    }
    return f;
}

}  // namespace strata::testing
