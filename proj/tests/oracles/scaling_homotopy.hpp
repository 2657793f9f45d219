#pragma once

// K computed straight from its integral definition: pull back along
// H(t, x) = t x on Q x Q^n, contract with d/dt, and integrate t^a over [0, 1].

#include "strata/forms.hpp"

#include <numeric>

namespace strata::oracle {

inline PolyForm integral_K(const PolyForm& w)
{
    const std::size_t n = w.ambient_dim();
    if (w.degree() == 0) return PolyForm(n, 0);
    // Coordinates of Q x Q^n: index 0 is t.
    std::vector<PolyForm> H;
    for (std::size_t i = 0; i < n; ++i) {
        PolyForm f(n + 1, 0);
        Exponent e(n + 1, 0);
        e[0] = 1;
        e[i + 1] = 1;
        f.add(e, 0, 1);
        H.push_back(std::move(f));
    }
    VectorField dt(n + 1, PolyForm(n + 1, 0));
    dt[0] = PolyForm::constant(n + 1, 1);
    const PolyForm inner = interior(dt, pullback(w, H));
    PolyForm out(n, w.degree() - 1);
    for (const auto& [key, c] : inner.terms()) {
        if (key.second & 1u) continue;  // no dt survives a contraction with d/dt
        Exponent e(key.first.begin() + 1, key.first.end());
        out.add(e, key.second >> 1, c / (key.first[0] + 1));
    }
    return out;
}

}  // namespace strata::oracle
