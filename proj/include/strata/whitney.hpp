#pragma once

// Numerical probe of Whitney's condition B along sequences approaching a point
// of a lower stratum. This is the only part of the library that uses floating
// point; exact points are rounded with to_double just before the angle
// computation.

#include "strata/forms.hpp"
#include "strata/strata.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace strata {

struct ProbeConfig {
    int base_stratum = 0;
    int upper_stratum = 0;
    /// Defaults to the witness of the base stratum.
    std::optional<LoopPoint> base_point;
    /// Strictly decreasing positive scales; empty means 2^-1 ... 2^-20.
    std::vector<Rational> scales;
    std::size_t samples_per_scale = 32;
    /// Bound on the sine of the secant-tangent angle at the finest scale.
    double angle_tolerance = 1e-6;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

std::vector<Rational> default_scales();

/// Polynomials asserted invariant under the action.
struct InvariantMap {
    std::vector<PolyForm> polynomials;

    /// Exact check: p o g = p for every generator, or L_xi p = 0 for the circle.
    bool verify(const LinearAction& action) const;
    std::size_t target_dim() const { return polynomials.size(); }
};

class InvarianceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ScaleRecord {
    Rational scale;
    double max_angle = 0;      // largest sine of the secant-tangent angle
    double max_residual = 0;   // quotient probes: finite-difference check of the pushed frames
    std::size_t samples = 0;
};

struct ProbeReport {
    int base_stratum = 0;
    int upper_stratum = 0;
    bool quotient = false;
    double tolerance = 0;
    std::vector<ScaleRecord> scales;
    bool passed = false;

    /// "pass" or "no numerical evidence"; a failed probe proves nothing.
    std::string verdict() const { return passed ? "pass" : "no numerical evidence"; }
    double finest_angle() const { return scales.empty() ? 0 : scales.back().max_angle; }
    /// "flat" when every scale is within tolerance, else "decreasing" or
    /// "not decreasing" comparing the finest scale to the coarsest.
    std::string trend() const;
    /// Deterministic text rendering (17 significant digits).
    std::string to_text() const;
};

/// Secants between sampled points of the two strata approaching the base
/// point, against the exact tangent spaces of the upper stratum (V^K plus the
/// angle direction on arcs). Throws std::invalid_argument unless the base
/// stratum lies below the upper one.
ProbeReport probe_whitney_b(const StratificationResult& result, const LinearAction& action, const ProbeConfig& config);

/// The same probe on the images of the V-parts under an invariant polynomial
/// map, with tangent spaces pushed forward through its Jacobian. Throws
/// InvarianceError before sampling if a polynomial is not invariant.
ProbeReport probe_quotient_whitney(const StratificationResult& result, const LinearAction& action,
                                   const InvariantMap& inv, const ProbeConfig& config);

}  // namespace strata
