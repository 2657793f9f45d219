#pragma once

// Sampling checks for a computed stratification: every loop point lies in
// exactly one stratum, the closure order is a partial order that agrees with
// an exact nearest-point approach test (condition of frontier), and strata
// are cones in the V coordinate (local contractibility).

#include "strata/strata.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace strata {

struct CheckOutcome {
    std::string name;
    bool passed = true;
    std::size_t trials = 0;
    std::vector<std::string> counterexamples;  // at most a handful

    void fail(std::string what);
};

struct ValidationReport {
    std::vector<CheckOutcome> checks;
    bool passed() const;
};

struct ValidationOptions {
    std::size_t samples = 2000;
    std::size_t points_per_stratum = 4;
    int scales = 20;
    std::uint64_t seed = 1;
};

/// Deterministic source of small random rationals.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    long integer(long lo, long hi);
    Rational rational(long range = 5, long max_den = 4);
    /// Uniform-ish rational in the open interval (0, 1).
    Rational unit_open();
    double unit_double();

private:
    std::mt19937_64 engine_;
};

std::string to_string(const LoopPoint& p);

/// Random point of V with the given fixed space as ambient; avoids `excluded`.
RationalVector random_point(const RationalSubspace& space, const std::vector<RationalSubspace>& excluded, SampleRng& rng);

/// Random loop points (h, x) biased toward lower-dimensional isotropy types.
std::vector<LoopPoint> sample_loop_points(const LinearAction& action, std::size_t count, SampleRng& rng);

/// Random points of a stratum (group part and V part), transported by random
/// group elements for finite groups.
std::vector<LoopPoint> sample_stratum_points(const Stratum& s, const LinearAction& action, std::size_t count,
                                             SampleRng& rng);

/// True iff, at every scale 2^-1 ... 2^-scales, a point of stratum q lies
/// within that distance of `target` (exact nearest-point construction in the
/// linear pieces, angular distance on the circle).
bool sampled_approach(const Stratum& q, const LoopPoint& target, const LinearAction& action, int scales);

CheckOutcome check_partition(const StratificationResult& r, const LinearAction& action,
                             const std::vector<LoopPoint>& points);
CheckOutcome check_partial_order(const ClosureOrder& order, std::size_t count);
CheckOutcome check_frontier(const StratificationResult& r, const ClosureOrder& asserted, const LinearAction& action,
                            const ValidationOptions& options);
CheckOutcome check_local_contractibility(const StratificationResult& r, const LinearAction& action,
                                         const ValidationOptions& options);

ValidationReport validate(const StratificationResult& r, const LinearAction& action, const ValidationOptions& options);
/// Same suites, but frontier checks run against an externally supplied order.
ValidationReport validate(const StratificationResult& r, const ClosureOrder& asserted, const LinearAction& action,
                          const ValidationOptions& options);

/// Transitive closure of a set of covering edges.
ClosureOrder order_from_edges(const std::vector<std::pair<int, int>>& edges, std::size_t count);

}  // namespace strata
