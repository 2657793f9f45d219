#include "strata/validate.hpp"

#include <algorithm>
#include <functional>

namespace strata {

void CheckOutcome::fail(std::string what)
{
    passed = false;
    if (counterexamples.size() < 8) counterexamples.push_back(std::move(what));
}

bool ValidationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

long SampleRng::integer(long lo, long hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(next() % span);
}

Rational SampleRng::rational(long range, long max_den)
{
    return make_rational(integer(-range, range), integer(1, max_den));
}

Rational SampleRng::unit_open()
{
    const long den = integer(2, 16);
    return make_rational(integer(1, den - 1), den);
}

double SampleRng::unit_double()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::string to_string(const LoopPoint& p)
{
    std::string g = std::holds_alternative<int>(p.group) ? "g" + std::to_string(std::get<int>(p.group))
                                                         : "t=" + std::get<Angle>(p.group).value.get_str();
    return "(" + g + ", " + to_string(p.x) + ")";
}

RationalVector random_point(const RationalSubspace& space, const std::vector<RationalSubspace>& excluded, SampleRng& rng)
{
    for (int attempt = 0; attempt < 64; ++attempt) {
        RationalVector coords(space.dim());
        for (auto& c : coords) c = rng.rational();
        RationalVector x = space.point(coords);
        if (std::none_of(excluded.begin(), excluded.end(), [&](const RationalSubspace& e) { return e.contains(x); }))
            return x;
    }
    return grid_witness(space, excluded);
}

namespace {

Angle random_angle_in(const CircleCell& c, SampleRng& rng)
{
    switch (c.kind) {
    case CircleCell::Kind::Point: return Angle(c.lo);
    case CircleCell::Kind::Arc: return Angle(c.lo + rng.unit_open() * (c.hi - c.lo));
    case CircleCell::Kind::Full: return Angle(rng.unit_open());
    }
    return Angle();
}

std::vector<CircleCell> all_cells(const CircleWeightAction& a)
{
    std::vector<CircleCell> cells;
    for (const auto& cls : simeq_classes(a).classes) cells.insert(cells.end(), cls.cells.begin(), cls.cells.end());
    return cells;
}

Rational norm2(const RationalVector& v)
{
    return dot(v, v);
}

RationalVector add_scaled(const RationalVector& a, const Rational& s, const RationalVector& b)
{
    RationalVector out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * b[i];
    return out;
}

/// Circular distance between angles.
Rational circle_distance(const Rational& a, const Rational& b)
{
    Rational d = frac(a - b);
    Rational e = 1 - d;
    return std::min(d, e);
}

}  // namespace

std::vector<LoopPoint> sample_loop_points(const LinearAction& action, std::size_t count, SampleRng& rng)
{
    std::vector<LoopPoint> out;
    out.reserve(count);
    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        const long order = static_cast<long>(G->order());
        for (std::size_t i = 0; i < count; ++i) {
            const int h = static_cast<int>(rng.integer(0, order - 1));
            RationalSubspace S = fixed_subspace(*G, h);
            const long extra = rng.integer(0, 2);
            for (long e = 0; e < extra; ++e)
                S = intersect(S, fixed_subspace(*G, static_cast<int>(rng.integer(0, order - 1))));
            out.push_back(LoopPoint{h, random_point(S, {}, rng)});
        }
        return out;
    }
    const auto& C = std::get<CircleWeightAction>(action);
    const auto cells = all_cells(C);
    const std::size_t m = C.weights().size();
    for (std::size_t i = 0; i < count; ++i) {
        Angle t;
        const long mode = rng.integer(0, 3);
        if (mode == 0) t = Angle(rng.unit_open());
        else t = random_angle_in(cells[static_cast<std::size_t>(rng.integer(0, static_cast<long>(cells.size()) - 1))], rng);
        RationalVector y(C.ambient_dim(), Rational(0));
        for (std::size_t j = 0; j < m; ++j) {
            if (!is_integer(t.value * C.weights()[j]) || rng.integer(0, 1) == 0) continue;
            y[2 * j] = rng.rational();
            y[2 * j + 1] = rng.rational();
        }
        for (std::size_t j = 2 * m; j < y.size(); ++j) y[j] = rng.rational();
        out.push_back(LoopPoint{t, C.frame() * y});
    }
    return out;
}

std::vector<LoopPoint> sample_stratum_points(const Stratum& s, const LinearAction& action, std::size_t count,
                                             SampleRng& rng)
{
    std::vector<LoopPoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        RationalVector x = random_point(s.isotropy.fixed_space, s.isotropy.excluded, rng);
        if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
            const int g = static_cast<int>(rng.integer(0, static_cast<long>(G->order()) - 1));
            out.push_back(LoopPoint{G->conjugate(g, std::get<int>(s.group_part)), G->element(g) * x});
        } else {
            out.push_back(LoopPoint{random_angle_in(std::get<CircleCell>(s.group_part), rng), std::move(x)});
        }
    }
    return out;
}

bool sampled_approach(const Stratum& q, const LoopPoint& target, const LinearAction& action, int scales)
{
    struct Candidate {
        RationalSubspace space;
        std::vector<RationalSubspace> excluded;
        std::vector<RationalVector> directions;
    };

    auto approaches_in = [&](const Candidate& c, const Rational& angle_gap2, const std::function<bool(const Rational&)>& angle_ok) {
        const RationalVector base = c.space.project(target.x);
        RationalVector diff(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) diff[i] = target.x[i] - base[i];
        const Rational d2 = norm2(diff) + angle_gap2;
        Rational eps = 1;
        for (int k = 1; k <= scales; ++k) {
            eps /= 2;
            if (d2 > eps * eps) return false;
            if (!angle_ok(eps)) return false;
            bool found = false;
            for (const auto& z : c.directions) {
                RationalVector y = add_scaled(base, eps, z);
                if (std::none_of(c.excluded.begin(), c.excluded.end(),
                                 [&](const RationalSubspace& e) { return e.contains(y); })) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    };

    auto directions_for = [](const RationalSubspace& space, const RationalVector& w) {
        std::vector<RationalVector> dirs{w};
        RationalVector twisted = w;
        for (std::size_t i = 0; i < space.basis().size(); ++i)
            twisted = add_scaled(twisted, make_rational(1, static_cast<long>(i) + 2), space.basis()[i]);
        dirs.push_back(std::move(twisted));
        return dirs;
    };

    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        const int* h = std::get_if<int>(&target.group);
        if (!h) return false;
        const int k = std::get<int>(q.group_part);
        for (int g = 0; g < static_cast<int>(G->order()); ++g) {
            if (G->conjugate(g, k) != *h) continue;
            const RationalMatrix& M = G->element(g);
            Candidate c{q.isotropy.fixed_space.image(M), {}, {}};
            for (const auto& e : q.isotropy.excluded) c.excluded.push_back(e.image(M));
            c.directions = directions_for(c.space, M * q.isotropy.witness);
            if (approaches_in(c, Rational(0), [](const Rational&) { return true; })) return true;
        }
        return false;
    }

    const Angle* t = std::get_if<Angle>(&target.group);
    if (!t) return false;
    const auto& cell = std::get<CircleCell>(q.group_part);
    Candidate c{q.isotropy.fixed_space, q.isotropy.excluded,
                directions_for(q.isotropy.fixed_space, q.isotropy.witness)};

    // Angular part: distance from t to the closure of the cell, and whether a
    // cell point exists within eps of t.
    Rational gap = 0;
    if (!cell.closure_contains(*t)) {
        if (cell.kind == CircleCell::Kind::Point) gap = circle_distance(cell.lo, t->value);
        else gap = std::min(circle_distance(cell.lo, t->value), circle_distance(cell.hi, t->value));
    }
    auto angle_ok = [&](const Rational& eps) {
        if (cell.contains(*t)) return true;
        if (cell.kind != CircleCell::Kind::Arc) return false;
        // Step inside the arc from the nearest endpoint.
        const Rational step = eps * (cell.hi - cell.lo) / 2;
        const bool near_lo = circle_distance(cell.lo, t->value) <= circle_distance(cell.hi, t->value);
        const Angle s(near_lo ? Rational(cell.lo + step) : Rational(cell.hi - step));
        const Rational dist = circle_distance(s.value, t->value);
        return cell.contains(s) && dist <= eps;
    };
    return approaches_in(c, gap * gap, angle_ok);
}

CheckOutcome check_partition(const StratificationResult& r, const LinearAction& action,
                             const std::vector<LoopPoint>& points)
{
    CheckOutcome out{"partition", true, points.size(), {}};
    for (const auto& p : points) {
        int hits = 0;
        for (const auto& s : r.strata)
            if (stratum_contains(s, p, action)) ++hits;
        if (hits != 1) out.fail(to_string(p) + " lies in " + std::to_string(hits) + " strata");
    }
    return out;
}

CheckOutcome check_partial_order(const ClosureOrder& order, std::size_t count)
{
    CheckOutcome out{"partial-order", true, count * count, {}};
    std::vector<std::vector<bool>> less(count, std::vector<bool>(count, false));
    for (auto [p, q] : order.relation) {
        if (p < 0 || q < 0 || static_cast<std::size_t>(p) >= count || static_cast<std::size_t>(q) >= count) {
            out.fail("relation mentions unknown stratum");
            return out;
        }
        less[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = true;
    }
    for (std::size_t p = 0; p < count; ++p) {
        if (less[p][p]) out.fail("reflexive pair at stratum " + std::to_string(p));
        for (std::size_t q = 0; q < count; ++q) {
            if (less[p][q] && less[q][p] && p < q)
                out.fail("strata " + std::to_string(p) + " and " + std::to_string(q) + " are mutually below");
            for (std::size_t s = 0; s < count; ++s)
                if (less[p][q] && less[q][s] && !less[p][s] && p != s)
                    out.fail("transitivity fails for " + std::to_string(p) + " < " + std::to_string(q) + " < " +
                             std::to_string(s));
        }
    }
    return out;
}

CheckOutcome check_frontier(const StratificationResult& r, const ClosureOrder& asserted, const LinearAction& action,
                            const ValidationOptions& options)
{
    CheckOutcome out{"frontier", true, 0, {}};
    SampleRng rng(options.seed ^ 0x5eedf00dULL);
    const std::size_t n = r.strata.size();
    std::vector<std::vector<LoopPoint>> probes(n);
    for (std::size_t p = 0; p < n; ++p) {
        probes[p].push_back(r.strata[p].witness);
        auto extra = sample_stratum_points(r.strata[p], action, options.points_per_stratum, rng);
        probes[p].insert(probes[p].end(), extra.begin(), extra.end());
    }
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            std::size_t approached = 0;
            for (const auto& pt : probes[p])
                if (sampled_approach(r.strata[q], pt, action, options.scales)) ++approached;
            out.trials += probes[p].size();
            const bool claimed = asserted.less(static_cast<int>(p), static_cast<int>(q));
            if (claimed && approached != probes[p].size())
                out.fail("asserted " + std::to_string(p) + " <= closure(" + std::to_string(q) +
                         ") but sampled point " + to_string(probes[p].front()) + " is not approached");
            if (!claimed && approached > 0)
                out.fail("stratum " + std::to_string(p) + " meets closure(" + std::to_string(q) +
                         ") but the order does not assert it");
        }
    return out;
}

CheckOutcome check_local_contractibility(const StratificationResult& r, const LinearAction& action,
                                         const ValidationOptions& options)
{
    CheckOutcome out{"local-contractibility", true, 0, {}};
    SampleRng rng(options.seed ^ 0x1cULL);
    for (const auto& s : r.strata) {
        std::vector<LoopPoint> pts{s.witness};
        auto extra = sample_stratum_points(s, action, options.points_per_stratum, rng);
        pts.insert(pts.end(), extra.begin(), extra.end());
        for (const auto& p : pts)
            for (int k = 0; k < 3; ++k) {
                const Rational t = k == 0 ? Rational(1) : rng.unit_open();
                LoopPoint scaled = p;
                for (auto& c : scaled.x) c *= t;
                ++out.trials;
                if (!stratum_contains(s, scaled, action))
                    out.fail("stratum " + std::to_string(s.id) + " not invariant under scaling " + to_string(p) +
                             " by " + t.get_str());
            }
    }
    return out;
}

ValidationReport validate(const StratificationResult& r, const ClosureOrder& asserted, const LinearAction& action,
                          const ValidationOptions& options)
{
    ValidationReport report;
    SampleRng rng(options.seed);
    auto points = sample_loop_points(action, options.samples, rng);
    for (const auto& s : r.strata) points.push_back(s.witness);
    report.checks.push_back(check_partition(r, action, points));
    report.checks.push_back(check_partial_order(asserted, r.strata.size()));
    report.checks.push_back(check_frontier(r, asserted, action, options));
    report.checks.push_back(check_local_contractibility(r, action, options));
    return report;
}

ValidationReport validate(const StratificationResult& r, const LinearAction& action, const ValidationOptions& options)
{
    return validate(r, r.closure, action, options);
}

ClosureOrder order_from_edges(const std::vector<std::pair<int, int>>& edges, std::size_t count)
{
    std::vector<std::vector<bool>> less(count, std::vector<bool>(count, false));
    for (auto [p, q] : edges) less[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = true;
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t i = 0; i < count; ++i)
            if (less[i][k])
                for (std::size_t j = 0; j < count; ++j)
                    if (less[k][j]) less[i][j] = true;
    ClosureOrder out;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j)
            if (less[i][j]) out.relation.emplace_back(static_cast<int>(i), static_cast<int>(j));
    out.hasse = hasse_edges(out.relation, count);
    return out;
}

}  // namespace strata
