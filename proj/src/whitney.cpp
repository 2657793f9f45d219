#include "strata/whitney.hpp"

#include "parallel.hpp"
#include "strata/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace strata {

std::vector<Rational> default_scales()
{
    std::vector<Rational> out;
    Rational s(1, 2);
    for (int k = 1; k <= 20; ++k) {
        out.push_back(s);
        s /= 2;
    }
    return out;
}

bool InvariantMap::verify(const LinearAction& action) const
{
    const std::size_t n = ambient_dim(action);
    for (const auto& p : polynomials)
        if (p.degree() != 0 || p.ambient_dim() != n)
            throw std::invalid_argument("invariant map components must be polynomials on Q^" + std::to_string(n));
    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        for (const auto& p : polynomials)
            for (const auto& g : G->generators())
                if (!(pullback_linear(p, g) == p)) return false;
        return true;
    }
    const VectorField xi = fundamental_field(std::get<CircleWeightAction>(action));
    return std::all_of(polynomials.begin(), polynomials.end(),
                       [&](const PolyForm& p) { return lie_derivative(xi, p).is_zero(); });
}

std::string ProbeReport::trend() const
{
    if (std::all_of(scales.begin(), scales.end(), [&](const ScaleRecord& s) { return s.max_angle <= tolerance; }))
        return "flat";
    return !scales.empty() && scales.back().max_angle < scales.front().max_angle ? "decreasing" : "not decreasing";
}

std::string ProbeReport::to_text() const
{
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", tolerance);
    out << (quotient ? "quotient-whitney" : "whitney-b") << " base " << base_stratum << " upper " << upper_stratum
        << " tolerance " << buf << '\n';
    for (const auto& s : scales) {
        out << "scale " << s.scale.get_str() << " samples " << s.samples;
        std::snprintf(buf, sizeof buf, "%.17g", s.max_angle);
        out << " max_angle " << buf;
        if (quotient) {
            std::snprintf(buf, sizeof buf, "%.17g", s.max_residual);
            out << " residual " << buf;
        }
        out << '\n';
    }
    out << "trend " << trend() << '\n' << "verdict " << verdict() << '\n';
    return out.str();
}

namespace {

using Vec = std::vector<double>;

Vec to_doubles(const RationalVector& v)
{
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

double norm(const Vec& v)
{
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Modified Gram-Schmidt; vectors whose remainder is tiny relative to the
/// largest input are dropped as dependent.
std::vector<Vec> orthonormalize(const std::vector<Vec>& vectors)
{
    double scale = 0;
    for (const auto& v : vectors) scale = std::max(scale, norm(v));
    std::vector<Vec> out;
    for (Vec v : vectors) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : out) {
                const double c = dot(v, q);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
            }
        const double r = norm(v);
        if (r <= 1e-10 * scale) continue;
        for (double& x : v) x /= r;
        out.push_back(std::move(v));
    }
    return out;
}

/// Sine of the angle between v and the span of an orthonormal frame.
double sine_to_plane(Vec v, const std::vector<Vec>& frame)
{
    const double len = norm(v);
    if (len == 0) return 0;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : frame) {
            const double c = dot(v, q);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
        }
    return norm(v) / len;
}

RationalVector axpy(const RationalVector& y, const Rational& a, const RationalVector& x)
{
    RationalVector out = y;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
    return out;
}

Rational eval(const PolyForm& p, const RationalVector& x)
{
    Rational total = 0;
    for (const auto& [key, c] : p.terms()) {
        Rational term = c;
        for (std::size_t i = 0; i < key.first.size(); ++i)
            for (int e = 0; e < key.first[i]; ++e) term *= x[i];
        total += term;
    }
    return total;
}

double eval(const PolyForm& p, const Vec& x)
{
    double total = 0;
    for (const auto& [key, c] : p.terms()) {
        double term = to_double(c);
        for (std::size_t i = 0; i < key.first.size(); ++i) term *= std::pow(x[i], key.first[i]);
        total += term;
    }
    return total;
}

/// Local picture at the base point: the base point itself, the tangent
/// spaces of the two strata through it, and how to test membership.
struct LocalModel {
    LoopPoint base;
    RationalSubspace base_space;   // V-part tangent of the base stratum
    RationalSubspace upper_space;  // V-part tangent of the upper stratum
    bool circle = false;
    CircleCell base_cell;
    CircleCell upper_cell;
    Rational t0;                   // unwrapped angle of the base point
};

LocalModel local_model(const StratificationResult& result, const LinearAction& action, const ProbeConfig& config)
{
    const auto count = static_cast<int>(result.strata.size());
    if (config.base_stratum < 0 || config.base_stratum >= count || config.upper_stratum < 0 ||
        config.upper_stratum >= count)
        throw std::invalid_argument("stratum index out of range");
    if (!result.closure.less(config.base_stratum, config.upper_stratum))
        throw std::invalid_argument("stratum " + std::to_string(config.base_stratum) +
                                    " is not in the closure of stratum " + std::to_string(config.upper_stratum));
    if (config.samples_per_scale == 0) throw std::invalid_argument("samples_per_scale must be positive");
    if (!(config.angle_tolerance > 0)) throw std::invalid_argument("angle tolerance must be positive");

    const Stratum& P = result.strata[static_cast<std::size_t>(config.base_stratum)];
    const Stratum& Q = result.strata[static_cast<std::size_t>(config.upper_stratum)];
    LocalModel m;
    m.base = config.base_point.value_or(P.witness);
    if (m.base.x.size() != ambient_dim(action)) throw std::invalid_argument("base point has the wrong dimension");
    if (!stratum_contains(P, m.base, action)) throw std::invalid_argument("base point is not in the base stratum");

    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        const int h = std::get<int>(m.base.group);
        const int kp = std::get<int>(P.group_part);
        const int kq = std::get<int>(Q.group_part);
        bool found = false;
        for (int g = 0; g < static_cast<int>(G->order()) && !found; ++g) {
            if (G->conjugate(g, kp) != h) continue;
            if (!P.isotropy.contains(G->element(G->inv(g)) * m.base.x)) continue;
            m.base_space = P.isotropy.fixed_space.image(G->element(g));
            found = true;
        }
        if (!found) throw std::logic_error("base point transport not found");
        found = false;
        for (int g = 0; g < static_cast<int>(G->order()) && !found; ++g) {
            if (G->conjugate(g, kq) != h) continue;
            RationalSubspace piece = Q.isotropy.fixed_space.image(G->element(g));
            if (!piece.contains(m.base_space)) continue;
            m.upper_space = std::move(piece);
            found = true;
        }
        if (!found) throw std::logic_error("no translate of the upper stratum passes through the base point");
        return m;
    }

    m.circle = true;
    m.base_space = P.isotropy.fixed_space;
    m.upper_space = Q.isotropy.fixed_space;
    m.base_cell = std::get<CircleCell>(P.group_part);
    m.upper_cell = std::get<CircleCell>(Q.group_part);
    m.t0 = std::get<Angle>(m.base.group).value;
    if (m.upper_cell.kind == CircleCell::Kind::Arc && m.t0 != m.upper_cell.lo &&
        !(m.t0 > m.upper_cell.lo && m.t0 < m.upper_cell.hi))
        m.t0 = m.upper_cell.hi;  // approached from below, possibly across 0 = 1
    return m;
}

/// Unwrapped angle near t0 inside `cell`; `eps` scales the offset.
Rational angle_near(const CircleCell& cell, const Rational& t0, const Rational& eps, SampleRng& rng)
{
    Rational r = rng.unit_open();
    if (rng.integer(0, 1) == 1) r = -r;
    switch (cell.kind) {
    case CircleCell::Kind::Point:
        return t0;
    case CircleCell::Kind::Full:
        return t0 + eps * r / 2;
    case CircleCell::Kind::Arc:
        break;
    }
    if (t0 == cell.lo) return t0 + eps * abs(r) * (cell.hi - cell.lo) / 2;
    if (t0 == cell.hi) return t0 - eps * abs(r) * (cell.hi - cell.lo) / 2;
    Rational room = t0 - cell.lo;
    if (cell.hi - t0 < room) room = cell.hi - t0;
    return t0 + eps * r * room / 2;
}

struct SamplePair {
    LoopPoint upper;
    LoopPoint base;
    Rational t_upper;  // unwrapped angles, circle only
    Rational t_base;
};

std::optional<SamplePair> sample_pair(const StratificationResult& result, const LinearAction& action,
                                      const ProbeConfig& config, const LocalModel& m, const Rational& eps,
                                      SampleRng& rng)
{
    const Stratum& P = result.strata[static_cast<std::size_t>(config.base_stratum)];
    const Stratum& Q = result.strata[static_cast<std::size_t>(config.upper_stratum)];
    for (int attempt = 0; attempt < 64; ++attempt) {
        SamplePair s;
        const RationalVector u = random_point(m.upper_space, {}, rng);
        const RationalVector w = random_point(m.base_space, {}, rng);
        s.upper.x = axpy(m.base.x, eps, u);
        s.base.x = axpy(m.base.x, eps / 8, w);
        if (m.circle) {
            s.t_upper = angle_near(m.upper_cell, m.t0, eps, rng);
            s.t_base = angle_near(m.base_cell, m.t0, eps / 8, rng);
            s.upper.group = Angle(s.t_upper);
            s.base.group = Angle(s.t_base);
        } else {
            s.upper.group = m.base.group;
            s.base.group = m.base.group;
        }
        if (stratum_contains(Q, s.upper, action) && stratum_contains(P, s.base, action)) return s;
    }
    return std::nullopt;
}

template <class Measure>
ProbeReport run_probe(const StratificationResult& result, const LinearAction& action, const ProbeConfig& config,
                      bool quotient, Measure&& measure)
{
    const LocalModel m = local_model(result, action, config);
    std::vector<Rational> scales = config.scales.empty() ? default_scales() : config.scales;
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (scales[i] <= 0 || (i > 0 && scales[i] >= scales[i - 1]))
            throw std::invalid_argument("scales must be positive and strictly decreasing");

    ProbeReport report;
    report.base_stratum = config.base_stratum;
    report.upper_stratum = config.upper_stratum;
    report.quotient = quotient;
    report.tolerance = config.angle_tolerance;
    report.scales.resize(scales.size());
    detail::parallel_for(scales.size(), thread_count(config.threads), [&](std::size_t i) {
        SampleRng rng(config.seed * 0x9E3779B97F4A7C15ULL + i + 1);
        ScaleRecord& rec = report.scales[i];
        rec.scale = scales[i];
        for (std::size_t k = 0; k < config.samples_per_scale; ++k) {
            auto pair = sample_pair(result, action, config, m, scales[i], rng);
            if (!pair) continue;
            const auto [angle, residual] = measure(m, *pair);
            rec.max_angle = std::max(rec.max_angle, angle);
            rec.max_residual = std::max(rec.max_residual, residual);
            ++rec.samples;
        }
    });
    report.passed = std::all_of(report.scales.begin(), report.scales.end(),
                                [](const ScaleRecord& r) { return r.samples > 0; }) &&
                    !report.scales.empty() && report.finest_angle() <= config.angle_tolerance;
    return report;
}

}  // namespace

ProbeReport probe_whitney_b(const StratificationResult& result, const LinearAction& action, const ProbeConfig& config)
{
    return run_probe(result, action, config, false, [](const LocalModel& m, const SamplePair& s) {
        // Secant and tangent live in R x V for the circle (angle first).
        RationalVector secant;
        std::vector<Vec> tangent;
        const std::size_t n = s.upper.x.size();
        const std::size_t off = m.circle ? 1 : 0;
        if (m.circle) secant.push_back(s.t_upper - s.t_base);
        for (std::size_t i = 0; i < n; ++i) secant.push_back(s.upper.x[i] - s.base.x[i]);
        if (m.circle && !m.upper_cell.is_point()) {
            Vec e(n + 1, 0.0);
            e[0] = 1;
            tangent.push_back(e);
        }
        for (const auto& b : m.upper_space.basis()) {
            Vec e(n + off, 0.0);
            for (std::size_t i = 0; i < n; ++i) e[i + off] = to_double(b[i]);
            tangent.push_back(e);
        }
        return std::pair{sine_to_plane(to_doubles(secant), orthonormalize(tangent)), 0.0};
    });
}

ProbeReport probe_quotient_whitney(const StratificationResult& result, const LinearAction& action,
                                   const InvariantMap& inv, const ProbeConfig& config)
{
    if (inv.polynomials.empty()) throw std::invalid_argument("invariant map is empty");
    if (!inv.verify(action)) throw InvarianceError("polynomial map is not invariant under the action");

    const std::size_t n = ambient_dim(action);
    // Partial derivatives, exact.
    std::vector<std::vector<PolyForm>> jacobian(inv.polynomials.size(), std::vector<PolyForm>(n, PolyForm(n, 0)));
    for (std::size_t r = 0; r < inv.polynomials.size(); ++r) {
        const PolyForm dp = exterior_d(inv.polynomials[r]);
        for (const auto& [key, c] : dp.terms())
            for (std::size_t j = 0; j < n; ++j)
                if (key.second == (1u << j)) jacobian[r][j].add(key.first, 0, c);
    }

    return run_probe(result, action, config, true, [&](const LocalModel& m, const SamplePair& s) {
        const std::size_t N = inv.polynomials.size();
        RationalVector secant(N);
        for (std::size_t r = 0; r < N; ++r)
            secant[r] = eval(inv.polynomials[r], s.upper.x) - eval(inv.polynomials[r], s.base.x);

        // Orthonormal frame of the upper V-tangent, pushed through Dp at the
        // upper point, checked against central differences.
        std::vector<Vec> frame;
        for (const auto& b : m.upper_space.basis()) frame.push_back(to_doubles(b));
        frame = orthonormalize(frame);
        const Vec x = to_doubles(s.upper.x);
        const double h = 1e-6 * std::max(norm(x), 1e-300);
        std::vector<Vec> pushed;
        double residual = 0;
        for (const auto& e : frame) {
            Vec je(N, 0.0);
            for (std::size_t r = 0; r < N; ++r)
                for (std::size_t j = 0; j < n; ++j)
                    if (e[j] != 0) je[r] += to_double(eval(jacobian[r][j], s.upper.x)) * e[j];
            Vec plus = x, minus = x;
            for (std::size_t j = 0; j < n; ++j) {
                plus[j] += h * e[j];
                minus[j] -= h * e[j];
            }
            double diff = 0;
            for (std::size_t r = 0; r < N; ++r) {
                const double fd = (eval(inv.polynomials[r], plus) - eval(inv.polynomials[r], minus)) / (2 * h);
                diff = std::max(diff, std::abs(fd - je[r]));
            }
            const double scale = norm(je);
            if (scale > 0) residual = std::max(residual, diff / scale);
            pushed.push_back(std::move(je));
        }
        return std::pair{sine_to_plane(to_doubles(secant), orthonormalize(pushed)), residual};
    });
}

}  // namespace strata
