#include "strata/strata.hpp"

#include "parallel.hpp"
#include "strata/arrangement.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace strata {

// ---------------------------------------------------------------------------
// Circle cells

CircleCell CircleCell::point(const Rational& t)
{
    CircleCell c;
    c.kind = Kind::Point;
    c.lo = frac(t);
    c.hi = c.lo;
    return c;
}

CircleCell CircleCell::arc(const Rational& lo, const Rational& hi)
{
    if (!(0 <= lo && lo < hi && hi <= 1)) throw std::invalid_argument("arc endpoints must satisfy 0 <= lo < hi <= 1");
    CircleCell c;
    c.kind = Kind::Arc;
    c.lo = lo;
    c.hi = hi;
    return c;
}

CircleCell CircleCell::full()
{
    CircleCell c;
    c.kind = Kind::Full;
    c.lo = 0;
    c.hi = 1;
    return c;
}

bool CircleCell::contains(const Angle& t) const
{
    switch (kind) {
    case Kind::Point: return t.value == lo;
    case Kind::Arc: return lo < t.value && t.value < hi;
    case Kind::Full: return true;
    }
    return false;
}

bool CircleCell::closure_contains(const Angle& t) const
{
    switch (kind) {
    case Kind::Point: return t.value == lo;
    case Kind::Arc: return (lo <= t.value && t.value <= hi) || (hi == 1 && t.value == 0);
    case Kind::Full: return true;
    }
    return false;
}

bool CircleCell::closure_contains(const CircleCell& other) const
{
    switch (other.kind) {
    case Kind::Point: return closure_contains(Angle(other.lo));
    case Kind::Arc: return kind == Kind::Full || (kind == Kind::Arc && lo <= other.lo && other.hi <= hi);
    case Kind::Full: return kind == Kind::Full;
    }
    return false;
}

Angle CircleCell::sample() const
{
    switch (kind) {
    case Kind::Point: return Angle(lo);
    case Kind::Arc: return Angle((lo + hi) / 2);
    case Kind::Full: return Angle(Rational(0));
    }
    return Angle();
}

std::string CircleCell::label() const
{
    switch (kind) {
    case Kind::Point: return "{" + lo.get_str() + "}";
    case Kind::Arc: return "(" + lo.get_str() + "," + hi.get_str() + ")";
    case Kind::Full: return "S1";
    }
    return {};
}

// ---------------------------------------------------------------------------
// ≃ classes and t•

SimeqPartition simeq_classes(const FiniteMatrixGroup& G, const Subgroup& carrier)
{
    SimeqPartition out;
    std::map<RationalSubspace, std::size_t> index;
    for (int g : carrier.members) {
        RationalSubspace fixed = fixed_subspace(G, g);
        auto [it, inserted] = index.emplace(fixed, out.classes.size());
        if (inserted) out.classes.push_back(SimeqClass{std::move(fixed), {}, {}});
        out.classes[it->second].elements.push_back(g);
    }
    return out;
}

namespace {

std::vector<Rational> special_angles(const CircleWeightAction& action)
{
    std::set<Rational> angles;
    for (long w : action.weights())
        for (long k = 0; k < std::labs(w); ++k) angles.insert(make_rational(k, std::labs(w)));
    return {angles.begin(), angles.end()};
}

/// Cells of the circle in sweep order: point, arc, point, arc, ...
std::vector<CircleCell> sweep_cells(const CircleWeightAction& action)
{
    auto special = special_angles(action);
    if (special.empty()) return {CircleCell::full()};
    std::vector<CircleCell> cells;
    for (std::size_t i = 0; i < special.size(); ++i) {
        cells.push_back(CircleCell::point(special[i]));
        const Rational hi = i + 1 < special.size() ? special[i + 1] : Rational(1);
        cells.push_back(CircleCell::arc(special[i], hi));
    }
    return cells;
}

}  // namespace

SimeqPartition simeq_classes(const CircleWeightAction& action)
{
    SimeqPartition out;
    out.circle = true;
    std::map<RationalSubspace, std::size_t> index;
    for (const auto& cell : sweep_cells(action)) {
        RationalSubspace fixed = fixed_subspace(action, cell.sample());
        auto [it, inserted] = index.emplace(fixed, out.classes.size());
        if (inserted) out.classes.push_back(SimeqClass{std::move(fixed), {}, {}});
        out.classes[it->second].cells.push_back(cell);
    }
    return out;
}

Subgroup t_bullet(const FiniteMatrixGroup& G, const Subgroup& carrier, int t)
{
    const RationalSubspace fixed_t = fixed_subspace(G, t);
    Subgroup out;
    for (int s : carrier.members)
        if (fixed_subspace(G, s).contains(fixed_t)) out.members.push_back(s);
    return out;
}

CircleSubgroup t_bullet(const CircleWeightAction& action, const Angle& t)
{
    long g = 0;
    for (long w : action.weights())
        if (is_integer(t.value * w)) g = std::gcd(g, std::labs(w));
    return CircleSubgroup{g};
}

// ---------------------------------------------------------------------------
// Isotropy lattice

long IsotropyStratum::order() const
{
    return circle ? circle->order : static_cast<long>(subgroup.order());
}

std::string IsotropyStratum::label() const
{
    if (circle) return circle->is_full() ? "S1" : "Z/" + std::to_string(circle->order);
    std::string out = "{";
    for (std::size_t i = 0; i < subgroup.members.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(subgroup.members[i]);
    }
    return out + "}";
}

bool IsotropyStratum::contains(const RationalVector& x) const
{
    if (!fixed_space.contains(x)) return false;
    for (const auto& e : excluded)
        if (e.contains(x)) return false;
    return true;
}

namespace {

std::vector<Rational> grid_values()
{
    std::vector<std::pair<std::tuple<long, long, long, int>, Rational>> keyed;
    for (long q = 1; q <= 7; ++q)
        for (long p = 1; p <= 7; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const long h = std::max(p, q);
            keyed.push_back({{h, q, p, 0}, make_rational(p, q)});
            keyed.push_back({{h, q, p, 1}, make_rational(-p, q)});
        }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Rational> values{Rational(0)};
    for (auto& k : keyed) values.push_back(k.second);
    return values;
}

bool avoids(const RationalVector& x, const std::vector<RationalSubspace>& excluded)
{
    for (const auto& e : excluded)
        if (e.contains(x)) return false;
    return true;
}

}  // namespace

RationalVector grid_witness(const RationalSubspace& space, const std::vector<RationalSubspace>& excluded)
{
    static const std::vector<Rational> values = grid_values();
    const std::size_t d = space.dim();
    if (d == 0) return RationalVector(space.ambient_dim(), Rational(0));

    constexpr std::size_t kBudget = 200000;
    std::size_t tried = 0;
    std::vector<std::size_t> idx(d);
    RationalVector coords(d);
    for (std::size_t r = 0; r < values.size() && tried < kBudget; ++r) {
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
            if (std::find(idx.begin(), idx.end(), r) != idx.end()) {
                for (std::size_t i = 0; i < d; ++i) coords[i] = values[idx[i]];
                RationalVector x = space.point(coords);
                if (avoids(x, excluded)) return x;
                if (++tried >= kBudget) break;
            }
            std::size_t pos = d;
            while (pos > 0 && idx[pos - 1] == r) idx[--pos] = 0;
            if (pos == 0) break;
            ++idx[pos - 1];
        }
    }
    // A proper subspace meets the moment curve s -> (1, s, s^2, ...) in fewer
    // than d points, so this terminates.
    for (long s = 1;; ++s) {
        Rational power = 1;
        for (std::size_t i = 0; i < d; ++i, power *= s) coords[i] = power;
        RationalVector x = space.point(coords);
        if (avoids(x, excluded)) return x;
    }
}

namespace {

bool lattice_before(const IsotropyStratum& a, const IsotropyStratum& b)
{
    if (a.fixed_space.dim() != b.fixed_space.dim()) return a.fixed_space.dim() > b.fixed_space.dim();
    if (a.circle && b.circle) {
        // Z/m before the whole circle, then by m
        if (a.circle->is_full() != b.circle->is_full()) return !a.circle->is_full();
        return a.circle->order < b.circle->order;
    }
    return a.subgroup.members < b.subgroup.members;
}

void fill_excluded_and_witness(std::vector<IsotropyStratum>& lattice)
{
    for (auto& k : lattice) {
        for (const auto& other : lattice)
            if (other.fixed_space.dim() < k.fixed_space.dim() && k.fixed_space.contains(other.fixed_space))
                k.excluded.push_back(other.fixed_space);
        k.witness = grid_witness(k.fixed_space, k.excluded);
    }
}

}  // namespace

std::vector<IsotropyStratum> isotropy_lattice(const FiniteMatrixGroup& G)
{
    const int order = static_cast<int>(G.order());
    std::vector<RationalSubspace> fixed;
    fixed.reserve(G.order());
    for (int g = 0; g < order; ++g) fixed.push_back(fixed_subspace(G, g));

    std::set<RationalSubspace> generators(fixed.begin(), fixed.end());
    std::set<RationalSubspace> meets(generators);
    std::vector<RationalSubspace> frontier(generators.begin(), generators.end());
    while (!frontier.empty()) {
        std::vector<RationalSubspace> next;
        for (const auto& w : frontier)
            for (const auto& f : generators) {
                RationalSubspace m = intersect(w, f);
                if (meets.insert(m).second) next.push_back(std::move(m));
            }
        frontier = std::move(next);
    }

    std::vector<IsotropyStratum> lattice;
    for (const auto& w : meets) {
        IsotropyStratum k;
        for (int g = 0; g < order; ++g)
            if (fixed[static_cast<std::size_t>(g)].contains(w)) k.subgroup.members.push_back(g);
        k.fixed_space = w;
        lattice.push_back(std::move(k));
    }
    std::sort(lattice.begin(), lattice.end(), lattice_before);
    fill_excluded_and_witness(lattice);
    return lattice;
}

std::vector<IsotropyStratum> isotropy_lattice(const CircleWeightAction& action)
{
    std::set<long> realized;
    for (long w : action.weights()) {
        const long a = std::labs(w);
        for (long d = 1; d <= a; ++d) {
            if (a % d != 0) continue;
            long g = 0;
            for (long v : action.weights())
                if (v % d == 0) g = std::gcd(g, std::labs(v));
            if (g == d) realized.insert(d);
        }
    }
    std::vector<IsotropyStratum> lattice;
    for (long m : realized) {
        IsotropyStratum k;
        k.circle = CircleSubgroup{m};
        k.fixed_space = action.isotropy_fixed_space(m);
        lattice.push_back(std::move(k));
    }
    IsotropyStratum whole;
    whole.circle = CircleSubgroup{0};
    whole.fixed_space = action.isotropy_fixed_space(0);
    lattice.push_back(std::move(whole));
    std::sort(lattice.begin(), lattice.end(), lattice_before);
    fill_excluded_and_witness(lattice);
    return lattice;
}

// ---------------------------------------------------------------------------
// Strata

std::string Stratum::group_label() const
{
    if (const int* h = std::get_if<int>(&group_part)) return "g" + std::to_string(*h);
    return std::get<CircleCell>(group_part).label();
}

bool ClosureOrder::less(int p, int q) const
{
    return std::find(relation.begin(), relation.end(), std::make_pair(p, q)) != relation.end();
}

unsigned thread_count(unsigned requested)
{
    if (requested) return requested;
    if (const char* env = std::getenv("STRATA_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<long> count_components(const Stratum& s, std::size_t poset_cap)
{
    return count_regions(s.isotropy.fixed_space, s.isotropy.excluded, poset_cap);
}

namespace {

void finish(StratificationResult& result, const LinearAction& action, const StrataOptions& options)
{
    auto& strata = result.strata;
    detail::parallel_for(strata.size(), thread_count(options.threads),
                         [&](std::size_t i) { strata[i].component_count = count_components(strata[i], options.poset_cap); });
    result.closure = closure_order(strata, action);
    result.depth = depth(result.closure, strata.size());
}

}  // namespace

StratificationResult loop_strata(const FiniteMatrixGroup& G, const StrataOptions& options)
{
    auto lattice = isotropy_lattice(G);
    std::map<Subgroup, int> lattice_index;
    for (std::size_t i = 0; i < lattice.size(); ++i) lattice_index.emplace(lattice[i].subgroup, static_cast<int>(i));

    StratificationResult result;
    const int order = static_cast<int>(G.order());
    for (std::size_t li = 0; li < lattice.size(); ++li) {
        const auto& K = lattice[li];
        for (int h : K.subgroup.members) {
            const std::pair<int, int> label{static_cast<int>(li), h};
            bool canonical = true;
            for (int g = 1; g < order && canonical; ++g) {
                const std::pair<int, int> image{lattice_index.at(G.conjugate(g, K.subgroup)), G.conjugate(g, h)};
                if (image < label) canonical = false;
            }
            if (!canonical) continue;
            Stratum s;
            s.id = static_cast<int>(result.strata.size());
            s.group_part = h;
            s.isotropy = K;
            s.dim = static_cast<int>(K.fixed_space.dim());
            s.witness = LoopPoint{h, K.witness};
            result.strata.push_back(std::move(s));
        }
    }
    finish(result, G, options);
    return result;
}

StratificationResult loop_strata(const CircleWeightAction& action, const StrataOptions& options)
{
    auto lattice = isotropy_lattice(action);
    StratificationResult result;
    result.circle = true;

    std::vector<CircleCell> circle_cells;
    for (const auto& cls : simeq_classes(action).classes)
        circle_cells.insert(circle_cells.end(), cls.cells.begin(), cls.cells.end());
    std::stable_sort(circle_cells.begin(), circle_cells.end(), [](const CircleCell& a, const CircleCell& b) {
        if (a.is_point() != b.is_point()) return a.is_point();
        return a.lo < b.lo;
    });

    for (const auto& K : lattice) {
        auto add = [&](const CircleCell& cell, int extra_dim) {
            Stratum s;
            s.id = static_cast<int>(result.strata.size());
            s.group_part = cell;
            s.isotropy = K;
            s.dim = static_cast<int>(K.fixed_space.dim()) + extra_dim;
            s.witness = LoopPoint{cell.sample(), K.witness};
            result.strata.push_back(std::move(s));
        };
        if (K.circle->is_full()) {
            for (const auto& cell : circle_cells) add(cell, cell.is_point() ? 0 : 1);
        } else {
            for (long k = 0; k < K.circle->order; ++k) add(CircleCell::point(make_rational(k, K.circle->order)), 0);
        }
    }
    finish(result, action, options);
    return result;
}

StratificationResult loop_strata(const LinearAction& action, const StrataOptions& options)
{
    return std::visit([&](const auto& a) { return loop_strata(a, options); }, action);
}

std::vector<std::pair<int, int>> hasse_edges(const std::vector<std::pair<int, int>>& relation, std::size_t count)
{
    std::vector<std::vector<bool>> less(count, std::vector<bool>(count, false));
    for (auto [p, q] : relation) less[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = true;
    std::vector<std::pair<int, int>> edges;
    for (auto [p, q] : relation) {
        bool covered = true;
        for (std::size_t r = 0; r < count && covered; ++r)
            if (less[static_cast<std::size_t>(p)][r] && less[r][static_cast<std::size_t>(q)]) covered = false;
        if (covered) edges.emplace_back(p, q);
    }
    return edges;
}

ClosureOrder closure_order(const std::vector<Stratum>& strata, const FiniteMatrixGroup& G)
{
    ClosureOrder out;
    const int order = static_cast<int>(G.order());
    for (const auto& p : strata)
        for (const auto& q : strata) {
            if (p.id == q.id) continue;
            const int h = std::get<int>(p.group_part);
            const int k = std::get<int>(q.group_part);
            bool below = false;
            for (int g = 0; g < order && !below; ++g) {
                if (G.conjugate(g, k) != h) continue;
                below = p.isotropy.subgroup.contains(G.conjugate(g, q.isotropy.subgroup));
            }
            if (below) out.relation.emplace_back(p.id, q.id);
        }
    out.hasse = hasse_edges(out.relation, strata.size());
    return out;
}

namespace {

bool circle_subgroup_contains(const CircleSubgroup& big, const CircleSubgroup& small)
{
    if (big.is_full()) return true;
    if (small.is_full()) return false;
    return big.order % small.order == 0;
}

}  // namespace

ClosureOrder closure_order(const std::vector<Stratum>& strata, const CircleWeightAction&)
{
    ClosureOrder out;
    for (const auto& p : strata)
        for (const auto& q : strata) {
            if (p.id == q.id) continue;
            const auto& cp = std::get<CircleCell>(p.group_part);
            const auto& cq = std::get<CircleCell>(q.group_part);
            if (cq.closure_contains(cp) && circle_subgroup_contains(*p.isotropy.circle, *q.isotropy.circle))
                out.relation.emplace_back(p.id, q.id);
        }
    out.hasse = hasse_edges(out.relation, strata.size());
    return out;
}

ClosureOrder closure_order(const std::vector<Stratum>& strata, const LinearAction& action)
{
    return std::visit([&](const auto& a) { return closure_order(strata, a); }, action);
}

std::vector<int> depth(const ClosureOrder& order, std::size_t count)
{
    std::vector<std::vector<int>> above(count);
    for (auto [p, q] : order.relation) above[static_cast<std::size_t>(p)].push_back(q);
    std::vector<int> memo(count, -1);
    std::function<int(std::size_t)> visit = [&](std::size_t p) {
        if (memo[p] >= 0) return memo[p];
        int best = 0;
        for (int q : above[p]) best = std::max(best, 1 + visit(static_cast<std::size_t>(q)));
        return memo[p] = best;
    };
    std::vector<int> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = visit(i);
    return out;
}

bool stratum_contains(const Stratum& s, const LoopPoint& p, const FiniteMatrixGroup& G)
{
    const int* h = std::get_if<int>(&p.group);
    if (!h) return false;
    const int k = std::get<int>(s.group_part);
    for (int g = 0; g < static_cast<int>(G.order()); ++g) {
        if (G.conjugate(g, k) != *h) continue;
        if (s.isotropy.contains(G.element(G.inv(g)) * p.x)) return true;
    }
    return false;
}

bool stratum_contains(const Stratum& s, const LoopPoint& p, const CircleWeightAction&)
{
    const Angle* t = std::get_if<Angle>(&p.group);
    if (!t) return false;
    return std::get<CircleCell>(s.group_part).contains(*t) && s.isotropy.contains(p.x);
}

bool stratum_contains(const Stratum& s, const LoopPoint& p, const LinearAction& action)
{
    return std::visit([&](const auto& a) { return stratum_contains(s, p, a); }, action);
}

// ---------------------------------------------------------------------------
// Inertia space

InertiaStratification inertia_strata(const StratificationResult& result, const LinearAction& action,
                                     const StrataOptions& options)
{
    InertiaStratification out;
    out.pieces.resize(result.strata.size());
    detail::parallel_for(result.strata.size(), thread_count(options.threads), [&](std::size_t i) {
        const Stratum& s = result.strata[i];
        InertiaPiece piece;
        piece.stratum = s.id;
        if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
            // Points (h, x), (h, gx) of the piece are identified exactly when g
            // centralizes h and normalizes K.
            const int h = std::get<int>(s.group_part);
            std::vector<RationalMatrix> stabilizer;
            for (int g = 0; g < static_cast<int>(G->order()); ++g)
                if (G->conjugate(g, h) == h && G->conjugate(g, s.isotropy.subgroup) == s.isotropy.subgroup)
                    stabilizer.push_back(G->element(g));
            piece.dim = s.dim;
            piece.component_count =
                count_region_orbits(s.isotropy.fixed_space, s.isotropy.excluded, stabilizer, options.poset_cap);
        } else {
            // Finite isotropy on nonzero vectors: circle orbits are curves. The
            // circle is connected, so components survive the quotient.
            piece.dim = s.isotropy.circle->is_full() ? s.dim : s.dim - 1;
            piece.component_count = s.component_count;
        }
        out.pieces[i] = piece;
    });
    out.closure = result.closure;
    out.depth = result.depth;
    return out;
}

// ---------------------------------------------------------------------------
// Linear stratifications and fibered products

bool LinearPiece::contains(const RationalVector& x) const
{
    if (!space.contains(x)) return false;
    for (const auto& e : excluded)
        if (e.contains(x)) return false;
    return true;
}

std::optional<int> LinearStratification::locate(const RationalVector& x) const
{
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].contains(x)) return static_cast<int>(i);
    return std::nullopt;
}

namespace {

void order_by_closure(LinearStratification& s)
{
    s.closure = {};
    for (std::size_t p = 0; p < s.pieces.size(); ++p)
        for (std::size_t q = 0; q < s.pieces.size(); ++q)
            if (p != q && s.pieces[q].space.contains(s.pieces[p].space) &&
                s.pieces[q].space.dim() > s.pieces[p].space.dim())
                s.closure.relation.emplace_back(static_cast<int>(p), static_cast<int>(q));
    s.closure.hasse = hasse_edges(s.closure.relation, s.pieces.size());
    s.depth = depth(s.closure, s.pieces.size());
}

}  // namespace

LinearStratification trivial_stratification(std::size_t n)
{
    LinearStratification s;
    s.ambient_dim = n;
    s.pieces.push_back(LinearPiece{RationalSubspace::full(n), {}, RationalVector(n, Rational(0)), "all"});
    order_by_closure(s);
    return s;
}

LinearStratification isotropy_type_stratification(const LinearAction& action)
{
    LinearStratification s;
    s.ambient_dim = ambient_dim(action);
    auto lattice = std::visit([](const auto& a) { return isotropy_lattice(a); }, action);
    for (auto& k : lattice) s.pieces.push_back(LinearPiece{k.fixed_space, k.excluded, k.witness, k.label()});
    order_by_closure(s);
    return s;
}

namespace {

/// Embeds a subspace of the first (or second) factor into Q^{na + nb}.
std::vector<RationalVector> embed(const RationalSubspace& s, std::size_t offset, std::size_t total)
{
    std::vector<RationalVector> out;
    for (const auto& b : s.basis()) {
        RationalVector v(total, Rational(0));
        std::copy(b.begin(), b.end(), v.begin() + static_cast<std::ptrdiff_t>(offset));
        out.push_back(std::move(v));
    }
    return out;
}

RationalSubspace product(const RationalSubspace& a, const RationalSubspace& b)
{
    const std::size_t total = a.ambient_dim() + b.ambient_dim();
    auto vs = embed(a, 0, total);
    auto wb = embed(b, a.ambient_dim(), total);
    vs.insert(vs.end(), wb.begin(), wb.end());
    return RationalSubspace::span(total, vs);
}

}  // namespace

LinearStratification stratify_fibered_product(const LinearStratification& a, const RationalMatrix& f,
                                              const LinearStratification& b, const RationalMatrix& g,
                                              const LinearStratification& target)
{
    if (f.cols() != a.ambient_dim || g.cols() != b.ambient_dim || f.rows() != g.rows() ||
        f.rows() != target.ambient_dim)
        throw DimensionMismatch("fibered product: maps do not share a target");

    for (std::size_t i = 0; i < a.pieces.size(); ++i) {
        const auto& piece = a.pieces[i];
        const auto image_point = f * piece.witness;
        auto t = target.locate(image_point);
        if (!t || piece.space.image(f) != target.pieces[static_cast<std::size_t>(*t)].space)
            throw HypothesisViolation("first map is not a submersion onto a target piece on piece " +
                                      std::to_string(i) + " (" + piece.label + ")");
    }

    const std::size_t na = a.ambient_dim;
    const std::size_t total = na + b.ambient_dim;
    // Constraint f x - g y = 0 on Q^{na + nb}.
    RationalMatrix constraint(f.rows(), total);
    for (std::size_t r = 0; r < f.rows(); ++r) {
        for (std::size_t c = 0; c < na; ++c) constraint(r, c) = f(r, c);
        for (std::size_t c = 0; c < b.ambient_dim; ++c) constraint(r, na + c) = -g(r, c);
    }
    const RationalSubspace graph = kernel(constraint);

    LinearStratification out;
    out.ambient_dim = total;
    std::vector<std::pair<std::size_t, std::size_t>> origin;
    for (std::size_t i = 0; i < a.pieces.size(); ++i)
        for (std::size_t j = 0; j < b.pieces.size(); ++j) {
            const auto& pa = a.pieces[i];
            const auto& pb = b.pieces[j];
            const RationalSubspace L = intersect(graph, product(pa.space, pb.space));
            std::vector<RationalSubspace> excluded;
            bool empty = false;
            auto cut = [&](const RationalSubspace& e) {
                RationalSubspace c = intersect(L, e);
                if (c == L) empty = true;
                else excluded.push_back(std::move(c));
            };
            for (const auto& e : pa.excluded) cut(product(e, pb.space));
            for (const auto& e : pb.excluded) cut(product(pa.space, e));
            if (empty) continue;
            std::sort(excluded.begin(), excluded.end());
            excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
            LinearPiece piece{L, excluded, grid_witness(L, excluded), pa.label + " x " + pb.label};
            out.pieces.push_back(std::move(piece));
            origin.emplace_back(i, j);
        }

    for (std::size_t p = 0; p < out.pieces.size(); ++p)
        for (std::size_t q = 0; q < out.pieces.size(); ++q) {
            if (p == q) continue;
            auto [pa, pb] = origin[p];
            auto [qa, qb] = origin[q];
            const bool a_le = pa == qa || a.closure.less(static_cast<int>(pa), static_cast<int>(qa));
            const bool b_le = pb == qb || b.closure.less(static_cast<int>(pb), static_cast<int>(qb));
            if (a_le && b_le) out.closure.relation.emplace_back(static_cast<int>(p), static_cast<int>(q));
        }
    out.closure.hasse = hasse_edges(out.closure.relation, out.pieces.size());
    out.depth = depth(out.closure, out.pieces.size());
    return out;
}

LinearStratification stratify_fibered_product(const LinearStratification& a, const RationalMatrix& f,
                                              const LinearStratification& b, const RationalMatrix& g)
{
    return stratify_fibered_product(a, f, b, g, trivial_stratification(f.rows()));
}

}  // namespace strata
