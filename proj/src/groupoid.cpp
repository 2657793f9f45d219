#include "strata/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace strata {

int GroupTable::inverse(int a) const
{
    for (int b = 0; b < order; ++b)
        if (product(a, b) == 0) return b;
    throw std::logic_error("group table without inverse");
}

GroupTable GroupTable::cyclic(int n)
{
    GroupTable t;
    t.order = n;
    t.mul.resize(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t.mul[static_cast<std::size_t>(a * n + b)] = (a + b) % n;
    return t;
}

GroupTable GroupTable::symmetric(int n)
{
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < perms.size(); ++i) index.emplace(perms[i], static_cast<int>(i));
    GroupTable t;
    t.order = static_cast<int>(perms.size());
    t.mul.assign(perms.size() * perms.size(), 0);
    for (std::size_t a = 0; a < perms.size(); ++a)
        for (std::size_t b = 0; b < perms.size(); ++b) {
            std::vector<int> c(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
            t.mul[a * perms.size() + b] = index.at(c);
        }
    return t;
}

GroupTable GroupTable::of(const FiniteMatrixGroup& G)
{
    GroupTable t;
    t.order = static_cast<int>(G.order());
    t.mul.resize(G.order() * G.order());
    for (int a = 0; a < t.order; ++a)
        for (int b = 0; b < t.order; ++b) t.mul[static_cast<std::size_t>(a * t.order + b)] = G.mul(a, b);
    return t;
}

std::vector<int> FiniteGroupoid::orbits() const
{
    std::vector<int> parent(static_cast<std::size_t>(objects));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (int a = 0; a < arrows(); ++a) {
        const int r1 = root(src[static_cast<std::size_t>(a)]);
        const int r2 = root(tgt[static_cast<std::size_t>(a)]);
        if (r1 != r2) parent[static_cast<std::size_t>(std::max(r1, r2))] = std::min(r1, r2);
    }
    std::vector<int> out(static_cast<std::size_t>(objects));
    std::map<int, int> label;
    for (int x = 0; x < objects; ++x) {
        auto [it, fresh] = label.emplace(root(x), static_cast<int>(label.size()));
        out[static_cast<std::size_t>(x)] = it->second;
    }
    return out;
}

int FiniteGroupoid::orbit_count() const
{
    const auto o = orbits();
    return o.empty() ? 0 : *std::max_element(o.begin(), o.end()) + 1;
}

std::vector<int> FiniteGroupoid::isotropy(int x) const
{
    std::vector<int> out;
    for (int a = 0; a < arrows(); ++a)
        if (src[static_cast<std::size_t>(a)] == x && tgt[static_cast<std::size_t>(a)] == x) out.push_back(a);
    return out;
}

namespace {

constexpr std::size_t kMaxViolations = 100;

struct Recorder {
    GroupoidReport& report;
    void operator()(std::string what)
    {
        if (report.violations.size() < kMaxViolations) report.violations.push_back(std::move(what));
        else if (report.violations.size() == kMaxViolations) report.violations.push_back("further violations omitted");
    }
};

std::string triple(int a, int b, int c)
{
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

}  // namespace

GroupoidReport validate(const FiniteGroupoid& G)
{
    GroupoidReport report;
    Recorder fail{report};
    const int n = G.arrows();
    const auto N = static_cast<std::size_t>(n);
    if (G.tgt.size() != N || G.inv.size() != N || G.mul.size() != N * N ||
        G.unit.size() != static_cast<std::size_t>(G.objects)) {
        fail("table sizes do not match the arrow and object counts");
        return report;
    }
    auto arrow_ok = [&](int a) { return a >= 0 && a < n; };
    auto object_ok = [&](int x) { return x >= 0 && x < G.objects; };
    for (int a = 0; a < n; ++a)
        if (!object_ok(G.src[static_cast<std::size_t>(a)]) || !object_ok(G.tgt[static_cast<std::size_t>(a)]) ||
            !arrow_ok(G.inv[static_cast<std::size_t>(a)])) {
            fail("arrow " + std::to_string(a) + " has an out-of-range source, target or inverse");
            return report;
        }
    for (int x = 0; x < G.objects; ++x)
        if (!arrow_ok(G.unit[static_cast<std::size_t>(x)])) {
            fail("unit of object " + std::to_string(x) + " is out of range");
            return report;
        }
    auto s = [&](int a) { return G.src[static_cast<std::size_t>(a)]; };
    auto t = [&](int a) { return G.tgt[static_cast<std::size_t>(a)]; };
    auto u = [&](int x) { return G.unit[static_cast<std::size_t>(x)]; };
    auto i = [&](int a) { return G.inv[static_cast<std::size_t>(a)]; };

    for (int x = 0; x < G.objects; ++x)
        if (s(u(x)) != x || t(u(x)) != x) fail("unit of object " + std::to_string(x) + " is not a loop at it");

    bool composition_ok = true;
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) {
            const int gh = G.compose(g, h);
            if (s(g) != t(h)) {
                if (gh != -1) {
                    fail("product defined on non-composable pair (" + std::to_string(g) + ", " + std::to_string(h) + ")");
                    composition_ok = false;
                }
                continue;
            }
            if (!arrow_ok(gh)) {
                fail("product undefined on composable pair (" + std::to_string(g) + ", " + std::to_string(h) + ")");
                composition_ok = false;
                continue;
            }
            if (s(gh) != s(h) || t(gh) != t(g))
                fail("product of (" + std::to_string(g) + ", " + std::to_string(h) + ") has wrong endpoints");
        }
    if (!composition_ok) return report;

    for (int g = 0; g < n; ++g) {
        if (G.compose(g, u(s(g))) != g || G.compose(u(t(g)), g) != g)
            fail("unit law fails for arrow " + std::to_string(g));
        if (s(i(g)) != t(g) || t(i(g)) != s(g) || G.compose(g, i(g)) != u(t(g)) || G.compose(i(g), g) != u(s(g)))
            fail("inverse law fails for arrow " + std::to_string(g));
    }
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) {
            if (s(g) != t(h)) continue;
            for (int k = 0; k < n; ++k) {
                if (s(h) != t(k)) continue;
                if (G.compose(G.compose(g, h), k) != G.compose(g, G.compose(h, k)))
                    fail("associativity fails for " + triple(g, h, k));
            }
        }
    return report;
}

GroupoidReport validate_morphism(const FiniteGroupoid& K, const FiniteGroupoid& G, const GroupoidMorphism& f)
{
    GroupoidReport report;
    Recorder fail{report};
    if (f.object_map.size() != static_cast<std::size_t>(K.objects) ||
        f.arrow_map.size() != static_cast<std::size_t>(K.arrows())) {
        fail("morphism tables do not match the source groupoid");
        return report;
    }
    for (int x : f.object_map)
        if (x < 0 || x >= G.objects) {
            fail("object image out of range");
            return report;
        }
    for (int a : f.arrow_map)
        if (a < 0 || a >= G.arrows()) {
            fail("arrow image out of range");
            return report;
        }
    auto f0 = [&](int x) { return f.object_map[static_cast<std::size_t>(x)]; };
    auto f1 = [&](int a) { return f.arrow_map[static_cast<std::size_t>(a)]; };
    for (int a = 0; a < K.arrows(); ++a) {
        const auto A = static_cast<std::size_t>(a);
        const auto B = static_cast<std::size_t>(f1(a));
        if (G.src[B] != f0(K.src[A])) fail("source not preserved by arrow " + std::to_string(a));
        if (G.tgt[B] != f0(K.tgt[A])) fail("target not preserved by arrow " + std::to_string(a));
        if (G.inv[B] != f1(K.inv[A])) fail("inverse not preserved by arrow " + std::to_string(a));
    }
    for (int x = 0; x < K.objects; ++x)
        if (f1(K.unit[static_cast<std::size_t>(x)]) != G.unit[static_cast<std::size_t>(f0(x))])
            fail("unit not preserved at object " + std::to_string(x));
    for (int a = 0; a < K.arrows(); ++a)
        for (int b = 0; b < K.arrows(); ++b) {
            const int ab = K.compose(a, b);
            if (ab < 0) continue;
            if (G.compose(f1(a), f1(b)) != f1(ab))
                fail("product not preserved on (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    return report;
}

namespace {

FiniteGroupoid with_tables(int objects, std::vector<int> src, std::vector<int> tgt)
{
    FiniteGroupoid G;
    G.objects = objects;
    G.src = std::move(src);
    G.tgt = std::move(tgt);
    G.unit.assign(static_cast<std::size_t>(objects), -1);
    G.inv.assign(G.src.size(), -1);
    G.mul.assign(G.src.size() * G.src.size(), -1);
    return G;
}

}  // namespace

FiniteGroupoid pair_groupoid(int n)
{
    // Arrow y * n + x goes from x to y.
    std::vector<int> src, tgt;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            src.push_back(x);
            tgt.push_back(y);
        }
    auto G = with_tables(n, src, tgt);
    for (int x = 0; x < n; ++x) G.unit[static_cast<std::size_t>(x)] = x * n + x;
    for (int a = 0; a < n * n; ++a) {
        const int x = a % n, y = a / n;
        G.inv[static_cast<std::size_t>(a)] = x * n + y;
        for (int z = 0; z < n; ++z) {
            // (x -> y) after (z -> x)
            const int b = x * n + z;
            G.mul[static_cast<std::size_t>(a) * G.src.size() + static_cast<std::size_t>(b)] = y * n + z;
        }
    }
    return G;
}

FiniteGroupoid one_object(const GroupTable& group)
{
    return translation_groupoid(group, std::vector<std::vector<int>>(static_cast<std::size_t>(group.order), {0}));
}

FiniteGroupoid translation_groupoid(const GroupTable& group, const std::vector<std::vector<int>>& act)
{
    if (act.size() != static_cast<std::size_t>(group.order)) throw std::invalid_argument("action table needs one row per group element");
    const int X = act.empty() ? 0 : static_cast<int>(act.front().size());
    for (const auto& row : act) {
        if (static_cast<int>(row.size()) != X) throw std::invalid_argument("action table rows differ in length");
        for (int y : row)
            if (y < 0 || y >= X) throw std::invalid_argument("action table entry out of range");
    }
    auto a = [&](int g, int x) { return act[static_cast<std::size_t>(g)][static_cast<std::size_t>(x)]; };
    for (int x = 0; x < X; ++x)
        if (a(0, x) != x) throw std::invalid_argument("identity does not act trivially");
    for (int g = 0; g < group.order; ++g)
        for (int h = 0; h < group.order; ++h)
            for (int x = 0; x < X; ++x)
                if (a(group.product(g, h), x) != a(g, a(h, x)))
                    throw std::invalid_argument("action table is not compatible with the group law");

    // Arrow g * X + x is (g, x): x -> g . x.
    std::vector<int> src, tgt;
    for (int g = 0; g < group.order; ++g)
        for (int x = 0; x < X; ++x) {
            src.push_back(x);
            tgt.push_back(a(g, x));
        }
    auto G = with_tables(X, src, tgt);
    const std::size_t n = G.src.size();
    for (int x = 0; x < X; ++x) G.unit[static_cast<std::size_t>(x)] = x;
    for (int g = 0; g < group.order; ++g)
        for (int x = 0; x < X; ++x) {
            const int arrow = g * X + x;
            G.inv[static_cast<std::size_t>(arrow)] = group.inverse(g) * X + a(g, x);
            for (int h = 0; h < group.order; ++h) {
                // (g, h.x) after (h, x)
                const int first = h * X + x;
                const int second = g * X + a(h, x);
                G.mul[static_cast<std::size_t>(second) * n + static_cast<std::size_t>(first)] = group.product(g, h) * X + x;
            }
        }
    return G;
}

std::vector<int> loop_space(const FiniteGroupoid& G)
{
    std::vector<int> out;
    for (int a = 0; a < G.arrows(); ++a)
        if (G.src[static_cast<std::size_t>(a)] == G.tgt[static_cast<std::size_t>(a)]) out.push_back(a);
    return out;
}

FiniteGroupoid inertia_groupoid(const FiniteGroupoid& G)
{
    const auto loops = loop_space(G);
    std::map<int, int> loop_index;
    for (std::size_t i = 0; i < loops.size(); ++i) loop_index.emplace(loops[i], static_cast<int>(i));

    std::vector<std::pair<int, int>> pairs;  // (g, h)
    std::map<std::pair<int, int>, int> pair_index;
    std::vector<int> src, tgt;
    for (int h : loops)
        for (int g = 0; g < G.arrows(); ++g) {
            if (G.src[static_cast<std::size_t>(g)] != G.src[static_cast<std::size_t>(h)]) continue;
            const int conj = G.compose(G.compose(g, h), G.inv[static_cast<std::size_t>(g)]);
            pair_index.emplace(std::make_pair(g, h), static_cast<int>(pairs.size()));
            pairs.emplace_back(g, h);
            src.push_back(loop_index.at(h));
            tgt.push_back(loop_index.at(conj));
        }
    auto L = with_tables(static_cast<int>(loops.size()), src, tgt);
    const std::size_t n = pairs.size();
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const int h = loops[i];
        L.unit[i] = pair_index.at({G.unit[static_cast<std::size_t>(G.src[static_cast<std::size_t>(h)])], h});
    }
    for (std::size_t p = 0; p < n; ++p) {
        const auto [g, h] = pairs[p];
        const int ginv = G.inv[static_cast<std::size_t>(g)];
        const int conj = loops[static_cast<std::size_t>(L.tgt[p])];
        L.inv[p] = pair_index.at({ginv, conj});
        for (std::size_t q = 0; q < n; ++q) {
            // (g', ghg^-1) after (g, h) is (g' g, h)
            const auto [g2, h2] = pairs[q];
            if (h2 != conj) continue;
            L.mul[q * n + p] = pair_index.at({G.compose(g2, g), h});
        }
    }
    return L;
}

FiniteGroupoid pullback_groupoid(const FiniteGroupoid& G, const std::vector<int>& f)
{
    const int Y = static_cast<int>(f.size());
    for (int v : f)
        if (v < 0 || v >= G.objects) throw std::invalid_argument("pullback map leaves the object set");
    struct Arrow {
        int y, z, g;
    };
    std::vector<Arrow> arrows;
    std::map<std::tuple<int, int, int>, int> index;
    std::vector<int> src, tgt;
    for (int y = 0; y < Y; ++y)
        for (int z = 0; z < Y; ++z)
            for (int g = 0; g < G.arrows(); ++g) {
                if (G.tgt[static_cast<std::size_t>(g)] != f[static_cast<std::size_t>(y)] ||
                    G.src[static_cast<std::size_t>(g)] != f[static_cast<std::size_t>(z)])
                    continue;
                index.emplace(std::make_tuple(y, z, g), static_cast<int>(arrows.size()));
                arrows.push_back({y, z, g});
                src.push_back(z);
                tgt.push_back(y);
            }
    auto P = with_tables(Y, src, tgt);
    const std::size_t n = arrows.size();
    for (int y = 0; y < Y; ++y)
        P.unit[static_cast<std::size_t>(y)] = index.at({y, y, G.unit[static_cast<std::size_t>(f[static_cast<std::size_t>(y)])]});
    for (std::size_t a = 0; a < n; ++a) {
        const auto& A = arrows[a];
        P.inv[a] = index.at({A.z, A.y, G.inv[static_cast<std::size_t>(A.g)]});
        for (std::size_t b = 0; b < n; ++b) {
            const auto& B = arrows[b];
            if (B.y != A.z) continue;
            P.mul[a * n + b] = index.at({A.y, B.z, G.compose(A.g, B.g)});
        }
    }
    return P;
}

std::string to_string(MoritaResult::Verdict v)
{
    switch (v) {
    case MoritaResult::Verdict::NotSurjective: return "not_surjective";
    case MoritaResult::Verdict::NotIsomorphic: return "not_isomorphic";
    case MoritaResult::Verdict::MoritaEquivalent: return "morita_equivalent";
    case MoritaResult::Verdict::Undecided: return "undecided";
    }
    return {};
}

namespace {

/// Isotropy group at x as a table, with the arrow behind each element.
struct LocalGroup {
    GroupTable table;
    std::vector<int> arrows;
};

LocalGroup local_group(const FiniteGroupoid& G, int x)
{
    LocalGroup out;
    out.arrows = G.isotropy(x);
    // Put the unit first.
    const int u = G.unit[static_cast<std::size_t>(x)];
    std::iter_swap(out.arrows.begin(), std::find(out.arrows.begin(), out.arrows.end(), u));
    std::map<int, int> index;
    for (std::size_t i = 0; i < out.arrows.size(); ++i) index.emplace(out.arrows[i], static_cast<int>(i));
    const int n = static_cast<int>(out.arrows.size());
    out.table.order = n;
    out.table.mul.resize(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out.table.mul[static_cast<std::size_t>(a * n + b)] =
                index.at(G.compose(out.arrows[static_cast<std::size_t>(a)], out.arrows[static_cast<std::size_t>(b)]));
    return out;
}

int element_order(const GroupTable& t, int g)
{
    int k = 1;
    for (int p = g; p != 0; p = t.product(p, g)) ++k;
    return k;
}

/// Group isomorphism by backtracking over images of a greedy generating set.
std::optional<std::vector<int>> group_isomorphism(const GroupTable& A, const GroupTable& B, std::size_t& nodes,
                                                  std::size_t budget, bool& exhausted)
{
    if (A.order != B.order) return std::nullopt;
    std::vector<int> ordA(static_cast<std::size_t>(A.order)), ordB(static_cast<std::size_t>(B.order));
    for (int g = 0; g < A.order; ++g) ordA[static_cast<std::size_t>(g)] = element_order(A, g);
    for (int g = 0; g < B.order; ++g) ordB[static_cast<std::size_t>(g)] = element_order(B, g);
    {
        auto a = ordA, b = ordB;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }

    std::vector<int> gens;
    std::vector<bool> reached(static_cast<std::size_t>(A.order), false);
    reached[0] = true;
    auto close = [&](std::vector<bool>& in, const std::vector<int>& gs) {
        std::vector<int> queue;
        for (int x = 0; x < A.order; ++x)
            if (in[static_cast<std::size_t>(x)]) queue.push_back(x);
        while (!queue.empty()) {
            int x = queue.back();
            queue.pop_back();
            for (int g : gs) {
                int y = A.product(x, g);
                if (!in[static_cast<std::size_t>(y)]) {
                    in[static_cast<std::size_t>(y)] = true;
                    queue.push_back(y);
                }
            }
        }
    };
    for (int g = 1; g < A.order; ++g)
        if (!reached[static_cast<std::size_t>(g)]) {
            gens.push_back(g);
            close(reached, gens);
        }

    std::vector<int> images;
    std::vector<int> phi;
    // Extends phi along right multiplication by the assigned generators;
    // false on a conflict or a collision.
    auto consistent = [&]() {
        phi.assign(static_cast<std::size_t>(A.order), -1);
        std::vector<bool> used(static_cast<std::size_t>(B.order), false);
        phi[0] = 0;
        used[0] = true;
        std::vector<int> queue{0};
        while (!queue.empty()) {
            const int x = queue.back();
            queue.pop_back();
            for (std::size_t i = 0; i < images.size(); ++i) {
                const int y = A.product(x, gens[i]);
                const int img = B.product(phi[static_cast<std::size_t>(x)], images[i]);
                if (phi[static_cast<std::size_t>(y)] == -1) {
                    if (used[static_cast<std::size_t>(img)]) return false;
                    phi[static_cast<std::size_t>(y)] = img;
                    used[static_cast<std::size_t>(img)] = true;
                    queue.push_back(y);
                } else if (phi[static_cast<std::size_t>(y)] != img) {
                    return false;
                }
            }
        }
        return true;
    };
    std::function<bool()> search = [&]() {
        if (images.size() == gens.size()) return consistent();
        const int g = gens[images.size()];
        for (int h = 0; h < B.order; ++h) {
            if (ordB[static_cast<std::size_t>(h)] != ordA[static_cast<std::size_t>(g)]) continue;
            if (++nodes > budget) {
                exhausted = true;
                return false;
            }
            images.push_back(h);
            if (consistent() && search()) return true;
            images.pop_back();
            if (exhausted) return false;
        }
        return false;
    };
    if (!search()) return std::nullopt;
    return phi;
}

}  // namespace

std::optional<GroupoidMorphism> find_isomorphism(const FiniteGroupoid& A, const FiniteGroupoid& B, std::size_t budget,
                                                 bool* exhausted)
{
    bool out_of_budget = false;
    if (exhausted) *exhausted = false;
    if (A.objects != B.objects || A.arrows() != B.arrows()) return std::nullopt;

    struct Orbit {
        std::vector<int> objects;
        LocalGroup group;
    };
    auto collect = [](const FiniteGroupoid& G) {
        const auto labels = G.orbits();
        std::vector<Orbit> orbits(static_cast<std::size_t>(G.orbit_count()));
        for (int x = 0; x < G.objects; ++x) orbits[static_cast<std::size_t>(labels[static_cast<std::size_t>(x)])].objects.push_back(x);
        for (auto& o : orbits) o.group = local_group(G, o.objects.front());
        return orbits;
    };
    const auto oa = collect(A);
    auto ob = collect(B);
    if (oa.size() != ob.size()) return std::nullopt;

    GroupoidMorphism f;
    f.object_map.assign(static_cast<std::size_t>(A.objects), -1);
    f.arrow_map.assign(static_cast<std::size_t>(A.arrows()), -1);
    std::vector<bool> used(ob.size(), false);
    std::size_t nodes = 0;

    // Arrow from the base object of an orbit to x.
    auto from_base = [](const FiniteGroupoid& G, int base, int x) {
        for (int a = 0; a < G.arrows(); ++a)
            if (G.src[static_cast<std::size_t>(a)] == base && G.tgt[static_cast<std::size_t>(a)] == x) return a;
        throw std::logic_error("orbit is not connected");
    };

    for (const auto& orbit : oa) {
        // Group isomorphism is an equivalence relation, so a greedy match of
        // orbits never has to be undone.
        std::optional<std::vector<int>> phi;
        std::size_t match = ob.size();
        for (std::size_t j = 0; j < ob.size() && !phi; ++j) {
            if (used[j] || ob[j].objects.size() != orbit.objects.size()) continue;
            phi = group_isomorphism(orbit.group.table, ob[j].group.table, nodes, budget, out_of_budget);
            if (out_of_budget) {
                if (exhausted) *exhausted = true;
                return std::nullopt;
            }
            if (phi) match = j;
        }
        if (!phi) return std::nullopt;
        used[match] = true;
        const auto& target = ob[match];
        const int base_a = orbit.objects.front();
        const int base_b = target.objects.front();
        std::map<int, int> pos_a, pos_b;
        for (std::size_t i = 0; i < orbit.objects.size(); ++i) {
            f.object_map[static_cast<std::size_t>(orbit.objects[i])] = target.objects[i];
            pos_a.emplace(orbit.objects[i], static_cast<int>(i));
        }
        std::map<int, int> local_a;
        for (std::size_t i = 0; i < orbit.group.arrows.size(); ++i) local_a.emplace(orbit.group.arrows[i], static_cast<int>(i));
        std::vector<int> tau_a, tau_b;
        for (std::size_t i = 0; i < orbit.objects.size(); ++i) {
            tau_a.push_back(from_base(A, base_a, orbit.objects[i]));
            tau_b.push_back(from_base(B, base_b, target.objects[i]));
        }
        for (int a = 0; a < A.arrows(); ++a) {
            const auto it = pos_a.find(A.src[static_cast<std::size_t>(a)]);
            if (it == pos_a.end()) continue;
            const auto x = static_cast<std::size_t>(it->second);
            const auto y = static_cast<std::size_t>(pos_a.at(A.tgt[static_cast<std::size_t>(a)]));
            const int k = A.compose(A.inv[static_cast<std::size_t>(tau_a[y])], A.compose(a, tau_a[x]));
            const int k_image = target.group.arrows[static_cast<std::size_t>((*phi)[static_cast<std::size_t>(local_a.at(k))])];
            f.arrow_map[static_cast<std::size_t>(a)] =
                B.compose(tau_b[y], B.compose(k_image, B.inv[static_cast<std::size_t>(tau_b[x])]));
        }
    }
    // Certify the witness.
    if (!validate_morphism(A, B, f).valid()) return std::nullopt;
    auto arrows = f.arrow_map;
    std::sort(arrows.begin(), arrows.end());
    if (std::adjacent_find(arrows.begin(), arrows.end()) != arrows.end()) return std::nullopt;
    return f;
}

MoritaResult morita_check(const FiniteGroupoid& G, const FiniteGroupoid& H, const std::vector<int>& f,
                          const std::vector<int>& g, std::size_t budget)
{
    MoritaResult out;
    if (f.size() != g.size()) throw std::invalid_argument("maps must share the domain Y");
    auto surjective = [](const std::vector<int>& m, int objects) {
        std::vector<bool> hit(static_cast<std::size_t>(objects), false);
        for (int v : m) {
            if (v < 0 || v >= objects) throw std::invalid_argument("map leaves the object set");
            hit[static_cast<std::size_t>(v)] = true;
        }
        return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    };
    if (!surjective(f, G.objects)) {
        out.verdict = MoritaResult::Verdict::NotSurjective;
        out.reason = "first map misses an object";
        return out;
    }
    if (!surjective(g, H.objects)) {
        out.verdict = MoritaResult::Verdict::NotSurjective;
        out.reason = "second map misses an object";
        return out;
    }
    const auto GY = pullback_groupoid(G, f);
    const auto HY = pullback_groupoid(H, g);
    if (GY.arrows() != HY.arrows()) {
        out.verdict = MoritaResult::Verdict::NotIsomorphic;
        out.reason = "arrow counts differ (" + std::to_string(GY.arrows()) + " vs " + std::to_string(HY.arrows()) + ")";
        return out;
    }
    if (GY.orbit_count() != HY.orbit_count()) {
        out.verdict = MoritaResult::Verdict::NotIsomorphic;
        out.reason = "orbit counts differ";
        return out;
    }
    bool exhausted = false;
    out.witness = find_isomorphism(GY, HY, budget, &exhausted);
    if (out.witness) {
        out.verdict = MoritaResult::Verdict::MoritaEquivalent;
        out.reason = "explicit isomorphism of the pullbacks";
    } else if (exhausted) {
        out.verdict = MoritaResult::Verdict::Undecided;
        out.reason = "search budget exhausted";
    } else {
        out.verdict = MoritaResult::Verdict::NotIsomorphic;
        out.reason = "orbits do not match in size and isotropy group";
    }
    return out;
}

WeakEquivalenceResult weak_equivalence_check(const FiniteGroupoid& K, const FiniteGroupoid& G,
                                             const GroupoidMorphism& f)
{
    WeakEquivalenceResult out;
    auto report = validate_morphism(K, G, f);
    if (!report.valid()) {
        out.valid_morphism = false;
        out.notes = report.violations;
        return out;
    }
    std::vector<bool> reached(static_cast<std::size_t>(G.objects), false);
    for (int x = 0; x < K.objects; ++x)
        for (int g = 0; g < G.arrows(); ++g)
            if (G.src[static_cast<std::size_t>(g)] == f.object_map[static_cast<std::size_t>(x)])
                reached[static_cast<std::size_t>(G.tgt[static_cast<std::size_t>(g)])] = true;
    out.essentially_surjective = std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
    if (!out.essentially_surjective) out.notes.push_back("some object is not isomorphic to an image object");

    // K_1 -> {(g, x, y) : s(g) = f(x), t(g) = f(y)} must be a bijection.
    std::map<std::tuple<int, int, int>, int> hits;
    bool injective = true;
    for (int k = 0; k < K.arrows(); ++k) {
        auto key = std::make_tuple(f.arrow_map[static_cast<std::size_t>(k)], K.src[static_cast<std::size_t>(k)],
                                   K.tgt[static_cast<std::size_t>(k)]);
        if (!hits.emplace(key, k).second) injective = false;
    }
    std::size_t expected = 0;
    for (int x = 0; x < K.objects; ++x)
        for (int y = 0; y < K.objects; ++y)
            for (int g = 0; g < G.arrows(); ++g)
                if (G.src[static_cast<std::size_t>(g)] == f.object_map[static_cast<std::size_t>(x)] &&
                    G.tgt[static_cast<std::size_t>(g)] == f.object_map[static_cast<std::size_t>(y)])
                    ++expected;
    out.fully_faithful = injective && hits.size() == expected;
    if (!injective) out.notes.push_back("two arrows with the same endpoints have the same image");
    else if (!out.fully_faithful) out.notes.push_back("some arrow between image objects has no preimage");
    return out;
}

GroupoidMorphism compose(const GroupoidMorphism& second, const GroupoidMorphism& first)
{
    GroupoidMorphism out;
    for (int x : first.object_map) out.object_map.push_back(second.object_map[static_cast<std::size_t>(x)]);
    for (int a : first.arrow_map) out.arrow_map.push_back(second.arrow_map[static_cast<std::size_t>(a)]);
    return out;
}

std::pair<FiniteGroupoid, GroupoidMorphism> full_subgroupoid(const FiniteGroupoid& G, const std::vector<int>& objects)
{
    std::map<int, int> object_index;
    for (std::size_t i = 0; i < objects.size(); ++i) object_index.emplace(objects[i], static_cast<int>(i));
    std::vector<int> kept;
    std::map<int, int> arrow_index;
    std::vector<int> src, tgt;
    for (int a = 0; a < G.arrows(); ++a) {
        auto s = object_index.find(G.src[static_cast<std::size_t>(a)]);
        auto t = object_index.find(G.tgt[static_cast<std::size_t>(a)]);
        if (s == object_index.end() || t == object_index.end()) continue;
        arrow_index.emplace(a, static_cast<int>(kept.size()));
        kept.push_back(a);
        src.push_back(s->second);
        tgt.push_back(t->second);
    }
    auto S = with_tables(static_cast<int>(objects.size()), src, tgt);
    const std::size_t n = kept.size();
    for (std::size_t i = 0; i < objects.size(); ++i) S.unit[i] = arrow_index.at(G.unit[static_cast<std::size_t>(objects[i])]);
    for (std::size_t a = 0; a < n; ++a) {
        S.inv[a] = arrow_index.at(G.inv[static_cast<std::size_t>(kept[a])]);
        for (std::size_t b = 0; b < n; ++b) {
            const int ab = G.compose(kept[a], kept[b]);
            if (ab >= 0) S.mul[a * n + b] = arrow_index.at(ab);
        }
    }
    GroupoidMorphism inclusion{objects, kept};
    return {std::move(S), std::move(inclusion)};
}

}  // namespace strata
