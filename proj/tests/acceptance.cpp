// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include "examples.hpp"
#include "forms_support.hpp"
#include "oracles/loop_oracle.hpp"
#include "oracles/regions.hpp"
#include "strata/arrangement.hpp"
#include "strata/forms.hpp"
#include "strata/groupoid.hpp"
#include "strata/io.hpp"
#include "strata/strata.hpp"
#include "strata/validate.hpp"
#include "strata/whitney.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace strata;
using namespace strata::testing;

namespace {

// Pinned budgets and tolerances.
constexpr std::size_t kOracleSamples = 10000;
constexpr double kOracleSeconds = 60;
constexpr int kRandomActions = 50;
constexpr std::size_t kRandomGroupCap = 48;
constexpr std::size_t kRandomMaxDim = 6;
constexpr int kRandomForms = 500;
constexpr double kFormsSeconds = 30;
constexpr int kCohomologyDegree = 5;
constexpr int kGroupoidTriples = 20;
constexpr int kConjugations = 100;
constexpr double kFlatAngle = 1e-12;
constexpr double kQuotientTolerance = 1e-6;
constexpr std::size_t kMaxHyperplanes = 8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail)
{
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

struct Example {
    std::string name;
    LinearAction action;
    std::size_t strata;
};

std::vector<Example> shipped()
{
    return {{"Z/2 line", z2_line(), 3},
            {"Z/4 plane", z4_plane(), 5},
            {"S3 standard", s3_standard(), 6},
            {"circle (1)", circle_1(), 3},
            {"circle (1,2)", circle_12(), 7}};
}

/// Oracle key of a sampled point, computed without the library's strata.
std::string oracle_key(const LinearAction& action, const LoopPoint& p)
{
    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        const auto k = oracle::classify(*G, std::get<int>(p.group), p.x);
        std::string key;
        for (int m : k.first) key += std::to_string(m) + ",";
        return key + "|" + std::to_string(k.second);
    }
    const auto& C = std::get<CircleWeightAction>(action);
    return oracle::classify(C.weights(), std::get<Angle>(p.group).value, C.frame().rows() ? C.frame().inverse() * p.x : p.x);
}

/// The same key read off a stratum's own labels.
std::string stratum_key(const LinearAction& action, const Stratum& s)
{
    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        const auto k = oracle::canonical_pair(*G, s.isotropy.subgroup.members, std::get<int>(s.group_part));
        std::string key;
        for (int m : k.first) key += std::to_string(m) + ",";
        return key + "|" + std::to_string(k.second);
    }
    const auto& cell = std::get<CircleCell>(s.group_part);
    const long m = s.isotropy.circle->order;
    if (m != 0) return "Z/" + std::to_string(m) + "@" + cell.lo.get_str();
    switch (cell.kind) {
    case CircleCell::Kind::Point: return "S1@" + cell.lo.get_str();
    case CircleCell::Kind::Arc: return "S1@after" + cell.lo.get_str();
    case CircleCell::Kind::Full: return "S1@circle";
    }
    return {};
}

// ---------------------------------------------------------------------------

void criterion_1_and_2()
{
    const auto start = Clock::now();
    std::size_t mismatches = 0, total = 0;
    std::map<std::string, std::size_t> oracle_counts;
    SampleRng rng(20240101);
    for (const auto& ex : shipped()) {
        const auto r = loop_strata(ex.action);
        std::map<std::string, int> label_to_stratum;
        for (const auto& s : r.strata) label_to_stratum[stratum_key(ex.action, s)] = s.id;
        if (label_to_stratum.size() != r.strata.size()) ++mismatches;  // labels must be distinct
        std::set<std::string> keys;
        for (const auto& p : sample_loop_points(ex.action, kOracleSamples, rng)) {
            ++total;
            int hits = 0, hit = -1;
            for (const auto& s : r.strata)
                if (stratum_contains(s, p, ex.action)) {
                    ++hits;
                    hit = s.id;
                }
            const std::string key = oracle_key(ex.action, p);
            keys.insert(key);
            const auto it = label_to_stratum.find(key);
            if (hits != 1 || it == label_to_stratum.end() || it->second != hit) ++mismatches;
        }
        oracle_counts[ex.name] = keys.size();
    }
    const double secs = seconds_since(start);
    std::ostringstream d;
    d << total << " samples, " << mismatches << " mismatches, " << secs << " s (limit " << kOracleSeconds << " s)";
    report(1, mismatches == 0 && secs < kOracleSeconds, "oracle equivalence of strata", d.str());

    // Criterion 2: counts agree with the sampled oracle and the expected values.
    bool ok = true;
    std::ostringstream c;
    for (const auto& ex : shipped()) {
        const auto r = loop_strata(ex.action);
        ok = ok && r.strata.size() == ex.strata && oracle_counts[ex.name] == ex.strata;
        c << ex.name << " " << r.strata.size() << " (oracle " << oracle_counts[ex.name] << "); ";
    }
    const auto s3 = loop_strata(s3_standard());
    const int max_depth = *std::max_element(s3.depth.begin(), s3.depth.end());
    const Stratum& generic = *std::find_if(s3.strata.begin(), s3.strata.end(), [](const Stratum& s) {
        return std::get<int>(s.group_part) == 0 && s.isotropy.subgroup.order() == 1;
    });
    // Chambers of the S3 reflection arrangement, by sign-vector enumeration.
    const FiniteMatrixGroup G = s3_standard();
    std::vector<RationalVector> normals;
    for (int g = 1; g < static_cast<int>(G.order()); ++g) {
        const auto fixed = fixed_subspace(G, g);
        if (fixed.dim() == 1) normals.push_back(fixed.annihilator().basis().front());
    }
    const long chambers = oracle::brute_force_regions(normals, 2);
    ok = ok && max_depth == 2 && generic.component_count == 6 && chambers == 6;
    c << "S3 max depth " << max_depth << ", generic components " << generic.component_count.value_or(-1)
      << " (oracle " << chambers << ")";
    report(2, ok, "stratum counts and depths", c.str());
}

/// Random finite group of order <= 48 on Q^n, n <= 6: block-diagonal signed
/// permutations and rotations, sometimes in a random basis.
std::optional<FiniteMatrixGroup> random_group(RationalGen& gen)
{
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, static_cast<long>(kRandomMaxDim)));
    const int count = static_cast<int>(gen.integer(1, 2));
    std::vector<RationalMatrix> gens;
    for (int k = 0; k < count; ++k) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen.engine());
        RationalMatrix M(n, n);
        for (std::size_t i = 0; i < n; ++i) M(i, perm[i]) = gen.integer(0, 2) == 0 ? -1 : 1;
        if (n >= 2 && gen.integer(0, 3) == 0) {
            // Order-3 rotation on the first two coordinates.
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < n; ++j) M(i, j) = 0;
            for (std::size_t j = 2; j < n; ++j) M(j, 0) = M(j, 1) = 0;
            M(0, 0) = 0;
            M(0, 1) = -1;
            M(1, 0) = 1;
            M(1, 1) = -1;
        }
        if (!M.is_invertible()) continue;
        gens.push_back(M);
    }
    if (gens.empty()) return std::nullopt;
    try {
        FiniteMatrixGroup G = FiniteMatrixGroup::close(n, gens, kRandomGroupCap);
        if (gen.integer(0, 1) == 1) G = G.change_basis(gen.invertible(n));
        return G;
    } catch (const CapExceeded&) {
        return std::nullopt;
    }
}

void criterion_3()
{
    const auto start = Clock::now();
    ValidationOptions opts;
    opts.points_per_stratum = 3;
    opts.seed = 3;
    std::size_t violations = 0, actions = 0, pairs = 0, max_order = 0, max_strata = 0;
    std::string first;
    auto run = [&](const LinearAction& a) {
        const auto r = loop_strata(a);
        const auto order = check_partial_order(r.closure, r.strata.size());
        const auto frontier = check_frontier(r, r.closure, a, opts);
        ++actions;
        pairs += r.strata.size() * r.strata.size();
        max_strata = std::max(max_strata, r.strata.size());
        for (const auto* c : {&order, &frontier})
            if (!c->passed) {
                violations += c->counterexamples.size();
                if (first.empty()) first = c->counterexamples.front();
            }
    };
    for (const auto& ex : shipped()) run(ex.action);
    RationalGen gen(333);
    int random = 0;
    while (random < kRandomActions) {
        auto G = random_group(gen);
        if (!G || G->order() > kRandomGroupCap) continue;
        max_order = std::max(max_order, G->order());
        run(*G);
        ++random;
    }
    std::ostringstream d;
    d << actions << " actions (" << random << " random, max |G| " << max_order << ", max " << max_strata
      << " strata), " << violations << " violations, " << seconds_since(start) << " s";
    if (!first.empty()) d << "; first: " << first;
    report(3, violations == 0, "frontier axioms", d.str());
}

void criterion_4()
{
    const auto start = Clock::now();
    RationalGen gen(4);
    int nonzero = 0;
    std::map<int, int> by_degree;
    for (int i = 0; i < kRandomForms; ++i) {
        const std::size_t n = static_cast<std::size_t>(gen.integer(1, 5));
        const int k = static_cast<int>(gen.integer(0, static_cast<long>(n)));
        const PolyForm w = random_form(gen, n, k, 6);
        ++by_degree[k];
        if (!homotopy_identity_check(w).is_zero()) ++nonzero;
    }
    const double secs = seconds_since(start);
    std::ostringstream d;
    d << kRandomForms << " forms (form degrees";
    for (const auto& [k, c] : by_degree) d << " " << k << ":" << c;
    d << "), " << nonzero << " nonzero residuals, " << secs << " s (limit " << kFormsSeconds << " s)";
    report(4, nonzero == 0 && secs < kFormsSeconds && by_degree.size() == 6, "homotopy identity", d.str());
}

void criterion_5()
{
    bool ok = true;
    std::ostringstream d;
    for (const auto& ex : shipped()) {
        const auto c = basic_cohomology(ex.action, kCohomologyDegree);
        bool acyclic = c.betti.at(0) == 1;
        for (std::size_t k = 1; k < c.betti.size(); ++k) acyclic = acyclic && c.betti[k] == 0;
        ok = ok && acyclic;
        d << ex.name << " (";
        for (std::size_t k = 0; k < c.betti.size(); ++k) d << (k ? "," : "") << c.betti[k] << (c.truncated[k] ? "*" : "");
        d << ") ";
    }
    d << "at D = " << kCohomologyDegree << ", * = truncated degree";
    report(5, ok, "basic cohomology acyclicity", d.str());
}

void criterion_6()
{
    std::mt19937_64 rng(66);
    int bijections = 0, inclusions = 0, triples = 0;
    bool ok = true;
    std::string first;
    while (triples < kGroupoidTriples) {
        // A permutation group acting on up to 6 points, as a translation,
        // one-object or pair groupoid.
        io::GroupoidDef def;
        const int points = static_cast<int>(rng() % 6) + 1;
        const int kind = static_cast<int>(rng() % 4);
        if (kind == 3) {
            def.pair = points;
        } else {
            const int gens = static_cast<int>(rng() % 2) + 1;
            for (int g = 0; g < gens; ++g) {
                std::vector<int> p(static_cast<std::size_t>(points));
                std::iota(p.begin(), p.end(), 0);
                std::shuffle(p.begin(), p.end(), rng);
                if (rng() % 2) {
                    // Keep some points fixed so that several orbits appear.
                    std::vector<int> q(p.size());
                    std::iota(q.begin(), q.end(), 0);
                    const std::size_t moved = rng() % p.size() + 1;
                    std::vector<int> idx(q.begin(), q.begin() + static_cast<long>(moved));
                    std::shuffle(idx.begin(), idx.end(), rng);
                    for (std::size_t i = 0; i < moved; ++i) q[i] = idx[i];
                    p = q;
                }
                def.perms.push_back(p);
            }
            def.acting_on = kind == 0 ? "points" : kind == 1 ? "self" : "single";
        }
        FiniteGroupoid G;
        try {
            G = def.build(48);
        } catch (const CapExceeded&) {
            continue;
        }
        if (G.objects > 24) continue;
        ++triples;

        // f: Y -> G_0 surjective, with repeats, shuffled.
        std::vector<int> f(static_cast<std::size_t>(G.objects));
        std::iota(f.begin(), f.end(), 0);
        const int extra = static_cast<int>(rng() % 4);
        for (int e = 0; e < extra; ++e) f.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(G.objects)));
        std::shuffle(f.begin(), f.end(), rng);
        const FiniteGroupoid GY = pullback_groupoid(G, f);

        // Orbit map y -> orbit of f(y): well defined, injective, surjective.
        const auto og = G.orbits(), oy = GY.orbits();
        std::map<int, int> induced;
        bool good = validate(GY).valid();
        for (std::size_t y = 0; y < f.size(); ++y) {
            const int target = og[static_cast<std::size_t>(f[y])];
            auto [it, fresh] = induced.emplace(oy[y], target);
            if (!fresh && it->second != target) good = false;
        }
        std::set<int> image;
        for (const auto& [o, t] : induced) image.insert(t);
        good = good && image.size() == induced.size() && static_cast<int>(image.size()) == G.orbit_count() &&
               static_cast<int>(induced.size()) == GY.orbit_count();
        if (good) ++bijections;
        else if (first.empty()) first = "orbit bijection fails for triple " + std::to_string(triples);

        // One object per orbit, for both G and G[Y].
        for (const FiniteGroupoid* H : std::array<const FiniteGroupoid*, 2>{&G, &GY}) {
            const auto orbits = H->orbits();
            std::vector<int> reps;
            std::set<int> seen;
            for (int x = 0; x < H->objects; ++x)
                if (seen.insert(orbits[static_cast<std::size_t>(x)]).second) reps.push_back(x);
            const auto [sub, inclusion] = full_subgroupoid(*H, reps);
            if (weak_equivalence_check(sub, *H, inclusion).holds()) ++inclusions;
            else if (first.empty()) first = "inclusion rejected for triple " + std::to_string(triples);
        }
        ok = ok && good;
    }
    ok = ok && bijections == kGroupoidTriples && inclusions == 2 * kGroupoidTriples;
    std::ostringstream d;
    d << triples << " triples, " << bijections << " orbit bijections, " << inclusions << "/" << 2 * triples
      << " one-object-per-orbit inclusions accepted";
    if (!first.empty()) d << "; first: " << first;
    report(6, ok, "Morita/orbit invariance", d.str());
}

/// Stratum key independent of coordinates: group part label plus isotropy
/// label (finite tables are shared by conjugated groups).
std::vector<std::string> keys(const StratificationResult& r)
{
    std::vector<std::string> out;
    for (const auto& s : r.strata) out.push_back(s.group_label() + "/" + s.isotropy.label());
    return out;
}

bool same_stratification(const StratificationResult& a, const StratificationResult& b, const LinearAction& bact)
{
    if (a.strata.size() != b.strata.size()) return false;
    const auto ka = keys(a), kb = keys(b);
    std::map<std::string, int> index_b;
    for (std::size_t i = 0; i < kb.size(); ++i) index_b[kb[i]] = static_cast<int>(i);
    if (index_b.size() != kb.size()) return false;
    std::vector<int> phi(ka.size());
    for (std::size_t i = 0; i < ka.size(); ++i) {
        const auto it = index_b.find(ka[i]);
        if (it == index_b.end()) return false;
        phi[i] = it->second;
    }
    std::set<std::pair<int, int>> rb(b.closure.relation.begin(), b.closure.relation.end());
    std::set<std::pair<int, int>> mapped;
    for (const auto& [p, q] : a.closure.relation)
        mapped.emplace(phi[static_cast<std::size_t>(p)], phi[static_cast<std::size_t>(q)]);
    if (mapped != rb) return false;
    for (std::size_t i = 0; i < ka.size(); ++i) {
        const Stratum& sa = a.strata[i];
        const Stratum& sb = b.strata[static_cast<std::size_t>(phi[i])];
        if (sa.dim != sb.dim || sa.component_count != sb.component_count) return false;
        if (a.depth[i] != b.depth[static_cast<std::size_t>(phi[i])]) return false;
        if (!stratum_contains(sb, sb.witness, bact)) return false;
    }
    return true;
}

void criterion_7()
{
    const auto start = Clock::now();
    RationalGen gen(77);
    int agreed = 0, total = 0;
    for (const auto& ex : shipped()) {
        const auto base = loop_strata(ex.action);
        const std::size_t n = ambient_dim(ex.action);
        for (int t = 0; t < kConjugations; ++t) {
            const RationalMatrix P = gen.invertible(n);
            const LinearAction conj = std::visit([&](const auto& a) { return LinearAction(a.change_basis(P)); },
                                                 ex.action);
            ++total;
            if (same_stratification(base, loop_strata(conj), conj)) ++agreed;
        }
    }
    std::ostringstream d;
    d << agreed << "/" << total << " conjugated representations poset-isomorphic with equal dims and component counts, "
      << seconds_since(start) << " s";
    report(7, agreed == total, "base-change equivariance", d.str());
}

void criterion_8()
{
    double worst = 0;
    int probes = 0, failed = 0;
    bool reproducible = true;
    for (const auto& ex : shipped()) {
        const auto r = loop_strata(ex.action);
        for (const auto& [p, q] : r.closure.relation) {
            ProbeConfig c;
            c.base_stratum = p;
            c.upper_stratum = q;
            c.seed = 8;
            const auto rep = probe_whitney_b(r, ex.action, c);
            ++probes;
            for (const auto& s : rep.scales) {
                worst = std::max(worst, s.max_angle);
                if (s.samples == 0) ++failed;
            }
            if (!rep.passed) ++failed;
            c.threads = 1;
            reproducible = reproducible && probe_whitney_b(r, ex.action, c).to_text() == rep.to_text();
        }
    }

    struct Quotient {
        std::string name;
        LinearAction action;
        std::vector<std::string> polys;
    };
    const std::vector<Quotient> quotients = {
        {"Z/2 line, x^2", z2_line(), {"x^2"}},
        {"-1 on the plane, (x^2, xy, y^2)", FiniteMatrixGroup::close(2, {mat(2, 2, {-1, 0, 0, -1})}),
         {"x^2", "x y", "y^2"}}};
    bool quotients_ok = true;
    std::ostringstream qd;
    for (const auto& qt : quotients) {
        const auto r = loop_strata(qt.action);
        InvariantMap inv;
        for (const auto& p : qt.polys) inv.polynomials.push_back(PolyForm::parse(p, ambient_dim(qt.action)));
        int base = -1, upper = -1;
        for (const auto& s : r.strata) {
            if (std::get<int>(s.group_part) != 0) continue;
            if (s.isotropy.subgroup.order() == 2) base = s.id;
            if (s.isotropy.subgroup.order() == 1) upper = s.id;
        }
        ProbeConfig c;
        c.base_stratum = base;
        c.upper_stratum = upper;
        c.angle_tolerance = kQuotientTolerance;
        c.seed = 88;
        const auto rep = probe_quotient_whitney(r, qt.action, inv, c);
        const auto again = probe_quotient_whitney(r, qt.action, inv, c);
        quotients_ok = quotients_ok && rep.passed && rep.to_text() == again.to_text();
        qd << "; " << qt.name << ": finest " << rep.finest_angle() << " " << rep.verdict();
    }
    std::ostringstream d;
    d << probes << " incident pairs, worst angle " << worst << " (limit " << kFlatAngle << ")"
      << (reproducible ? ", reproducible" : ", NOT reproducible") << qd.str();
    report(8, worst <= kFlatAngle && failed == 0 && reproducible && quotients_ok, "Whitney probe", d.str());
}

void criterion_9()
{
    const auto start = Clock::now();
    long checked = 0, mismatches = 0, pruning_mismatches = 0;
    std::string first;
    auto compare = [&](const std::vector<RationalVector>& normals, std::size_t d) {
        std::vector<RationalSubspace> removed;
        for (const auto& a : normals) removed.push_back(RationalSubspace::span(d, {a}).annihilator());
        const auto z = count_regions(RationalSubspace::full(d), removed);
        const long b = oracle::brute_force_regions_pruned(normals, d);
        ++checked;
        // The unpruned enumeration checks the pruning itself, where it is cheap.
        if (d <= 3 && oracle::brute_force_regions(normals, d) != b) ++pruning_mismatches;
        if (!z || *z != b) {
            ++mismatches;
            if (first.empty()) first = "d=" + std::to_string(d) + ", m=" + std::to_string(normals.size());
        }
    };
    // Primitive normals with entries in {-1, 0, 1}, one per line through 0
    // (first nonzero entry positive).
    auto primitive = [](std::size_t d) {
        std::vector<RationalVector> out;
        std::vector<long> e(d, -1);
        for (;;) {
            auto first_nz = std::find_if(e.begin(), e.end(), [](long v) { return v != 0; });
            if (first_nz != e.end() && *first_nz > 0) {
                RationalVector v;
                for (long x : e) v.push_back(Rational(x));
                out.push_back(v);
            }
            std::size_t i = 0;
            while (i < d && e[i] == 1) e[i++] = -1;
            if (i == d) break;
            ++e[i];
        }
        return out;
    };
    auto all_subsets = [&](const std::vector<RationalVector>& pool, std::size_t d) {
        std::vector<RationalVector> chosen;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            compare(chosen, d);
            if (chosen.size() == kMaxHyperplanes) return;
            for (std::size_t i = from; i < pool.size(); ++i) {
                chosen.push_back(pool[i]);
                rec(i + 1);
                chosen.pop_back();
            }
        };
        rec(0);
    };
    for (std::size_t d = 1; d <= 3; ++d) all_subsets(primitive(d), d);
    // Dimension 4: the coordinate hyperplanes and the six x_i = x_j walls of
    // the braid arrangement, in every subset of size <= 8.
    std::vector<RationalVector> pool4;
    for (std::size_t i = 0; i < 4; ++i) {
        RationalVector v(4);
        v[i] = 1;
        pool4.push_back(v);
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            RationalVector v(4);
            v[i] = 1;
            v[j] = -1;
            pool4.push_back(v);
        }
    all_subsets(pool4, 4);
    std::ostringstream d;
    d << checked << " arrangements (all subsets of size <= " << kMaxHyperplanes
      << " of the {-1,0,1} normals in dim 1-3 and of 10 coordinate and braid normals in dim 4), " << mismatches
      << " mismatches, " << pruning_mismatches << " pruned/unpruned oracle disagreements, " << seconds_since(start)
      << " s";
    if (!first.empty()) d << "; first: " << first;
    report(9, mismatches == 0 && pruning_mismatches == 0, "Zaslavsky vs sign-vector enumeration", d.str());
}

}  // namespace

int main()
{
    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    return failures;
}
