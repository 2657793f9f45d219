#include "doctest.h"
#include "oracles/groupoid_oracle.hpp"
#include "strata/groupoid.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace strata;

namespace {

/// Z/2 swapping two points.
FiniteGroupoid free_z2()
{
    return translation_groupoid(GroupTable::cyclic(2), {{0, 1}, {1, 0}});
}

/// S_n acting on {0..n-1}; rows follow GroupTable::symmetric.
std::vector<std::vector<int>> natural_action(int n)
{
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> rows;
    do rows.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return rows;
}

/// Left translation action of a group table on itself.
std::vector<std::vector<int>> regular_action(const GroupTable& t)
{
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(t.order));
    for (int g = 0; g < t.order; ++g)
        for (int x = 0; x < t.order; ++x) rows[static_cast<std::size_t>(g)].push_back(t.product(g, x));
    return rows;
}

std::multiset<std::pair<int, std::size_t>> orbit_signature(const FiniteGroupoid& G)
{
    auto labels = G.orbits();
    std::multiset<std::pair<int, std::size_t>> out;
    for (int o = 0; o < G.orbit_count(); ++o) {
        int size = 0, rep = -1;
        for (int x = 0; x < G.objects; ++x)
            if (labels[static_cast<std::size_t>(x)] == o) {
                ++size;
                if (rep < 0) rep = x;
            }
        out.emplace(size, G.isotropy(rep).size());
    }
    return out;
}

}  // namespace

TEST_CASE("validate")
{
    CHECK(validate(pair_groupoid(3)).valid());
    CHECK(validate(one_object(GroupTable::symmetric(3))).valid());

    auto broken = one_object(GroupTable::cyclic(3));
    // 1 * 1 should be 2; make it 0 and check that a triple is named.
    broken.mul[1 * 3 + 1] = 0;
    auto report = validate(broken);
    CHECK_FALSE(report.valid());
    bool names_triple = false;
    for (const auto& v : report.violations)
        if (v.find("associativity fails for (") != std::string::npos) names_triple = true;
    CHECK(names_triple);
}

TEST_CASE("translation_groupoid")
{
    auto trivial = translation_groupoid(GroupTable::cyclic(2), {{0}, {0}});
    CHECK(trivial.arrows() == 2);
    CHECK(trivial.objects == 1);
    CHECK(validate(trivial).valid());

    auto swap = free_z2();
    CHECK(swap.arrows() == 4);
    CHECK(swap.orbit_count() == 1);
    CHECK(validate(swap).valid());

    auto S3 = GroupTable::symmetric(3);
    auto self = translation_groupoid(S3, regular_action(S3));
    CHECK(validate(self).valid());
    CHECK(self.orbit_count() == 1);
    for (int x = 0; x < 6; ++x) CHECK(self.isotropy(x).size() == 1);
    CHECK(oracle::brute_force_isomorphic(pair_groupoid(2), free_z2()));
    CHECK(find_isomorphism(self, pair_groupoid(6), kDefaultMoritaBudget).has_value());

    CHECK_THROWS_AS(translation_groupoid(GroupTable::cyclic(2), {{0, 1}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(translation_groupoid(GroupTable::cyclic(2), {{1, 0}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("loop_space")
{
    CHECK(loop_space(pair_groupoid(3)).size() == 3);
    CHECK(loop_space(one_object(GroupTable::symmetric(3))).size() == 6);
    auto loops = loop_space(free_z2());
    CHECK(loops.size() == 2);
    CHECK(loops == std::vector<int>{0, 1});
}

TEST_CASE("inertia_groupoid")
{
    auto S3 = inertia_groupoid(one_object(GroupTable::symmetric(3)));
    CHECK(validate(S3).valid());
    CHECK(S3.orbit_count() == 3);

    auto P = inertia_groupoid(pair_groupoid(3));
    CHECK(validate(P).valid());
    CHECK(P.orbit_count() == 1);
    CHECK(find_isomorphism(P, pair_groupoid(3), kDefaultMoritaBudget).has_value());

    auto F = inertia_groupoid(free_z2());
    CHECK(validate(F).valid());
    CHECK(F.orbit_count() == 1);
}

TEST_CASE("pullback_groupoid")
{
    auto G = translation_groupoid(GroupTable::symmetric(3), natural_action(3));
    auto same = pullback_groupoid(G, {0, 1, 2});
    CHECK(validate(same).valid());
    CHECK(oracle::brute_force_isomorphic(pullback_groupoid(free_z2(), {0, 1}), free_z2()));
    CHECK(find_isomorphism(same, G, kDefaultMoritaBudget).has_value());

    auto doubled = pullback_groupoid(G, {0, 1, 2, 0, 1, 2});
    CHECK(doubled.arrows() == 4 * G.arrows());
    CHECK(validate(doubled).valid());

    // Two orbits, and Y sees only one of them.
    auto two = translation_groupoid(GroupTable::cyclic(2), {{0, 1, 2}, {1, 0, 2}});
    auto partial = pullback_groupoid(two, {0, 1});
    CHECK(validate(partial).valid());
    CHECK(two.orbit_count() == 2);
    CHECK(partial.orbit_count() == 1);
}

TEST_CASE("morita_check")
{
    auto Z2 = one_object(GroupTable::cyclic(2));
    auto swap = free_z2();
    // One-object Z/2 has isotropy of order 2 and the free action has trivial
    // isotropy, so their pullbacks cannot be isomorphic.
    auto r = morita_check(Z2, swap, {0, 0}, {0, 1});
    CHECK(r.verdict == MoritaResult::Verdict::NotIsomorphic);
    CHECK_FALSE(oracle::brute_force_isomorphic(pullback_groupoid(Z2, {0, 0}), pullback_groupoid(swap, {0, 1})));

    // The free quotient is a point.
    auto point = one_object(GroupTable::cyclic(1));
    auto q = morita_check(point, swap, {0, 0}, {0, 1});
    REQUIRE(q.verdict == MoritaResult::Verdict::MoritaEquivalent);
    REQUIRE(q.witness);
    CHECK(oracle::brute_force_isomorphic(pullback_groupoid(point, {0, 0}), pullback_groupoid(swap, {0, 1})));
    auto GY = pullback_groupoid(point, {0, 0});
    auto HY = pullback_groupoid(swap, {0, 1});
    CHECK(validate_morphism(GY, HY, *q.witness).valid());

    CHECK(morita_check(point, Z2, {0}, {0}).verdict == MoritaResult::Verdict::NotIsomorphic);
    CHECK(morita_check(point, Z2, {0, 0, 0}, {0, 0, 0}).reason.find("arrow counts") != std::string::npos);
    CHECK(morita_check(point, swap, {0, 0}, {0, 0}).verdict == MoritaResult::Verdict::NotSurjective);

    // A budget of one node cannot finish a nontrivial group search.
    auto S3 = one_object(GroupTable::symmetric(3));
    CHECK(morita_check(S3, S3, {0}, {0}, 1).verdict == MoritaResult::Verdict::Undecided);
    CHECK(morita_check(S3, S3, {0}, {0}).verdict == MoritaResult::Verdict::MoritaEquivalent);
    auto Z6 = one_object(GroupTable::cyclic(6));
    CHECK(morita_check(S3, Z6, {0}, {0}).verdict == MoritaResult::Verdict::NotIsomorphic);
}

TEST_CASE("weak_equivalence_check")
{
    auto G = translation_groupoid(GroupTable::symmetric(3), natural_action(3));
    GroupoidMorphism id;
    for (int x = 0; x < G.objects; ++x) id.object_map.push_back(x);
    for (int a = 0; a < G.arrows(); ++a) id.arrow_map.push_back(a);
    CHECK(weak_equivalence_check(G, G, id).holds());

    auto two = translation_groupoid(GroupTable::cyclic(2), {{0, 1, 2}, {1, 0, 2}});
    auto [sub, inclusion] = full_subgroupoid(two, {0, 2});
    CHECK(validate(sub).valid());
    CHECK(weak_equivalence_check(sub, two, inclusion).holds());

    auto [one, at_zero] = full_subgroupoid(two, {0});
    auto w = weak_equivalence_check(one, two, at_zero);
    CHECK_FALSE(w.essentially_surjective);
    CHECK(w.fully_faithful);

    // Not full: a single point mapped into one-object Z/2.
    auto point = one_object(GroupTable::cyclic(1));
    auto Z2 = one_object(GroupTable::cyclic(2));
    auto v = weak_equivalence_check(point, Z2, GroupoidMorphism{{0}, {0}});
    CHECK(v.essentially_surjective);
    CHECK_FALSE(v.fully_faithful);

    CHECK_FALSE(weak_equivalence_check(point, Z2, GroupoidMorphism{{0}, {1}}).valid_morphism);
}

TEST_CASE("property: corpus invariants")
{
    std::mt19937_64 rng(17);
    std::vector<FiniteGroupoid> corpus{pair_groupoid(3), one_object(GroupTable::symmetric(3)), free_z2(),
                                       translation_groupoid(GroupTable::symmetric(3), natural_action(3)),
                                       translation_groupoid(GroupTable::cyclic(2), {{0, 1, 2}, {1, 0, 2}}),
                                       translation_groupoid(GroupTable::cyclic(4), regular_action(GroupTable::cyclic(4)))};
    for (const auto& G : corpus) {
        REQUIRE(validate(G).valid());
        CHECK(validate(inertia_groupoid(G)).valid());
        for (int trial = 0; trial < 4; ++trial) {
            // Random surjective f: Y -> G_0.
            std::vector<int> f;
            for (int x = 0; x < G.objects; ++x) f.push_back(x);
            const int extra = static_cast<int>(rng() % 3);
            for (int e = 0; e < extra; ++e) f.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(G.objects)));
            std::shuffle(f.begin(), f.end(), rng);
            auto GY = pullback_groupoid(G, f);
            CHECK(validate(GY).valid());
            CHECK(GY.orbit_count() == G.orbit_count());
        }
    }
    for (const auto& G : corpus)
        for (const auto& H : corpus) {
            std::vector<int> f, g;
            const int n = std::max(G.objects, H.objects);
            for (int y = 0; y < n; ++y) {
                f.push_back(y % G.objects);
                g.push_back(y % H.objects);
            }
            auto r = morita_check(G, H, f, g);
            CHECK(r.verdict != MoritaResult::Verdict::Undecided);
            if (r.verdict == MoritaResult::Verdict::MoritaEquivalent) {
                CHECK(orbit_signature(G).size() == orbit_signature(H).size());
                std::multiset<std::size_t> iso_g, iso_h;
                for (auto& [s, i] : orbit_signature(G)) iso_g.insert(i);
                for (auto& [s, i] : orbit_signature(H)) iso_h.insert(i);
                CHECK(iso_g == iso_h);
            }
        }
}

TEST_CASE("property: weak equivalence is invariant under isomorphisms")
{
    auto two = translation_groupoid(GroupTable::cyclic(2), {{0, 1, 2}, {1, 0, 2}});
    auto [sub, inclusion] = full_subgroupoid(two, {1, 2});
    // An isomorphism of `two` onto a relabelled copy.
    auto copy = translation_groupoid(GroupTable::cyclic(2), {{0, 1, 2}, {0, 2, 1}});
    auto iso = find_isomorphism(two, copy, kDefaultMoritaBudget);
    REQUIRE(iso);
    CHECK(weak_equivalence_check(sub, copy, compose(*iso, inclusion)).holds());
    auto [sub_self_iso, unused] = full_subgroupoid(sub, {1, 0});
    (void)unused;
    auto back = find_isomorphism(sub_self_iso, sub, kDefaultMoritaBudget);
    REQUIRE(back);
    CHECK(weak_equivalence_check(sub_self_iso, two, compose(inclusion, *back)).holds());

    auto [one, at_zero] = full_subgroupoid(two, {0});
    CHECK_FALSE(weak_equivalence_check(one, copy, compose(*iso, at_zero)).holds());
}
