#include "doctest.h"
#include "support.hpp"
#include "strata/group.hpp"

#include <algorithm>
#include <map>

using namespace strata;
using strata::testing::mat;
using strata::testing::vec;

namespace {

FiniteMatrixGroup z4()
{
    return FiniteMatrixGroup::close(2, {mat(2, 2, {0, -1, 1, 0})});
}

FiniteMatrixGroup s3_permutations()
{
    auto transposition = mat(3, 3, {0, 1, 0, 1, 0, 0, 0, 0, 1});
    auto cycle = mat(3, 3, {0, 0, 1, 1, 0, 0, 0, 1, 0});
    return FiniteMatrixGroup::close(3, {transposition, cycle});
}

int find(const FiniteMatrixGroup& G, const RationalMatrix& m)
{
    return *G.index_of(m);
}

}  // namespace

TEST_CASE("close_generators")
{
    auto G = z4();
    CHECK(G.order() == 4);
    // Hand multiplication: r^2 = -I, r^4 = I.
    auto r = mat(2, 2, {0, -1, 1, 0});
    CHECK(G.index_of(r * r) .has_value());
    CHECK(r * r * r * r == RationalMatrix::identity(2));

    auto trivial = FiniteMatrixGroup::close(2, {});
    CHECK(trivial.order() == 1);

    CHECK(s3_permutations().order() == 6);

    CHECK_THROWS_AS(FiniteMatrixGroup::close(2, {mat(2, 2, {1, 1, 0, 1})}, 50), CapExceeded);
    CHECK_THROWS_AS(FiniteMatrixGroup::close(2, {mat(2, 2, {1, 1, 1, 1})}), std::invalid_argument);
}

TEST_CASE("tables are consistent with matrix products")
{
    auto G = s3_permutations();
    for (int a = 0; a < 6; ++a) {
        CHECK(G.element(G.inv(a)) * G.element(a) == RationalMatrix::identity(3));
        for (int b = 0; b < 6; ++b) CHECK(G.element(G.mul(a, b)) == G.element(a) * G.element(b));
    }
    CHECK(G.element(0) == RationalMatrix::identity(3));
}

TEST_CASE("centralizer")
{
    auto S3 = s3_permutations();
    CHECK(centralizer(S3, 0) == S3.whole());
    int tau = find(S3, mat(3, 3, {0, 1, 0, 1, 0, 0, 0, 0, 1}));
    auto C = centralizer(S3, tau);
    CHECK(C.order() == 2);
    CHECK(C.contains(tau));
    auto G = z4();
    for (int h = 0; h < 4; ++h) CHECK(centralizer(G, h) == G.whole());
}

TEST_CASE("normalizer")
{
    auto S3 = s3_permutations();
    CHECK(normalizer(S3, S3.trivial()) == S3.whole());
    int tau = find(S3, mat(3, 3, {0, 1, 0, 1, 0, 0, 0, 0, 1}));
    auto T = S3.generated_by({tau});
    CHECK(normalizer(S3, T) == T);
    int rho = find(S3, mat(3, 3, {0, 0, 1, 1, 0, 0, 0, 1, 0}));
    CHECK(normalizer(S3, S3.generated_by({rho})) == S3.whole());
}

TEST_CASE("cartan_associated")
{
    auto G = z4();
    CHECK(cartan_associated(G, 0) == G.trivial());
    int r = find(G, mat(2, 2, {0, -1, 1, 0}));
    CHECK(cartan_associated(G, r) == G.whole());
    int r2 = find(G, mat(2, 2, {-1, 0, 0, -1}));
    CHECK(cartan_associated(G, r2) == Subgroup{{0, r2}});
}

TEST_CASE("fixed_subspace")
{
    auto G = FiniteMatrixGroup::close(2, {mat(2, 2, {-1, 0, 0, 1})});
    CHECK(fixed_subspace(G, 1) == canonicalize(2, {vec({0, 1})}));
    auto R = z4();
    CHECK(fixed_subspace(R, find(R, mat(2, 2, {0, -1, 1, 0}))).dim() == 0);

    CircleWeightAction circle({2}, 0);
    CHECK(fixed_subspace(circle, Angle(make_rational(1, 2))) == RationalSubspace::full(2));
    CHECK(fixed_subspace(circle, Angle(make_rational(1, 4))).dim() == 0);
    CHECK(fixed_subspace(circle, Angle(Rational(0))) == RationalSubspace::full(2));
}

TEST_CASE("conjugacy_classes")
{
    auto classes = conjugacy_classes(z4());
    CHECK(classes.size() == 4);
    auto S3 = conjugacy_classes(s3_permutations());
    std::vector<std::size_t> sizes;
    for (auto& c : S3) sizes.push_back(c.size());
    CHECK(sizes == std::vector<std::size_t>{1, 3, 2});
    for (auto& c : S3) CHECK(c.front() == *std::min_element(c.begin(), c.end()));
}

TEST_CASE("property: fixed spaces transport under conjugation")
{
    auto G = s3_permutations();
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            auto lhs = fixed_subspace(G, G.conjugate(g, h));
            auto rhs = fixed_subspace(G, h).image(G.element(g));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("property: fixed space of a generated subgroup is the meet over generators")
{
    auto G = s3_permutations();
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            auto H = G.generated_by({g, h});
            auto via_generators = intersect(fixed_subspace(G, g), fixed_subspace(G, h));
            RationalSubspace brute = RationalSubspace::full(3);
            for (int k : H.members) brute = intersect(brute, fixed_subspace(G, k));
            CHECK(brute == via_generators);
            CHECK(fixed_subspace(G, H) == brute);
        }
}

TEST_CASE("property: centralizers, normalizers and Cartan subgroups are subgroups")
{
    auto G = s3_permutations();
    for (int h = 0; h < 6; ++h) {
        CHECK(G.is_subgroup(centralizer(G, h).members));
        auto C = cartan_associated(G, h);
        CHECK(G.is_subgroup(C.members));
        CHECK(C.contains(h));
        for (int a : C.members)
            for (int b : C.members) CHECK(G.mul(a, b) == G.mul(b, a));
        std::vector<int> powers;
        for (int p = 0, k = 0; k < 6; ++k, p = G.mul(p, h)) powers.push_back(p);
        std::sort(powers.begin(), powers.end());
        powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
        CHECK(C.members == powers);
    }
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(G.is_subgroup(normalizer(G, G.generated_by({a, b})).members));
}

TEST_CASE("change_basis keeps the element order")
{
    strata::testing::RationalGen gen(3);
    auto G = s3_permutations();
    auto P = gen.invertible(3);
    auto H = G.change_basis(P);
    for (int i = 0; i < 6; ++i) CHECK(H.element(i) == P * G.element(i) * P.inverse());
    auto Hc = FiniteMatrixGroup::close(3, H.generators());
    for (int i = 0; i < 6; ++i) CHECK(Hc.element(i) == H.element(i));
}

TEST_CASE("circle isotropy bookkeeping")
{
    CircleWeightAction a({1, 2}, 1);
    CHECK(a.ambient_dim() == 5);
    CHECK(a.isotropy_fixed_space(0).dim() == 1);
    CHECK(a.isotropy_fixed_space(2).dim() == 3);
    CHECK(a.isotropy_fixed_space(1).dim() == 5);
    CHECK(a.isotropy_order(vec({0, 0, 1, 0, 7})) == 2);
    CHECK(a.isotropy_order(vec({1, 0, 1, 0, 7})) == 1);
    CHECK(a.isotropy_order(vec({0, 0, 0, 0, 7})) == 0);
    CHECK_THROWS(CircleWeightAction({0}, 0));
}
