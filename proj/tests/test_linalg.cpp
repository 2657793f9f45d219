#include "doctest.h"
#include "oracles/gauss.hpp"
#include "support.hpp"
#include "strata/linalg.hpp"

#include <algorithm>

using namespace strata;
using strata::testing::mat;
using strata::testing::vec;

TEST_CASE("parse_rational reduces and rejects zero denominators")
{
    CHECK(parse_rational("2/4") == make_rational(1, 2));
    CHECK(parse_rational("-6/3") == Rational(-2));
    CHECK(parse_rational("+7") == Rational(7));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/"), ParseError);
    CHECK_THROWS_AS(parse_rational("a"), ParseError);
}

TEST_CASE("canonicalize")
{
    auto full = canonicalize(2, {vec({2, 0}), vec({0, 3})});
    CHECK(full.basis() == std::vector<RationalVector>{vec({1, 0}), vec({0, 1})});

    auto zero = canonicalize(2, {});
    CHECK(zero.dim() == 0);
    CHECK(zero.ambient_dim() == 2);

    auto line = canonicalize(2, {vec({1, 1}), vec({2, 2})});
    CHECK(line.basis() == std::vector<RationalVector>{vec({1, 1})});

    CHECK_THROWS_AS(canonicalize(2, {vec({1, 2, 3})}), DimensionMismatch);
}

TEST_CASE("intersect")
{
    auto x = canonicalize(2, {vec({1, 0})});
    auto y = canonicalize(2, {vec({0, 1})});
    CHECK(intersect(x, y).dim() == 0);
    CHECK(intersect(x, x) == x);
    auto diag = canonicalize(2, {vec({1, 1})});
    CHECK(intersect(RationalSubspace::full(2), diag) == diag);
    CHECK_THROWS_AS(intersect(x, RationalSubspace::full(3)), DimensionMismatch);
}

TEST_CASE("kernel")
{
    CHECK(kernel(RationalMatrix(2, 2)) == RationalSubspace::full(2));
    CHECK(kernel(RationalMatrix::identity(2)).dim() == 0);
    auto k = kernel(mat(2, 2, {1, 1, 1, 1}));
    // By hand: x + y = 0, so the null space is spanned by (1, -1).
    CHECK(k == canonicalize(2, {vec({1, -1})}));
}

TEST_CASE("contains_point")
{
    CHECK(contains_point(RationalSubspace::zero(2), vec({0, 0})));
    CHECK_FALSE(contains_point(canonicalize(2, {vec({1, 0})}), vec({0, 1})));
    CHECK(contains_point(canonicalize(2, {vec({1, 1})}), vec({3, 3})));
    CHECK_THROWS_AS(contains_point(RationalSubspace::zero(2), vec({0})), DimensionMismatch);
}

TEST_CASE("matrix inverse and rank")
{
    auto M = mat(2, 2, {2, 1, 1, 1});
    CHECK(M * M.inverse() == RationalMatrix::identity(2));
    CHECK(mat(2, 2, {1, 2, 2, 4}).rank() == 1);
    CHECK_THROWS_AS(mat(2, 2, {1, 2, 2, 4}).inverse(), std::domain_error);
}

TEST_CASE("property: canonicalize is idempotent and order independent")
{
    strata::testing::RationalGen gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(gen.integer(1, 5));
        const std::size_t k = static_cast<std::size_t>(gen.integer(0, 6));
        std::vector<RationalVector> vs;
        for (std::size_t i = 0; i < k; ++i) vs.push_back(gen.vector(n));
        if (k > 1 && gen.integer(0, 1)) vs.push_back(vs[0]);
        auto s = canonicalize(n, vs);
        CHECK(canonicalize(n, s.basis()) == s);
        std::shuffle(vs.begin(), vs.end(), gen.engine());
        CHECK(canonicalize(n, vs) == s);
        CHECK(s.dim() == oracle::rank(vs));
    }
}

TEST_CASE("property: dim(A meet B) + dim(A + B) = dim A + dim B")
{
    strata::testing::RationalGen gen(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(gen.integer(1, 6));
        auto random_subspace = [&] {
            std::vector<RationalVector> vs;
            const long k = gen.integer(0, static_cast<long>(n));
            for (long i = 0; i < k; ++i) {
                RationalVector v = gen.vector(n, 2, 1);
                vs.push_back(v);
            }
            return canonicalize(n, vs);
        };
        auto A = random_subspace();
        auto B = random_subspace();
        auto meet = intersect(A, B);
        auto join = sum(A, B);
        CHECK(meet.dim() + join.dim() == A.dim() + B.dim());
        CHECK(A.contains(meet));
        CHECK(B.contains(meet));
        CHECK(join.contains(A));
    }
}

TEST_CASE("property: contains_point agrees with solvability of the basis system")
{
    strata::testing::RationalGen gen(13);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = static_cast<std::size_t>(gen.integer(1, 5));
        std::vector<RationalVector> vs;
        const long k = gen.integer(0, static_cast<long>(n));
        for (long i = 0; i < k; ++i) vs.push_back(gen.vector(n, 2, 2));
        auto S = canonicalize(n, vs);
        RationalVector v(n, Rational(0));
        if (gen.integer(0, 1) && !vs.empty()) {
            for (const auto& b : vs) {
                Rational c = gen.rational();
                for (std::size_t j = 0; j < n; ++j) v[j] += c * b[j];
            }
        } else {
            v = gen.vector(n);
        }
        CHECK(contains_point(S, v) == oracle::solvable(S.basis(), v));
    }
}

TEST_CASE("project lands in the subspace with orthogonal residual")
{
    strata::testing::RationalGen gen(14);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4;
        auto S = canonicalize(n, {gen.vector(n), gen.vector(n)});
        auto v = gen.vector(n);
        auto p = S.project(v);
        CHECK(S.contains(p));
        RationalVector r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = v[i] - p[i];
        for (const auto& b : S.basis()) CHECK(dot(b, r) == 0);
    }
}
