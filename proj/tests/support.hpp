#pragma once

#include "strata/linalg.hpp"

#include <cstdint>
#include <random>

namespace strata::testing {

/// Small random rationals for property tests.
class RationalGen {
public:
    explicit RationalGen(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    Rational rational(long range = 4, long max_den = 3)
    {
        return make_rational(integer(-range, range), integer(1, max_den));
    }

    RationalVector vector(std::size_t n, long range = 4, long max_den = 3)
    {
        RationalVector v(n);
        for (auto& x : v) x = rational(range, max_den);
        return v;
    }

    RationalMatrix matrix(std::size_t r, std::size_t c, long range = 3)
    {
        RationalMatrix M(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) M(i, j) = integer(-range, range);
        return M;
    }

    RationalMatrix invertible(std::size_t n, long range = 2)
    {
        for (;;) {
            RationalMatrix M = matrix(n, n, range);
            if (M.is_invertible()) return M;
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline RationalVector vec(std::initializer_list<long> xs)
{
    RationalVector v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

inline RationalMatrix mat(std::size_t r, std::size_t c, std::initializer_list<long> xs)
{
    std::vector<Rational> e;
    for (long x : xs) e.push_back(Rational(x));
    return RationalMatrix(r, c, std::move(e));
}

}  // namespace strata::testing
