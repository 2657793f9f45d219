#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace strata {

/// Arbitrary precision rational. GMP keeps every value in lowest terms with a
/// positive denominator as long as values are built through `make_rational`
/// or arithmetic on canonical operands.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : std::runtime_error(msg), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

Rational make_rational(long num, long den = 1);

/// Parses "7", "-3/4", "+2/6" (reduced on return). Throws ParseError on a zero
/// denominator or malformed literal.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const RationalVector& v);

double to_double(const Rational& q);

Rational dot(const RationalVector& a, const RationalVector& b);

/// Floor of a rational as a rational integer.
Rational floor(const Rational& q);

/// Fractional part in [0, 1).
Rational frac(const Rational& q);

bool is_integer(const Rational& q);

}  // namespace strata
