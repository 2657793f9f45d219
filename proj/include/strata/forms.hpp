#pragma once

// Polynomial differential forms on Q^n with exact coefficients.

#include "strata/group.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace strata {

using Exponent = std::vector<int>;

/// A k-form sum c x^e dx_I. The index set I is a bitmask (bit i is dx_i) with
/// |I| = k; zero coefficients are never stored.
class PolyForm {
public:
    using Key = std::pair<Exponent, std::uint32_t>;

    PolyForm() = default;
    PolyForm(std::size_t n, int k);

    static PolyForm constant(std::size_t n, const Rational& c);
    static PolyForm coordinate(std::size_t n, std::size_t i);
    static PolyForm differential(std::size_t n, std::size_t i);

    std::size_t ambient_dim() const { return n_; }
    int degree() const { return k_; }
    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Largest coefficient degree, -1 for the zero form.
    int max_poly_degree() const;

    void add(const Exponent& e, std::uint32_t mask, const Rational& c);

    PolyForm& operator+=(const PolyForm& other);
    PolyForm& operator-=(const PolyForm& other);
    PolyForm& operator*=(const Rational& c);
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
    friend PolyForm operator*(const Rational& c, PolyForm a) { return a *= c; }
    PolyForm operator-() const;
    friend bool operator==(const PolyForm&, const PolyForm&) = default;

    /// Variables print as x, y, z, w for n <= 4 and x1 ... xn otherwise.
    std::string to_string() const;
    /// Grammar: signed sum of terms `[coef] factor...`, a factor being a
    /// variable with optional `^exponent` or a wedge chain `dx^dz`. Both
    /// letter names (n <= 4) and x1 ... xn are accepted.
    static PolyForm parse(std::string_view text, std::size_t n);

private:
    std::size_t n_ = 0;
    int k_ = 0;
    std::map<Key, Rational> terms_;
};

std::string variable_name(std::size_t n, std::size_t i);

PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm exterior_d(const PolyForm& a);

/// Polynomial vector field; component i is a 0-form.
using VectorField = std::vector<PolyForm>;

VectorField linear_field(const RationalMatrix& A);
VectorField euler_field(std::size_t n);
/// Infinitesimal generator of a circle action: (x, y) -> n (-y, x) on a
/// weight-n block, in framed coordinates.
VectorField fundamental_field(const CircleWeightAction& action);

PolyForm interior(const VectorField& X, const PolyForm& w);
PolyForm lie_derivative(const VectorField& X, const PolyForm& w);
PolyForm euler_contraction(const PolyForm& w);

/// Closed form of the scaling-homotopy integral: each term of coefficient
/// degree p and form degree k contributes its Euler contraction over p + k.
PolyForm contraction_K(const PolyForm& w);
/// Pullback along the constant map to the origin: the constant part of a
/// 0-form, zero in positive degree.
PolyForm h0_pullback(const PolyForm& w);
/// w - H0* w - dKw - Kdw; zero for every w.
PolyForm homotopy_identity_check(const PolyForm& w);

/// F^* w for F: Q^m -> Q^n with components F[i] (0-forms on Q^m).
PolyForm pullback(const PolyForm& w, const std::vector<PolyForm>& F);
/// Pullback along x -> M x.
PolyForm pullback_linear(const PolyForm& w, const RationalMatrix& M);

/// Projection onto invariant forms: exact group average for finite groups;
/// for the circle the product over 1 <= w <= W of (L^2 + w^2) / w^2, L the
/// Lie derivative along the generator, which removes every nonzero weight up
/// to W = max|n| (p + k) and fixes weight zero.
PolyForm reynolds(const PolyForm& w, const LinearAction& action);
bool is_invariant(const PolyForm& w, const LinearAction& action);

struct HorizontalCheck {
    PolyForm contraction;
    bool trivially_horizontal = false;  // finite group: no fundamental directions

    bool horizontal() const { return contraction.is_zero(); }
};

HorizontalCheck horizontal_part_check(const PolyForm& w, const LinearAction& action);

struct BasicCohomology {
    int max_poly_degree = 0;
    /// dim H^k over the total-degree slices where cocycles and coboundaries are
    /// both fully inside the truncation.
    std::vector<long> betti;
    /// Cocycles in the one slice per degree whose coboundaries would need
    /// coefficient degree D + 1; a nonzero entry marks that degree truncated.
    std::vector<long> boundary_cocycles;
    std::vector<bool> truncated;
    /// Dimension of the basic cochain space per form degree.
    std::vector<long> cochain_dims;
};

/// Cohomology of invariant horizontal forms with coefficient degree <= D.
BasicCohomology basic_cohomology(const LinearAction& action, int max_poly_degree);

/// Representative of w modulo the ideal of the coordinate subspace Y: drops
/// every term with a complementary coordinate or differential. Throws
/// std::invalid_argument when Y is not spanned by coordinate axes.
PolyForm relative_ideal_quotient(const PolyForm& w, const RationalSubspace& Y);

}  // namespace strata
