#pragma once

#include "strata/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata {

/// Default cap on the ambient dimension of linear models.
inline constexpr std::size_t kDefaultMaxAmbientDim = 16;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major rational matrix.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);
    RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_rows(const std::vector<RationalVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Rational>& entries() const { return entries_; }
    RationalVector row(std::size_t r) const;
    RationalVector column(std::size_t c) const;

    RationalMatrix transpose() const;
    RationalMatrix operator*(const RationalMatrix& rhs) const;
    RationalVector operator*(const RationalVector& v) const;
    RationalMatrix operator+(const RationalMatrix& rhs) const;
    RationalMatrix operator-(const RationalMatrix& rhs) const;

    std::size_t rank() const;
    /// Throws std::domain_error when singular.
    RationalMatrix inverse() const;
    bool is_invertible() const;

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;
    friend bool operator<(const RationalMatrix& a, const RationalMatrix& b);

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

/// Reduces rows in place to reduced row-echelon form; returns pivot columns.
std::vector<std::size_t> rref_in_place(std::vector<RationalVector>& rows, std::size_t cols);

/// A subspace of Q^n stored by its RREF basis. Equal subspaces have identical
/// representations, so `==` is subspace equality.
class RationalSubspace {
public:
    RationalSubspace() = default;

    static RationalSubspace zero(std::size_t n);
    static RationalSubspace full(std::size_t n);
    /// Throws DimensionMismatch when a vector has the wrong length.
    static RationalSubspace span(std::size_t n, const std::vector<RationalVector>& vectors);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<RationalVector>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(const RationalVector& v) const;
    bool contains(const RationalSubspace& other) const;

    /// Linear functionals whose common zero set is this subspace (RREF basis of
    /// the annihilator).
    RationalSubspace annihilator() const;

    /// Coordinates of v with respect to `basis()`; v must lie in the subspace.
    RationalVector coordinates(const RationalVector& v) const;
    /// Point with the given coordinates in `basis()`.
    RationalVector point(const RationalVector& coords) const;

    /// Orthogonal projection (standard inner product) of v onto the subspace.
    RationalVector project(const RationalVector& v) const;

    /// Image under a linear map with `M.cols() == ambient_dim()`.
    RationalSubspace image(const RationalMatrix& M) const;

    friend bool operator==(const RationalSubspace&, const RationalSubspace&) = default;
    friend bool operator<(const RationalSubspace& a, const RationalSubspace& b);

    std::string to_string() const;

private:
    std::size_t ambient_dim_ = 0;
    std::vector<RationalVector> basis_;
    std::vector<std::size_t> pivots_;
};

RationalSubspace canonicalize(std::size_t ambient_dim, const std::vector<RationalVector>& vectors);
RationalSubspace intersect(const RationalSubspace& a, const RationalSubspace& b);
RationalSubspace sum(const RationalSubspace& a, const RationalSubspace& b);
RationalSubspace kernel(const RationalMatrix& M);
bool contains_point(const RationalSubspace& s, const RationalVector& v);

/// A solution x of M x = b, or nothing when the system is inconsistent.
std::optional<RationalVector> solve(const RationalMatrix& M, const RationalVector& b);

}  // namespace strata
