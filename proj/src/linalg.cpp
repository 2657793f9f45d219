#include "strata/linalg.hpp"

#include <algorithm>
#include <utility>

namespace strata {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0))
{
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (entries_.size() != rows_ * cols_)
        throw DimensionMismatch("matrix entry count does not match rows x cols");
}

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows)
{
    if (rows.empty()) return {};
    const std::size_t cols = rows.front().size();
    RationalMatrix M(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) M(r, c) = rows[r][c];
    }
    return M;
}

RationalVector RationalMatrix::row(std::size_t r) const
{
    return RationalVector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                          entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RationalVector RationalMatrix::column(std::size_t c) const
{
    RationalVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix T(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) T(c, r) = (*this)(r, c);
    return T;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const
{
    if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product: inner dimensions differ");
    RationalMatrix P(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) P(i, j) += a * rhs(k, j);
        }
    return P;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const
{
    if (cols_ != v.size()) throw DimensionMismatch("matrix-vector product: dimension mismatch");
    RationalVector out(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
    return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix sum: shape mismatch");
    RationalMatrix S = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) S.entries_[i] += rhs.entries_[i];
    return S;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix difference: shape mismatch");
    RationalMatrix S = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) S.entries_[i] -= rhs.entries_[i];
    return S;
}

std::size_t RationalMatrix::rank() const
{
    std::vector<RationalVector> rows;
    rows.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) rows.push_back(row(r));
    return rref_in_place(rows, cols_).size();
}

bool RationalMatrix::is_invertible() const
{
    return is_square() && rank() == rows_;
}

RationalMatrix RationalMatrix::inverse() const
{
    if (!is_square()) throw DimensionMismatch("inverse of a non-square matrix");
    const std::size_t n = rows_;
    std::vector<RationalVector> aug(n, RationalVector(2 * n, Rational(0)));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug[r][c] = (*this)(r, c);
        aug[r][n + r] = 1;
    }
    auto piv = rref_in_place(aug, 2 * n);
    if (piv.size() < n || piv[n - 1] >= n) throw std::domain_error("matrix is singular");
    RationalMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug[r][n + c];
    return inv;
}

bool operator<(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return a.entries_ < b.entries_;
}

std::string RationalMatrix::to_string() const
{
    std::string out = "[";
    for (std::size_t r = 0; r < rows_; ++r) {
        if (r) out += ";";
        for (std::size_t c = 0; c < cols_; ++c) {
            if (c) out += " ";
            out += (*this)(r, c).get_str();
        }
    }
    return out + "]";
}

std::vector<std::size_t> rref_in_place(std::vector<RationalVector>& rows, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < rows.size(); ++c) {
        std::size_t p = lead;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[lead], rows[p]);
        const Rational inv = 1 / rows[lead][c];
        for (std::size_t j = c; j < cols; ++j) rows[lead][j] *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == lead || rows[r][c] == 0) continue;
            const Rational f = rows[r][c];
            for (std::size_t j = c; j < cols; ++j) rows[r][j] -= f * rows[lead][j];
        }
        pivots.push_back(c);
        ++lead;
    }
    rows.resize(lead);
    return pivots;
}

RationalSubspace RationalSubspace::zero(std::size_t n)
{
    RationalSubspace s;
    s.ambient_dim_ = n;
    return s;
}

RationalSubspace RationalSubspace::full(std::size_t n)
{
    RationalSubspace s;
    s.ambient_dim_ = n;
    for (std::size_t i = 0; i < n; ++i) {
        RationalVector e(n, Rational(0));
        e[i] = 1;
        s.basis_.push_back(std::move(e));
        s.pivots_.push_back(i);
    }
    return s;
}

RationalSubspace RationalSubspace::span(std::size_t n, const std::vector<RationalVector>& vectors)
{
    RationalSubspace s;
    s.ambient_dim_ = n;
    for (const auto& v : vectors)
        if (v.size() != n) throw DimensionMismatch("canonicalize: vectors have different ambient dimensions");
    s.basis_ = vectors;
    s.pivots_ = rref_in_place(s.basis_, n);
    return s;
}

bool RationalSubspace::contains(const RationalVector& v) const
{
    if (v.size() != ambient_dim_) throw DimensionMismatch("contains_point: dimension mismatch");
    return point(coordinates(v)) == v;
}

bool RationalSubspace::contains(const RationalSubspace& other) const
{
    if (other.ambient_dim_ != ambient_dim_) throw DimensionMismatch("subspace containment: dimension mismatch");
    for (const auto& b : other.basis_)
        if (!contains(b)) return false;
    return true;
}

RationalSubspace RationalSubspace::annihilator() const
{
    if (basis_.empty()) return full(ambient_dim_);
    return kernel(RationalMatrix::from_rows(basis_));
}

RationalVector RationalSubspace::coordinates(const RationalVector& v) const
{
    RationalVector c(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) c[i] = v[pivots_[i]];
    return c;
}

RationalVector RationalSubspace::point(const RationalVector& coords) const
{
    if (coords.size() != basis_.size()) throw DimensionMismatch("point: coordinate count differs from dimension");
    RationalVector v(ambient_dim_, Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (coords[i] == 0) continue;
        for (std::size_t j = 0; j < ambient_dim_; ++j) v[j] += coords[i] * basis_[i][j];
    }
    return v;
}

RationalVector RationalSubspace::project(const RationalVector& v) const
{
    if (v.size() != ambient_dim_) throw DimensionMismatch("project: dimension mismatch");
    const std::size_t d = basis_.size();
    if (d == 0) return RationalVector(ambient_dim_, Rational(0));
    RationalMatrix gram(d, d);
    RationalVector rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
        rhs[i] = dot(basis_[i], v);
        for (std::size_t j = 0; j < d; ++j) gram(i, j) = dot(basis_[i], basis_[j]);
    }
    auto c = solve(gram, rhs);
    return point(*c);
}

RationalSubspace RationalSubspace::image(const RationalMatrix& M) const
{
    if (M.cols() != ambient_dim_) throw DimensionMismatch("image: map domain differs from ambient dimension");
    std::vector<RationalVector> imgs;
    imgs.reserve(basis_.size());
    for (const auto& b : basis_) imgs.push_back(M * b);
    return span(M.rows(), imgs);
}

bool operator<(const RationalSubspace& a, const RationalSubspace& b)
{
    if (a.ambient_dim_ != b.ambient_dim_) return a.ambient_dim_ < b.ambient_dim_;
    if (a.basis_.size() != b.basis_.size()) return a.basis_.size() < b.basis_.size();
    return a.basis_ < b.basis_;
}

std::string RationalSubspace::to_string() const
{
    std::string out = "span{";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (i) out += ",";
        out += strata::to_string(basis_[i]);
    }
    return out + "}";
}

RationalSubspace canonicalize(std::size_t ambient_dim, const std::vector<RationalVector>& vectors)
{
    return RationalSubspace::span(ambient_dim, vectors);
}

RationalSubspace intersect(const RationalSubspace& a, const RationalSubspace& b)
{
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("intersect: dimension mismatch");
    if (a.contains(b)) return b;
    if (b.contains(a)) return a;
    return sum(a.annihilator(), b.annihilator()).annihilator();
}

RationalSubspace sum(const RationalSubspace& a, const RationalSubspace& b)
{
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("sum: dimension mismatch");
    std::vector<RationalVector> all = a.basis();
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    return RationalSubspace::span(a.ambient_dim(), all);
}

RationalSubspace kernel(const RationalMatrix& M)
{
    const std::size_t n = M.cols();
    std::vector<RationalVector> rows;
    rows.reserve(M.rows());
    for (std::size_t r = 0; r < M.rows(); ++r) rows.push_back(M.row(r));
    auto piv = rref_in_place(rows, n);
    std::vector<bool> is_pivot(n, false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<RationalVector> null_basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(n, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -rows[i][f];
        null_basis.push_back(std::move(v));
    }
    return RationalSubspace::span(n, null_basis);
}

bool contains_point(const RationalSubspace& s, const RationalVector& v)
{
    return s.contains(v);
}

std::optional<RationalVector> solve(const RationalMatrix& M, const RationalVector& b)
{
    if (b.size() != M.rows()) throw DimensionMismatch("solve: right-hand side length mismatch");
    const std::size_t n = M.cols();
    std::vector<RationalVector> aug;
    aug.reserve(M.rows());
    for (std::size_t r = 0; r < M.rows(); ++r) {
        auto row = M.row(r);
        row.push_back(b[r]);
        aug.push_back(std::move(row));
    }
    auto piv = rref_in_place(aug, n + 1);
    if (!piv.empty() && piv.back() == n) return std::nullopt;
    RationalVector x(n, Rational(0));
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug[i][n];
    return x;
}

}  // namespace strata
