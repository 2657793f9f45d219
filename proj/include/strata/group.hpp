#pragma once

#include "strata/linalg.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace strata {

inline constexpr std::size_t kDefaultGroupCap = 384;

/// Raised when a computation exceeds a configured size cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sorted member indices of a subgroup of a FiniteMatrixGroup. The parent group
/// is passed explicitly to every operation.
struct Subgroup {
    std::vector<int> members;

    std::size_t order() const { return members.size(); }
    bool contains(int g) const;
    bool contains(const Subgroup& other) const;

    friend bool operator==(const Subgroup&, const Subgroup&) = default;
    friend auto operator<=>(const Subgroup&, const Subgroup&) = default;
};

/// A finite group of invertible rational matrices, stored as an explicit element
/// list with multiplication and inverse tables. Element 0 is the identity.
///
/// Elements are ordered breadth-first from the identity: element i is expanded
/// by right multiplication with the generators in the order given, and new
/// products are appended. The ordering depends only on the generator sequence,
/// so conjugating all generators by a fixed matrix yields the same tables.
class FiniteMatrixGroup {
public:
    FiniteMatrixGroup() = default;

    /// Smallest group containing `generators`. Throws CapExceeded ("group too
    /// large or infinite") past `cap` elements and std::invalid_argument on a
    /// non-invertible or wrongly sized generator.
    static FiniteMatrixGroup close(std::size_t dim, const std::vector<RationalMatrix>& generators,
                                   std::size_t cap = kDefaultGroupCap);

    std::size_t dim() const { return dim_; }
    std::size_t order() const { return elements_.size(); }
    const RationalMatrix& element(int i) const { return elements_[static_cast<std::size_t>(i)]; }
    const std::vector<RationalMatrix>& elements() const { return elements_; }
    const std::vector<RationalMatrix>& generators() const { return generators_; }
    /// Indices of the generators inside the element list.
    const std::vector<int>& generator_indices() const { return generator_indices_; }

    int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a) * order() + static_cast<std::size_t>(b)]; }
    int inv(int a) const { return inv_[static_cast<std::size_t>(a)]; }
    int conjugate(int g, int h) const { return mul(mul(g, h), inv(g)); }
    std::optional<int> index_of(const RationalMatrix& m) const;

    int element_order(int g) const;
    bool is_abelian() const;

    Subgroup whole() const;
    Subgroup trivial() const { return Subgroup{{0}}; }
    Subgroup generated_by(const std::vector<int>& elements) const;
    bool is_subgroup(const std::vector<int>& members) const;
    /// g S g^{-1}, sorted.
    Subgroup conjugate(int g, const Subgroup& s) const;

    /// Same group with every element replaced by P g P^{-1}; tables are shared.
    FiniteMatrixGroup change_basis(const RationalMatrix& P) const;

private:
    std::size_t dim_ = 0;
    std::vector<RationalMatrix> generators_;
    std::vector<int> generator_indices_;
    std::vector<RationalMatrix> elements_;
    std::vector<int> mul_;
    std::vector<int> inv_;
    std::map<RationalMatrix, int> lookup_;
};

Subgroup centralizer(const FiniteMatrixGroup& G, int h);
Subgroup normalizer(const FiniteMatrixGroup& G, const Subgroup& S);
/// In a finite group the Cartan subgroup associated to h is the cyclic group <h>.
Subgroup cartan_associated(const FiniteMatrixGroup& G, int h);
/// Orbits of the conjugation action, each sorted, ordered by least member.
std::vector<std::vector<int>> conjugacy_classes(const FiniteMatrixGroup& G);
RationalSubspace fixed_subspace(const FiniteMatrixGroup& G, int g);
/// Common fixed space of all members of a subgroup.
RationalSubspace fixed_subspace(const FiniteMatrixGroup& G, const Subgroup& S);

/// Element e^{2 pi i t} of the circle, t in [0, 1).
struct Angle {
    Rational value;

    Angle() = default;
    explicit Angle(const Rational& t);

    friend bool operator==(const Angle&, const Angle&) = default;
    friend bool operator<(const Angle& a, const Angle& b) { return a.value < b.value; }
};

/// Linear circle action on Q^n: weight n_j rotates the real block
/// (x_{2j}, x_{2j+1}) through the angle 2 pi n_j t; the last `trivial_dim`
/// coordinates are fixed. An optional invertible frame P moves the action to
/// the coordinates P x.
class CircleWeightAction {
public:
    CircleWeightAction() = default;
    CircleWeightAction(std::vector<long> weights, std::size_t trivial_dim);
    CircleWeightAction(std::vector<long> weights, std::size_t trivial_dim, RationalMatrix frame);

    const std::vector<long>& weights() const { return weights_; }
    std::size_t trivial_dim() const { return trivial_dim_; }
    std::size_t ambient_dim() const { return 2 * weights_.size() + trivial_dim_; }
    const RationalMatrix& frame() const { return frame_; }
    bool has_standard_frame() const;

    /// Span of the chosen weight blocks (by index) plus the trivial summand, in
    /// framed coordinates.
    RationalSubspace block_subspace(const std::vector<std::size_t>& blocks) const;
    /// Fixed space of the cyclic subgroup Z/m (m >= 1), or of the whole circle
    /// when m == 0.
    RationalSubspace isotropy_fixed_space(long m) const;
    /// Infinitesimal generator A with rho(t) = exp(2 pi t A), framed.
    RationalMatrix generator_matrix() const;

    /// Weight-block support of a framed vector (blocks with a nonzero coordinate).
    std::vector<std::size_t> support(const RationalVector& x) const;
    /// Order m of the isotropy group Z/m of x, or 0 when x is fixed by the circle.
    long isotropy_order(const RationalVector& x) const;

    CircleWeightAction change_basis(const RationalMatrix& P) const;

private:
    std::vector<long> weights_;
    std::size_t trivial_dim_ = 0;
    RationalMatrix frame_;
    RationalMatrix frame_inverse_;
};

RationalSubspace fixed_subspace(const CircleWeightAction& action, const Angle& t);

using LinearAction = std::variant<FiniteMatrixGroup, CircleWeightAction>;

std::size_t ambient_dim(const LinearAction& action);

}  // namespace strata
