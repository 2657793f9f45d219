#pragma once

// Orbit Cartan type stratification of the loop space of G ⋉ V for a finite
// matrix group or a linear circle action.
//
// Finite groups: every element is its own connected component of its ≃ class,
// so the local germ at (h, x) is G({h} × V_{=G_x}) and the global pieces are
// indexed by conjugacy classes of pairs (h, K) with K an isotropy group and
// h ∈ K.
//
// Circle actions: points with finite isotropy Z/m give pieces {h} × V_{=Z/m},
// h ∈ Z/m; points of V^{S¹} give pieces c × V^{S¹}, c a connected component of
// a ≃ class of S¹ acting on V.

#include "strata/group.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace strata {

/// Point, open arc, or the whole circle. Arcs are (lo, hi) with 0 <= lo < hi <= 1
/// in angle units; a point has lo == hi.
struct CircleCell {
    enum class Kind { Point, Arc, Full };

    Kind kind = Kind::Point;
    Rational lo;
    Rational hi;

    static CircleCell point(const Rational& t);
    static CircleCell arc(const Rational& lo, const Rational& hi);
    static CircleCell full();

    bool contains(const Angle& t) const;
    bool closure_contains(const Angle& t) const;
    bool closure_contains(const CircleCell& other) const;
    bool is_point() const { return kind == Kind::Point; }
    /// Distinguished interior angle: the point itself, the arc midpoint, or 0.
    Angle sample() const;
    std::string label() const;

    friend bool operator==(const CircleCell&, const CircleCell&) = default;
};

struct SimeqClass {
    RationalSubspace fixed_space;
    std::vector<int> elements;     // finite carrier; each element is its own component
    std::vector<CircleCell> cells; // circle carrier: connected components of the class
};

struct SimeqPartition {
    bool circle = false;
    std::vector<SimeqClass> classes;
};

SimeqPartition simeq_classes(const FiniteMatrixGroup& G, const Subgroup& carrier);
SimeqPartition simeq_classes(const CircleWeightAction& action);

/// Closed subgroup of the circle: Z/m for m >= 1, the whole circle for m == 0.
struct CircleSubgroup {
    long order = 0;
    bool is_full() const { return order == 0; }
    friend bool operator==(const CircleSubgroup&, const CircleSubgroup&) = default;
};

Subgroup t_bullet(const FiniteMatrixGroup& G, const Subgroup& carrier, int t);
CircleSubgroup t_bullet(const CircleWeightAction& action, const Angle& t);

struct IsotropyStratum {
    Subgroup subgroup;                       // finite groups
    std::optional<CircleSubgroup> circle;    // circle actions
    RationalSubspace fixed_space;            // V^K
    std::vector<RationalSubspace> excluded;  // V^{K'} for isotropy groups K' ⊋ K
    RationalVector witness;                  // a point with isotropy exactly K

    bool is_circle() const { return circle.has_value(); }
    /// Order of K; 0 stands for the whole circle.
    long order() const;
    std::string label() const;
    /// x ∈ V_{=K}: in V^K and off every excluded subspace.
    bool contains(const RationalVector& x) const;
};

/// Isotropy groups realized by the action, ordered by decreasing dim V^K then
/// by subgroup label.
std::vector<IsotropyStratum> isotropy_lattice(const FiniteMatrixGroup& G);
std::vector<IsotropyStratum> isotropy_lattice(const CircleWeightAction& action);

/// A point (h, x) of the loop space.
struct LoopPoint {
    std::variant<int, Angle> group;
    RationalVector x;
};

struct Stratum {
    int id = 0;
    std::variant<int, CircleCell> group_part;
    IsotropyStratum isotropy;
    int dim = 0;
    std::optional<long> component_count;  // nullopt: unknown (poset cap)
    LoopPoint witness;

    std::string group_label() const;
};

struct ClosureOrder {
    /// Strict pairs (p, q): stratum p lies in the closure of stratum q.
    std::vector<std::pair<int, int>> relation;
    /// Covering pairs of the relation.
    std::vector<std::pair<int, int>> hasse;

    bool less(int p, int q) const;
};

struct StratificationResult {
    bool circle = false;
    std::vector<Stratum> strata;
    ClosureOrder closure;
    std::vector<int> depth;
};

struct StrataOptions {
    std::size_t poset_cap = 4096;
    unsigned threads = 0;  // 0: take STRATA_LAB_THREADS or the hardware count
};

/// Deterministic witness: the first point of a small rational grid in `space`
/// (basis coordinates with denominators <= 7) that avoids every excluded
/// subspace, falling back to points on the moment curve.
RationalVector grid_witness(const RationalSubspace& space, const std::vector<RationalSubspace>& excluded);

StratificationResult loop_strata(const FiniteMatrixGroup& G, const StrataOptions& options = {});
StratificationResult loop_strata(const CircleWeightAction& action, const StrataOptions& options = {});
StratificationResult loop_strata(const LinearAction& action, const StrataOptions& options = {});

ClosureOrder closure_order(const std::vector<Stratum>& strata, const LinearAction& action);
ClosureOrder closure_order(const std::vector<Stratum>& strata, const FiniteMatrixGroup& G);
ClosureOrder closure_order(const std::vector<Stratum>& strata, const CircleWeightAction& action);

/// Components of V_{=K} for the stratum's isotropy piece (arc cells count once).
std::optional<long> count_components(const Stratum& s, std::size_t poset_cap = 4096);

/// Longest strictly ascending chain starting at each of `count` strata.
std::vector<int> depth(const ClosureOrder& order, std::size_t count);

/// Membership of a loop point in a stratum.
bool stratum_contains(const Stratum& s, const LoopPoint& p, const FiniteMatrixGroup& G);
bool stratum_contains(const Stratum& s, const LoopPoint& p, const CircleWeightAction& action);
bool stratum_contains(const Stratum& s, const LoopPoint& p, const LinearAction& action);

struct InertiaPiece {
    int stratum = 0;
    int dim = 0;
    std::optional<long> component_count;
};

struct InertiaStratification {
    std::vector<InertiaPiece> pieces;
    ClosureOrder closure;
    std::vector<int> depth;
};

/// Orbit-space pieces of the inertia space, one per loop stratum.
InertiaStratification inertia_strata(const StratificationResult& result, const LinearAction& action,
                                     const StrataOptions& options = {});

// Fibered products of linearly stratified spaces.

struct LinearPiece {
    RationalSubspace space;
    std::vector<RationalSubspace> excluded;
    RationalVector witness;
    std::string label;

    bool contains(const RationalVector& x) const;
};

/// A decomposition of Q^n into pieces W \ ⋃ excluded with an incidence order.
struct LinearStratification {
    std::size_t ambient_dim = 0;
    std::vector<LinearPiece> pieces;
    ClosureOrder closure;
    std::vector<int> depth;

    /// Index of the piece containing x, if any.
    std::optional<int> locate(const RationalVector& x) const;
};

/// Single-piece stratification of Q^n.
LinearStratification trivial_stratification(std::size_t n);
/// Stratification of V by isotropy type (pieces V_{=K} for every isotropy group K).
LinearStratification isotropy_type_stratification(const LinearAction& action);

class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pieces of X ×_T Y = {(x, y) : f(x) = g(y)} are the nonempty fibered
/// products of pieces, ordered by the product order. Every piece of `a` must be
/// mapped by `f` onto the span of the target piece containing its image.
LinearStratification stratify_fibered_product(const LinearStratification& a, const RationalMatrix& f,
                                              const LinearStratification& b, const RationalMatrix& g,
                                              const LinearStratification& target);
LinearStratification stratify_fibered_product(const LinearStratification& a, const RationalMatrix& f,
                                              const LinearStratification& b, const RationalMatrix& g);

/// Strict order relation -> covering pairs.
std::vector<std::pair<int, int>> hasse_edges(const std::vector<std::pair<int, int>>& relation, std::size_t count);

unsigned thread_count(unsigned requested = 0);

}  // namespace strata
