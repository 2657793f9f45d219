#pragma once

// Finite discrete groupoids given by explicit structure tables.

#include "strata/group.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace strata {

/// A finite group given by its multiplication table; element 0 is the identity.
struct GroupTable {
    int order = 1;
    std::vector<int> mul{0};

    int product(int a, int b) const { return mul[static_cast<std::size_t>(a * order + b)]; }
    int inverse(int a) const;

    static GroupTable cyclic(int n);
    /// Permutations of {0, ..., n-1}, composed as functions.
    static GroupTable symmetric(int n);
    static GroupTable of(const FiniteMatrixGroup& G);
};

/// Objects 0..objects-1, arrows 0..arrows()-1. mul[g * arrows() + h] is the
/// composite g h (first h, then g), or -1 when s(g) != t(h).
struct FiniteGroupoid {
    int objects = 0;
    std::vector<int> src;
    std::vector<int> tgt;
    std::vector<int> unit;
    std::vector<int> inv;
    std::vector<int> mul;

    int arrows() const { return static_cast<int>(src.size()); }
    int compose(int g, int h) const { return mul[static_cast<std::size_t>(g) * src.size() + static_cast<std::size_t>(h)]; }
    /// Orbit index of every object, numbered by first appearance.
    std::vector<int> orbits() const;
    int orbit_count() const;
    /// Arrows from x to x.
    std::vector<int> isotropy(int x) const;
};

struct GroupoidMorphism {
    std::vector<int> object_map;
    std::vector<int> arrow_map;
};

struct GroupoidReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

/// Every axiom violation, empty when `G` is a groupoid.
GroupoidReport validate(const FiniteGroupoid& G);
GroupoidReport validate_morphism(const FiniteGroupoid& K, const FiniteGroupoid& G, const GroupoidMorphism& f);

FiniteGroupoid pair_groupoid(int n);
FiniteGroupoid one_object(const GroupTable& group);
/// act[g][x] is g . x. Throws std::invalid_argument unless the table is an action.
FiniteGroupoid translation_groupoid(const GroupTable& group, const std::vector<std::vector<int>>& act);

std::vector<int> loop_space(const FiniteGroupoid& G);
/// Objects are the loops in the order of loop_space; arrows are pairs (g, h)
/// with s(g) = s(h) = t(h), mapping h to g h g^-1.
FiniteGroupoid inertia_groupoid(const FiniteGroupoid& G);
/// G[Y] for f: Y -> G_0; arrows (y, z, g) with t(g) = f(y), s(g) = f(z).
FiniteGroupoid pullback_groupoid(const FiniteGroupoid& G, const std::vector<int>& f);

inline constexpr std::size_t kDefaultMoritaBudget = 1000000;

struct MoritaResult {
    enum class Verdict { NotSurjective, NotIsomorphic, MoritaEquivalent, Undecided };
    Verdict verdict = Verdict::Undecided;
    std::string reason;
    /// Isomorphism G[Y] -> H[Y] when equivalent.
    std::optional<GroupoidMorphism> witness;
};

std::string to_string(MoritaResult::Verdict v);

/// Decides whether G[Y] and H[Y] are isomorphic for f: Y -> G_0, g: Y -> H_0.
MoritaResult morita_check(const FiniteGroupoid& G, const FiniteGroupoid& H, const std::vector<int>& f,
                          const std::vector<int>& g, std::size_t budget = kDefaultMoritaBudget);

/// Isomorphism of finite groupoids, or nothing. `exhausted` is set when the
/// search ran out of budget.
std::optional<GroupoidMorphism> find_isomorphism(const FiniteGroupoid& A, const FiniteGroupoid& B,
                                                 std::size_t budget, bool* exhausted = nullptr);

struct WeakEquivalenceResult {
    bool valid_morphism = true;
    bool essentially_surjective = false;
    bool fully_faithful = false;
    std::vector<std::string> notes;

    bool holds() const { return valid_morphism && essentially_surjective && fully_faithful; }
};

WeakEquivalenceResult weak_equivalence_check(const FiniteGroupoid& K, const FiniteGroupoid& G,
                                             const GroupoidMorphism& f);

GroupoidMorphism compose(const GroupoidMorphism& second, const GroupoidMorphism& first);
/// Full subgroupoid on the given objects, with its inclusion morphism.
std::pair<FiniteGroupoid, GroupoidMorphism> full_subgroupoid(const FiniteGroupoid& G, const std::vector<int>& objects);

}  // namespace strata
