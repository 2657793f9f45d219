#include "strata/group.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace strata {

bool Subgroup::contains(int g) const
{
    return std::binary_search(members.begin(), members.end(), g);
}

bool Subgroup::contains(const Subgroup& other) const
{
    return std::includes(members.begin(), members.end(), other.members.begin(), other.members.end());
}

FiniteMatrixGroup FiniteMatrixGroup::close(std::size_t dim, const std::vector<RationalMatrix>& generators,
                                           std::size_t cap)
{
    for (const auto& g : generators) {
        if (g.rows() != dim || g.cols() != dim)
            throw std::invalid_argument("generator has the wrong size: expected " + std::to_string(dim) + "x" +
                                        std::to_string(dim));
        if (!g.is_invertible()) throw std::invalid_argument("non-invertible generator " + g.to_string());
    }

    FiniteMatrixGroup G;
    G.dim_ = dim;
    G.generators_ = generators;
    G.elements_.push_back(RationalMatrix::identity(dim));
    G.lookup_.emplace(G.elements_.front(), 0);

    std::vector<int> parent{-1};
    std::vector<int> via{-1};
    std::vector<std::vector<int>> right(generators.size());

    for (std::size_t i = 0; i < G.elements_.size(); ++i) {
        for (std::size_t s = 0; s < generators.size(); ++s) {
            RationalMatrix prod = G.elements_[i] * generators[s];
            auto it = G.lookup_.find(prod);
            int idx;
            if (it != G.lookup_.end()) {
                idx = it->second;
            } else {
                if (G.elements_.size() >= cap)
                    throw CapExceeded("group too large or infinite (order cap " + std::to_string(cap) + ")");
                idx = static_cast<int>(G.elements_.size());
                G.lookup_.emplace(prod, idx);
                G.elements_.push_back(std::move(prod));
                parent.push_back(static_cast<int>(i));
                via.push_back(static_cast<int>(s));
            }
            right[s].resize(G.elements_.size(), -1);
            right[s][i] = idx;
        }
    }

    const std::size_t n = G.elements_.size();
    G.mul_.assign(n * n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        G.mul_[i * n] = static_cast<int>(i);
        for (std::size_t j = 1; j < n; ++j) {
            const int left = G.mul_[i * n + static_cast<std::size_t>(parent[j])];
            G.mul_[i * n + j] = right[static_cast<std::size_t>(via[j])][static_cast<std::size_t>(left)];
        }
    }
    G.inv_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (G.mul_[i * n + j] == 0) {
                G.inv_[i] = static_cast<int>(j);
                break;
            }
    for (const auto& g : generators) G.generator_indices_.push_back(G.lookup_.at(g));
    return G;
}

std::optional<int> FiniteMatrixGroup::index_of(const RationalMatrix& m) const
{
    auto it = lookup_.find(m);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

int FiniteMatrixGroup::element_order(int g) const
{
    int k = 1;
    for (int p = g; p != 0; p = mul(p, g)) ++k;
    return k;
}

bool FiniteMatrixGroup::is_abelian() const
{
    const int n = static_cast<int>(order());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

Subgroup FiniteMatrixGroup::whole() const
{
    Subgroup s;
    s.members.resize(order());
    std::iota(s.members.begin(), s.members.end(), 0);
    return s;
}

Subgroup FiniteMatrixGroup::generated_by(const std::vector<int>& gens) const
{
    std::vector<bool> in(order(), false);
    std::vector<int> members{0};
    in[0] = true;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (int g : gens) {
            int p = mul(members[i], g);
            if (!in[static_cast<std::size_t>(p)]) {
                in[static_cast<std::size_t>(p)] = true;
                members.push_back(p);
            }
        }
    std::sort(members.begin(), members.end());
    return Subgroup{std::move(members)};
}

bool FiniteMatrixGroup::is_subgroup(const std::vector<int>& members) const
{
    std::vector<bool> in(order(), false);
    for (int m : members) in[static_cast<std::size_t>(m)] = true;
    if (!in[0]) return false;
    for (int a : members) {
        if (!in[static_cast<std::size_t>(inv(a))]) return false;
        for (int b : members)
            if (!in[static_cast<std::size_t>(mul(a, b))]) return false;
    }
    return true;
}

Subgroup FiniteMatrixGroup::conjugate(int g, const Subgroup& s) const
{
    Subgroup out;
    out.members.reserve(s.members.size());
    for (int h : s.members) out.members.push_back(conjugate(g, h));
    std::sort(out.members.begin(), out.members.end());
    return out;
}

FiniteMatrixGroup FiniteMatrixGroup::change_basis(const RationalMatrix& P) const
{
    const RationalMatrix Pinv = P.inverse();
    FiniteMatrixGroup G = *this;
    G.lookup_.clear();
    for (std::size_t i = 0; i < G.elements_.size(); ++i) {
        G.elements_[i] = P * elements_[i] * Pinv;
        G.lookup_.emplace(G.elements_[i], static_cast<int>(i));
    }
    for (auto& g : G.generators_) g = P * g * Pinv;
    return G;
}

Subgroup centralizer(const FiniteMatrixGroup& G, int h)
{
    Subgroup s;
    for (int g = 0; g < static_cast<int>(G.order()); ++g)
        if (G.mul(g, h) == G.mul(h, g)) s.members.push_back(g);
    return s;
}

Subgroup normalizer(const FiniteMatrixGroup& G, const Subgroup& S)
{
    Subgroup s;
    for (int g = 0; g < static_cast<int>(G.order()); ++g)
        if (G.conjugate(g, S) == S) s.members.push_back(g);
    return s;
}

Subgroup cartan_associated(const FiniteMatrixGroup& G, int h)
{
    return G.generated_by({h});
}

std::vector<std::vector<int>> conjugacy_classes(const FiniteMatrixGroup& G)
{
    const int n = static_cast<int>(G.order());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<std::vector<int>> classes;
    for (int h = 0; h < n; ++h) {
        if (seen[static_cast<std::size_t>(h)]) continue;
        std::vector<int> cls;
        for (int g = 0; g < n; ++g) {
            int c = G.conjugate(g, h);
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = true;
                cls.push_back(c);
            }
        }
        std::sort(cls.begin(), cls.end());
        classes.push_back(std::move(cls));
    }
    return classes;
}

RationalSubspace fixed_subspace(const FiniteMatrixGroup& G, int g)
{
    return kernel(G.element(g) - RationalMatrix::identity(G.dim()));
}

RationalSubspace fixed_subspace(const FiniteMatrixGroup& G, const Subgroup& S)
{
    const std::size_t n = G.dim();
    std::vector<RationalVector> rows;
    const RationalMatrix I = RationalMatrix::identity(n);
    for (int g : S.members) {
        if (g == 0) continue;
        RationalMatrix D = G.element(g) - I;
        for (std::size_t r = 0; r < n; ++r) rows.push_back(D.row(r));
    }
    if (rows.empty()) return RationalSubspace::full(n);
    return kernel(RationalMatrix::from_rows(rows));
}

Angle::Angle(const Rational& t) : value(frac(t)) {}

CircleWeightAction::CircleWeightAction(std::vector<long> weights, std::size_t trivial_dim)
    : CircleWeightAction(std::move(weights), trivial_dim, RationalMatrix())
{
}

CircleWeightAction::CircleWeightAction(std::vector<long> weights, std::size_t trivial_dim, RationalMatrix frame)
    : weights_(std::move(weights)), trivial_dim_(trivial_dim)
{
    for (long w : weights_)
        if (w == 0) throw std::invalid_argument("circle weights must be nonzero");
    const std::size_t n = ambient_dim();
    if (frame.rows() == 0 && frame.cols() == 0) frame = RationalMatrix::identity(n);
    if (frame.rows() != n || frame.cols() != n)
        throw DimensionMismatch("circle action frame must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!frame.is_invertible()) throw std::invalid_argument("circle action frame is singular");
    frame_inverse_ = frame.inverse();
    frame_ = std::move(frame);
}

bool CircleWeightAction::has_standard_frame() const
{
    return frame_ == RationalMatrix::identity(ambient_dim());
}

RationalSubspace CircleWeightAction::block_subspace(const std::vector<std::size_t>& blocks) const
{
    const std::size_t n = ambient_dim();
    std::vector<RationalVector> vecs;
    auto unit = [n](std::size_t i) {
        RationalVector e(n, Rational(0));
        e[i] = 1;
        return e;
    };
    for (std::size_t b : blocks) {
        vecs.push_back(unit(2 * b));
        vecs.push_back(unit(2 * b + 1));
    }
    for (std::size_t i = 2 * weights_.size(); i < n; ++i) vecs.push_back(unit(i));
    return RationalSubspace::span(n, vecs).image(frame_);
}

RationalSubspace CircleWeightAction::isotropy_fixed_space(long m) const
{
    std::vector<std::size_t> blocks;
    if (m != 0)
        for (std::size_t j = 0; j < weights_.size(); ++j)
            if (weights_[j] % m == 0) blocks.push_back(j);
    return block_subspace(blocks);
}

RationalMatrix CircleWeightAction::generator_matrix() const
{
    const std::size_t n = ambient_dim();
    RationalMatrix A(n, n);
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        A(2 * j, 2 * j + 1) = -weights_[j];
        A(2 * j + 1, 2 * j) = weights_[j];
    }
    return frame_ * A * frame_inverse_;
}

std::vector<std::size_t> CircleWeightAction::support(const RationalVector& x) const
{
    if (x.size() != ambient_dim()) throw DimensionMismatch("support: dimension mismatch");
    const RationalVector y = frame_inverse_ * x;
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < weights_.size(); ++j)
        if (y[2 * j] != 0 || y[2 * j + 1] != 0) out.push_back(j);
    return out;
}

long CircleWeightAction::isotropy_order(const RationalVector& x) const
{
    long g = 0;
    for (std::size_t j : support(x)) g = std::gcd(g, std::abs(weights_[j]));
    return g;
}

CircleWeightAction CircleWeightAction::change_basis(const RationalMatrix& P) const
{
    return CircleWeightAction(weights_, trivial_dim_, P * frame_);
}

RationalSubspace fixed_subspace(const CircleWeightAction& action, const Angle& t)
{
    std::vector<std::size_t> blocks;
    for (std::size_t j = 0; j < action.weights().size(); ++j)
        if (is_integer(t.value * action.weights()[j])) blocks.push_back(j);
    return action.block_subspace(blocks);
}

std::size_t ambient_dim(const LinearAction& action)
{
    return std::visit(
        [](const auto& a) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(a)>, FiniteMatrixGroup>)
                return a.dim();
            else
                return a.ambient_dim();
        },
        action);
}

}  // namespace strata
