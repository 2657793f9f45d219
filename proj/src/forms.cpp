#include "strata/forms.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace strata {

namespace {

int popcount(std::uint32_t m)
{
    return std::popcount(m);
}

/// Sign of dx_i moved in front of dx_mask.
int insertion_sign(std::uint32_t mask, std::size_t i)
{
    return popcount(mask & ((1u << i) - 1u)) % 2 ? -1 : 1;
}

/// Sign of dx_a ^ dx_b written in increasing order.
int merge_sign(std::uint32_t a, std::uint32_t b)
{
    int inversions = 0;
    for (std::uint32_t rest = b; rest; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        inversions += popcount(a >> (j + 1));
    }
    return inversions % 2 ? -1 : 1;
}

void check_same(const PolyForm& a, const PolyForm& b)
{
    if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("forms live on different ambient spaces");
}

}  // namespace

PolyForm::PolyForm(std::size_t n, int k) : n_(n), k_(k)
{
    if (n > 32) throw std::invalid_argument("at most 32 variables");
    if (k < 0 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("form degree out of range");
}

PolyForm PolyForm::constant(std::size_t n, const Rational& c)
{
    PolyForm f(n, 0);
    f.add(Exponent(n, 0), 0, c);
    return f;
}

PolyForm PolyForm::coordinate(std::size_t n, std::size_t i)
{
    PolyForm f(n, 0);
    Exponent e(n, 0);
    e[i] = 1;
    f.add(e, 0, 1);
    return f;
}

PolyForm PolyForm::differential(std::size_t n, std::size_t i)
{
    PolyForm f(n, 1);
    f.add(Exponent(n, 0), 1u << i, 1);
    return f;
}

int PolyForm::max_poly_degree() const
{
    int best = -1;
    for (const auto& [key, c] : terms_) best = std::max(best, std::accumulate(key.first.begin(), key.first.end(), 0));
    return best;
}

void PolyForm::add(const Exponent& e, std::uint32_t mask, const Rational& c)
{
    if (c == 0) return;
    if (e.size() != n_ || popcount(mask) != k_) throw std::invalid_argument("term does not match the form type");
    auto [it, fresh] = terms_.emplace(Key{e, mask}, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

PolyForm& PolyForm::operator+=(const PolyForm& other)
{
    if (other.is_zero()) return *this;
    if (is_zero() && (n_ != other.n_ || k_ != other.k_)) {
        *this = other;
        return *this;
    }
    check_same(*this, other);
    if (k_ != other.k_) throw std::invalid_argument("adding forms of different degree");
    for (const auto& [key, c] : other.terms_) add(key.first, key.second, c);
    return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& other)
{
    return *this += -other;
}

PolyForm& PolyForm::operator*=(const Rational& c)
{
    if (c == 0) terms_.clear();
    for (auto& [key, v] : terms_) v *= c;
    return *this;
}

PolyForm PolyForm::operator-() const
{
    PolyForm out = *this;
    for (auto& [key, v] : out.terms_) v = -v;
    return out;
}

std::string variable_name(std::size_t n, std::size_t i)
{
    static const char* letters[] = {"x", "y", "z", "w"};
    if (n <= 4) return letters[i];
    return "x" + std::to_string(i + 1);
}

std::string PolyForm::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        std::string body;
        for (std::size_t i = 0; i < n_; ++i) {
            if (key.first[i] == 0) continue;
            if (!body.empty()) body += " ";
            body += variable_name(n_, i);
            if (key.first[i] > 1) body += "^" + std::to_string(key.first[i]);
        }
        std::string diffs;
        for (std::size_t i = 0; i < n_; ++i)
            if (key.second >> i & 1u) diffs += (diffs.empty() ? "d" : "^d") + variable_name(n_, i);
        if (!diffs.empty()) body += (body.empty() ? "" : " ") + diffs;

        const Rational mag = abs(c);
        std::string coef = mag == 1 && !body.empty() ? "" : mag.get_str();
        std::string term = coef.empty() ? body : (body.empty() ? coef : coef + " " + body);
        if (first) out += (c < 0 ? "-" : "") + term;
        else out += (c < 0 ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

namespace {

struct Token {
    enum class Kind { Number, Ident, Caret, Slash, Plus, Minus, Star, End } kind;
    std::string text;
    int column;
};

std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char ch = s[i];
        const int col = static_cast<int>(i) + 1;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Kind::Number, std::string(s.substr(i, j - i)), col});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Kind::Ident, std::string(s.substr(i, j - i)), col});
            i = j;
        } else {
            Token::Kind k;
            switch (ch) {
            case '^': k = Token::Kind::Caret; break;
            case '/': k = Token::Kind::Slash; break;
            case '+': k = Token::Kind::Plus; break;
            case '-': k = Token::Kind::Minus; break;
            case '*': k = Token::Kind::Star; break;
            default: throw ParseError(std::string("unexpected character '") + ch + "'", 1, col);
            }
            out.push_back({k, std::string(1, ch), col});
            ++i;
        }
    }
    out.push_back({Token::Kind::End, "", static_cast<int>(s.size()) + 1});
    return out;
}

std::optional<std::size_t> variable_index(const std::string& name, std::size_t n)
{
    static const std::string letters = "xyzw";
    if (name.size() == 1 && n <= 4) {
        auto p = letters.find(name[0]);
        if (p != std::string::npos && p < n) return p;
    }
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const long v = std::stol(name.substr(1));
        if (v >= 1 && static_cast<std::size_t>(v) <= n) return static_cast<std::size_t>(v - 1);
    }
    return std::nullopt;
}

}  // namespace

PolyForm PolyForm::parse(std::string_view text, std::size_t n)
{
    const auto tokens = tokenize(text);
    std::size_t pos = 0;
    auto peek = [&]() -> const Token& { return tokens[pos]; };
    auto fail = [&](const std::string& msg) -> PolyForm { throw ParseError(msg, 1, peek().column); };

    struct Term {
        Exponent e;
        std::vector<std::size_t> diffs;
        Rational c;
    };
    std::vector<Term> terms;
    bool expect_term = true;
    int sign = 1;
    while (peek().kind != Token::Kind::End) {
        if (!expect_term) {
            if (peek().kind == Token::Kind::Plus) sign = 1;
            else if (peek().kind == Token::Kind::Minus) sign = -1;
            else return fail("expected '+' or '-' between terms");
            ++pos;
            expect_term = true;
            continue;
        }
        if (peek().kind == Token::Kind::Minus || peek().kind == Token::Kind::Plus) {
            if (peek().kind == Token::Kind::Minus) sign = -sign;
            ++pos;
            continue;
        }
        Term t{Exponent(n, 0), {}, Rational(sign)};
        bool any = false;
        if (peek().kind == Token::Kind::Number) {
            std::string lit = peek().text;
            const int col = peek().column;
            ++pos;
            if (peek().kind == Token::Kind::Slash) {
                ++pos;
                if (peek().kind != Token::Kind::Number) return fail("expected a denominator");
                lit += "/" + peek().text;
                ++pos;
            }
            try {
                t.c *= parse_rational(lit);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), 1, col);
            }
            any = true;
        }
        for (;;) {
            if (peek().kind == Token::Kind::Star && any) {
                ++pos;
                continue;
            }
            if (peek().kind != Token::Kind::Ident) break;
            const std::string name = peek().text;
            if (auto v = variable_index(name, n)) {
                ++pos;
                int power = 1;
                if (peek().kind == Token::Kind::Caret) {
                    ++pos;
                    if (peek().kind != Token::Kind::Number) return fail("expected an exponent");
                    power = std::stoi(peek().text);
                    ++pos;
                }
                t.e[*v] += power;
            } else if (name.size() > 1 && name[0] == 'd' && variable_index(name.substr(1), n)) {
                t.diffs.push_back(*variable_index(name.substr(1), n));
                ++pos;
                while (peek().kind == Token::Kind::Caret && tokens[pos + 1].kind == Token::Kind::Ident) {
                    const std::string next = tokens[pos + 1].text;
                    if (next.size() < 2 || next[0] != 'd' || !variable_index(next.substr(1), n)) break;
                    t.diffs.push_back(*variable_index(next.substr(1), n));
                    pos += 2;
                }
            } else {
                return fail("unknown symbol '" + name + "'");
            }
            any = true;
        }
        if (!any) return fail("expected a term");
        terms.push_back(std::move(t));
        sign = 1;
        expect_term = false;
    }
    if (expect_term && !terms.empty()) return fail("dangling sign");
    if (terms.empty()) return fail("empty form");

    const std::size_t k = terms.front().diffs.size();
    PolyForm out(n, static_cast<int>(k));
    for (auto& t : terms) {
        if (t.diffs.size() != k) throw ParseError("terms of different form degree", 1, 1);
        // Sort the differentials, tracking the sign; repeats vanish.
        int s = 1;
        for (std::size_t i = 0; i < t.diffs.size(); ++i)
            for (std::size_t j = i + 1; j < t.diffs.size(); ++j)
                if (t.diffs[i] > t.diffs[j]) s = -s;
        std::uint32_t mask = 0;
        bool repeated = false;
        for (std::size_t i : t.diffs) {
            if (mask >> i & 1u) repeated = true;
            mask |= 1u << i;
        }
        if (repeated) continue;
        out.add(t.e, mask, s * t.c);
    }
    return out;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b)
{
    check_same(a, b);
    const std::size_t n = a.ambient_dim();
    const int k = a.degree() + b.degree();
    if (static_cast<std::size_t>(k) > n) return PolyForm(n, 0);
    PolyForm out(n, k);
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            if (ka.second & kb.second) continue;
            Exponent e(n);
            for (std::size_t i = 0; i < n; ++i) e[i] = ka.first[i] + kb.first[i];
            out.add(e, ka.second | kb.second, merge_sign(ka.second, kb.second) * ca * cb);
        }
    return out;
}

PolyForm exterior_d(const PolyForm& a)
{
    const std::size_t n = a.ambient_dim();
    if (static_cast<std::size_t>(a.degree()) == n) return PolyForm(n, 0);
    PolyForm out(n, a.degree() + 1);
    for (const auto& [key, c] : a.terms())
        for (std::size_t i = 0; i < n; ++i) {
            if (key.first[i] == 0 || (key.second >> i & 1u)) continue;
            Exponent e = key.first;
            --e[i];
            out.add(e, key.second | (1u << i), insertion_sign(key.second, i) * key.first[i] * c);
        }
    return out;
}

VectorField linear_field(const RationalMatrix& A)
{
    const std::size_t n = A.rows();
    VectorField X;
    for (std::size_t i = 0; i < n; ++i) {
        PolyForm f(n, 0);
        for (std::size_t j = 0; j < A.cols(); ++j) {
            Exponent e(n, 0);
            e[j] = 1;
            f.add(e, 0, A(i, j));
        }
        X.push_back(std::move(f));
    }
    return X;
}

VectorField euler_field(std::size_t n)
{
    return linear_field(RationalMatrix::identity(n));
}

VectorField fundamental_field(const CircleWeightAction& action)
{
    return linear_field(action.generator_matrix());
}

PolyForm interior(const VectorField& X, const PolyForm& w)
{
    const std::size_t n = w.ambient_dim();
    if (X.size() != n) throw DimensionMismatch("vector field and form differ in dimension");
    if (w.degree() == 0) return PolyForm(n, 0);
    PolyForm out(n, w.degree() - 1);
    for (const auto& [key, c] : w.terms()) {
        int r = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(key.second >> i & 1u)) continue;
            const Rational s = (r % 2 ? -1 : 1) * c;
            ++r;
            const std::uint32_t rest = key.second & ~(1u << i);
            for (const auto& [xk, xc] : X[i].terms()) {
                Exponent e(n);
                for (std::size_t j = 0; j < n; ++j) e[j] = key.first[j] + xk.first[j];
                out.add(e, rest, s * xc);
            }
        }
    }
    return out;
}

PolyForm lie_derivative(const VectorField& X, const PolyForm& w)
{
    PolyForm out = exterior_d(interior(X, w));
    out += interior(X, exterior_d(w));
    return out;
}

PolyForm euler_contraction(const PolyForm& w)
{
    return interior(euler_field(w.ambient_dim()), w);
}

PolyForm contraction_K(const PolyForm& w)
{
    const std::size_t n = w.ambient_dim();
    if (w.degree() == 0) return PolyForm(n, 0);
    PolyForm out(n, w.degree() - 1);
    for (const auto& [key, c] : w.terms()) {
        PolyForm term(n, w.degree());
        term.add(key.first, key.second, c);
        const int p = std::accumulate(key.first.begin(), key.first.end(), 0);
        out += make_rational(1, p + w.degree()) * euler_contraction(term);
    }
    return out;
}

PolyForm h0_pullback(const PolyForm& w)
{
    const std::size_t n = w.ambient_dim();
    PolyForm out(n, w.degree());
    if (w.degree() != 0) return out;
    auto it = w.terms().find({Exponent(n, 0), 0u});
    if (it != w.terms().end()) out.add(it->first.first, 0, it->second);
    return out;
}

PolyForm homotopy_identity_check(const PolyForm& w)
{
    PolyForm r = w;
    r -= h0_pullback(w);
    r -= exterior_d(contraction_K(w));
    r -= contraction_K(exterior_d(w));
    return r;
}

PolyForm pullback(const PolyForm& w, const std::vector<PolyForm>& F)
{
    const std::size_t n = w.ambient_dim();
    if (F.size() != n) throw DimensionMismatch("map has the wrong number of components");
    const std::size_t m = F.empty() ? 0 : F.front().ambient_dim();
    for (const auto& f : F)
        if (f.degree() != 0 || f.ambient_dim() != m) throw DimensionMismatch("map components must be functions on one space");
    if (static_cast<std::size_t>(w.degree()) > m) return PolyForm(m, 0);

    std::vector<std::vector<PolyForm>> powers(n, {PolyForm::constant(m, 1)});
    auto power = [&](std::size_t i, int e) -> const PolyForm& {
        while (static_cast<int>(powers[i].size()) <= e) powers[i].push_back(wedge(powers[i].back(), F[i]));
        return powers[i][static_cast<std::size_t>(e)];
    };
    std::vector<PolyForm> dF;
    for (const auto& f : F) dF.push_back(exterior_d(f));

    PolyForm out(m, w.degree());
    for (const auto& [key, c] : w.terms()) {
        PolyForm t = PolyForm::constant(m, c);
        for (std::size_t i = 0; i < n; ++i)
            if (key.first[i]) t = wedge(t, power(i, key.first[i]));
        for (std::size_t i = 0; i < n; ++i)
            if (key.second >> i & 1u) t = wedge(t, dF[i]);
        out += t;
    }
    return out;
}

PolyForm pullback_linear(const PolyForm& w, const RationalMatrix& M)
{
    const std::size_t m = M.cols();
    std::vector<PolyForm> F;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        PolyForm f(m, 0);
        for (std::size_t j = 0; j < m; ++j) {
            Exponent e(m, 0);
            e[j] = 1;
            f.add(e, 0, M(i, j));
        }
        F.push_back(std::move(f));
    }
    return pullback(w, F);
}

namespace {

PolyForm circle_projection(const PolyForm& w, const CircleWeightAction& action)
{
    long nmax = 0;
    for (long v : action.weights()) nmax = std::max(nmax, std::labs(v));
    int top = 0;
    for (const auto& [key, c] : w.terms())
        top = std::max(top, std::accumulate(key.first.begin(), key.first.end(), 0) + w.degree());
    const VectorField xi = fundamental_field(action);
    PolyForm out = w;
    for (long k = 1; k <= nmax * top && !out.is_zero(); ++k) {
        PolyForm next = lie_derivative(xi, lie_derivative(xi, out));
        next += Rational(k * k) * out;
        out = make_rational(1, k * k) * next;
    }
    return out;
}

}  // namespace

PolyForm reynolds(const PolyForm& w, const LinearAction& action)
{
    if (ambient_dim(action) != w.ambient_dim()) throw DimensionMismatch("form and action differ in dimension");
    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        PolyForm sum(w.ambient_dim(), w.degree());
        for (const auto& g : G->elements()) sum += pullback_linear(w, g);
        return make_rational(1, static_cast<long>(G->order())) * sum;
    }
    return circle_projection(w, std::get<CircleWeightAction>(action));
}

bool is_invariant(const PolyForm& w, const LinearAction& action)
{
    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) {
        for (const auto& g : G->generators())
            if (pullback_linear(w, g) != w) return false;
        return true;
    }
    return lie_derivative(fundamental_field(std::get<CircleWeightAction>(action)), w).is_zero();
}

HorizontalCheck horizontal_part_check(const PolyForm& w, const LinearAction& action)
{
    HorizontalCheck out;
    if (std::holds_alternative<FiniteMatrixGroup>(action)) {
        out.contraction = PolyForm(w.ambient_dim(), std::max(0, w.degree() - 1));
        out.trivially_horizontal = true;
        return out;
    }
    out.contraction = interior(fundamental_field(std::get<CircleWeightAction>(action)), w);
    return out;
}

// ---------------------------------------------------------------------------
// Basic cohomology

namespace {

/// Coordinates kept together by the grading: every circle block and every
/// trivial coordinate separately, or all coordinates for a finite group.
std::vector<std::vector<std::size_t>> grading_blocks(const LinearAction& action)
{
    std::vector<std::vector<std::size_t>> blocks;
    if (const auto* C = std::get_if<CircleWeightAction>(&action)) {
        for (std::size_t j = 0; j < C->weights().size(); ++j) blocks.push_back({2 * j, 2 * j + 1});
        for (std::size_t i = 2 * C->weights().size(); i < C->ambient_dim(); ++i) blocks.push_back({i});
    } else {
        std::vector<std::size_t> all(ambient_dim(action));
        std::iota(all.begin(), all.end(), 0);
        blocks.push_back(all);
    }
    return blocks;
}

void monomials(const std::vector<std::size_t>& vars, int degree, std::size_t from, Exponent& e,
               std::vector<Exponent>& out)
{
    if (from + 1 == vars.size() || vars.empty()) {
        if (vars.empty()) {
            if (degree == 0) out.push_back(e);
            return;
        }
        e[vars[from]] += degree;
        out.push_back(e);
        e[vars[from]] -= degree;
        return;
    }
    for (int a = degree; a >= 0; --a) {
        e[vars[from]] += a;
        monomials(vars, degree - a, from + 1, e, out);
        e[vars[from]] -= a;
    }
}

/// Terms c x^e dx_I whose per-block total degree (polynomial degree plus
/// number of differentials) is s, with k differentials in all.
std::vector<PolyForm::Key> slice_terms(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks,
                                       const std::vector<int>& s, int k)
{
    std::vector<PolyForm::Key> out;
    std::function<void(std::size_t, int, Exponent&, std::uint32_t)> go = [&](std::size_t b, int left, Exponent& e,
                                                                             std::uint32_t mask) {
        if (b == blocks.size()) {
            if (left == 0) out.push_back({e, mask});
            return;
        }
        const auto& vars = blocks[b];
        const int cb = static_cast<int>(vars.size());
        for (int kb = 0; kb <= std::min({cb, s[b], left}); ++kb) {
            std::vector<Exponent> monos;
            monomials(vars, s[b] - kb, 0, e, monos);
            // Subsets of size kb of the block's coordinates.
            for (std::uint32_t sub = 0; sub < (1u << cb); ++sub) {
                if (popcount(sub) != kb) continue;
                std::uint32_t m = mask;
                for (int i = 0; i < cb; ++i)
                    if (sub >> i & 1u) m |= 1u << vars[static_cast<std::size_t>(i)];
                for (auto& mono : monos) go(b + 1, left - kb, mono, m);
            }
        }
    };
    Exponent e(n, 0);
    go(0, k, e, 0);
    return out;
}

/// Rows of constraint images, indexed by (constraint, target term).
struct SparseColumns {
    std::map<std::pair<int, PolyForm::Key>, std::size_t> rows;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> columns;

    void add_column(const std::vector<std::pair<int, const PolyForm*>>& images)
    {
        std::vector<std::pair<std::size_t, Rational>> col;
        for (const auto& [tag, f] : images)
            for (const auto& [key, c] : f->terms()) {
                auto [it, fresh] = rows.emplace(std::make_pair(tag, key), rows.size());
                col.emplace_back(it->second, c);
            }
        columns.push_back(std::move(col));
    }

    std::vector<RationalVector> dense_rows() const
    {
        std::vector<RationalVector> out(rows.size(), RationalVector(columns.size()));
        for (std::size_t j = 0; j < columns.size(); ++j)
            for (const auto& [r, c] : columns[j]) out[r][j] += c;
        return out;
    }
};

std::vector<RationalVector> kernel_basis(std::vector<RationalVector> rows, std::size_t cols)
{
    const auto pivots = rref_in_place(rows, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<RationalVector> out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(cols);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][f];
        out.push_back(std::move(v));
    }
    return out;
}

PolyForm assemble(std::size_t n, int k, const std::vector<PolyForm::Key>& terms, const RationalVector& coeffs)
{
    PolyForm f(n, k);
    for (std::size_t i = 0; i < terms.size(); ++i) f.add(terms[i].first, terms[i].second, coeffs[i]);
    return f;
}

}  // namespace

BasicCohomology basic_cohomology(const LinearAction& input, int D)
{
    if (D < 1) throw std::invalid_argument("coefficient degree bound must be at least 1");
    // Cohomology does not see a linear change of coordinates, so circle
    // actions are computed in their standard frame.
    LinearAction action = input;
    if (const auto* C = std::get_if<CircleWeightAction>(&input))
        action = CircleWeightAction(C->weights(), C->trivial_dim());
    const std::size_t n = ambient_dim(action);
    const auto blocks = grading_blocks(action);
    const int K = static_cast<int>(n);

    BasicCohomology out;
    out.max_poly_degree = D;
    out.betti.assign(n + 1, 0);
    out.boundary_cocycles.assign(n + 1, 0);
    out.truncated.assign(n + 1, false);
    out.cochain_dims.assign(n + 1, 0);

    std::optional<VectorField> xi;
    if (const auto* C = std::get_if<CircleWeightAction>(&action)) xi = fundamental_field(*C);

    auto basic_basis = [&](const std::vector<PolyForm::Key>& terms, int k) {
        SparseColumns M;
        for (const auto& key : terms) {
            PolyForm t(n, k);
            t.add(key.first, key.second, 1);
            std::vector<PolyForm> images;
            if (xi) {
                images.push_back(lie_derivative(*xi, t));
                images.push_back(interior(*xi, t));
            } else {
                for (const auto& g : std::get<FiniteMatrixGroup>(action).generators())
                    images.push_back(pullback_linear(t, g) - t);
            }
            std::vector<std::pair<int, const PolyForm*>> tagged;
            for (std::size_t i = 0; i < images.size(); ++i) tagged.emplace_back(static_cast<int>(i), &images[i]);
            M.add_column(tagged);
        }
        return kernel_basis(M.dense_rows(), terms.size());
    };

    // Per-block degree vectors s with |s| = q.
    std::function<void(std::size_t, int, std::vector<int>&, const std::function<void(const std::vector<int>&)>&)>
        compositions = [&](std::size_t b, int left, std::vector<int>& s, const auto& visit) {
            if (b + 1 == blocks.size()) {
                s[b] = left;
                visit(s);
                return;
            }
            for (int a = 0; a <= left; ++a) {
                s[b] = a;
                compositions(b + 1, left - a, s, visit);
            }
        };

    for (int q = 0; q <= D + K; ++q) {
        std::vector<int> s(blocks.size(), 0);
        compositions(0, q, s, [&](const std::vector<int>& deg) {
            // Form degrees whose coefficient degree q - k lies in [0, D].
            std::vector<std::optional<std::vector<PolyForm::Key>>> terms(static_cast<std::size_t>(K + 2));
            std::vector<std::vector<RationalVector>> basis(static_cast<std::size_t>(K + 2));
            std::vector<std::size_t> rank_d(static_cast<std::size_t>(K + 2), 0);
            for (int k = 0; k <= K; ++k) {
                const int p = q - k;
                if (p < 0 || p > D) continue;
                terms[static_cast<std::size_t>(k)] = slice_terms(n, blocks, deg, k);
                basis[static_cast<std::size_t>(k)] = basic_basis(*terms[static_cast<std::size_t>(k)], k);
                out.cochain_dims[static_cast<std::size_t>(k)] += static_cast<long>(basis[static_cast<std::size_t>(k)].size());
                // Rank of d on the basic forms of this slice.
                SparseColumns M;
                std::vector<PolyForm> images;
                for (const auto& v : basis[static_cast<std::size_t>(k)])
                    images.push_back(exterior_d(assemble(n, k, *terms[static_cast<std::size_t>(k)], v)));
                for (const auto& f : images) M.add_column({{0, &f}});
                auto rows = M.dense_rows();
                rank_d[static_cast<std::size_t>(k)] = rref_in_place(rows, images.size()).size();
            }
            for (int k = 0; k <= K; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                if (!terms[ks]) continue;
                const long cocycles = static_cast<long>(basis[ks].size() - rank_d[ks]);
                const int p_below = q - k + 1;  // coefficient degree one form degree down
                if (k == 0 || p_below < 0) {
                    out.betti[ks] += cocycles;
                } else if (p_below <= D) {
                    out.betti[ks] += cocycles - static_cast<long>(rank_d[ks - 1]);
                } else {
                    out.boundary_cocycles[ks] += cocycles;
                }
            }
        });
    }
    for (std::size_t k = 0; k <= n; ++k) out.truncated[k] = out.boundary_cocycles[k] > 0;
    return out;
}

PolyForm relative_ideal_quotient(const PolyForm& w, const RationalSubspace& Y)
{
    const std::size_t n = w.ambient_dim();
    if (Y.ambient_dim() != n) throw DimensionMismatch("subspace and form differ in dimension");
    std::vector<bool> kept(n, false);
    for (const auto& b : Y.basis()) {
        std::size_t nonzero = 0, where = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (b[i] != 0) {
                ++nonzero;
                where = i;
            }
        if (nonzero != 1) throw std::invalid_argument("not a coordinate subspace; restrict after a linear change of coordinates");
        kept[where] = true;
    }
    PolyForm out(n, w.degree());
    for (const auto& [key, c] : w.terms()) {
        bool survives = true;
        for (std::size_t i = 0; i < n && survives; ++i)
            if (!kept[i] && (key.first[i] > 0 || (key.second >> i & 1u))) survives = false;
        if (survives) out.add(key.first, key.second, c);
    }
    return out;
}

}  // namespace strata
