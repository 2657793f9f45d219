#include "strata/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace strata::io {

using nlohmann::json;

std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string kind_name(ActionSpec::Kind kind)
{
    switch (kind) {
    case ActionSpec::Kind::FiniteMatrix: return "finite-matrix";
    case ActionSpec::Kind::CircleWeights: return "circle-weights";
    case ActionSpec::Kind::FiniteGroupoid: return "finite-groupoid";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Permutation groups for groupoid blocks

namespace {

struct PermGroup {
    std::vector<std::vector<int>> elements;
    GroupTable table;
};

PermGroup close_perms(const std::vector<std::vector<int>>& gens, std::size_t points, std::size_t cap)
{
    PermGroup out;
    std::vector<int> id(points);
    for (std::size_t i = 0; i < points; ++i) id[i] = static_cast<int>(i);
    std::map<std::vector<int>, int> index{{id, 0}};
    out.elements.push_back(id);
    for (std::size_t i = 0; i < out.elements.size(); ++i)
        for (const auto& g : gens) {
            std::vector<int> prod(points);
            for (std::size_t x = 0; x < points; ++x)
                prod[x] = out.elements[i][static_cast<std::size_t>(g[x])];
            if (index.count(prod)) continue;
            if (out.elements.size() >= cap)
                throw CapExceeded("permutation group exceeds the cap of " + std::to_string(cap) + " elements");
            index.emplace(prod, static_cast<int>(out.elements.size()));
            out.elements.push_back(std::move(prod));
        }
    const int n = static_cast<int>(out.elements.size());
    out.table.order = n;
    out.table.mul.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<int> prod(points);
            for (std::size_t x = 0; x < points; ++x)
                prod[x] = out.elements[static_cast<std::size_t>(a)][static_cast<std::size_t>(
                    out.elements[static_cast<std::size_t>(b)][x])];
            out.table.mul[static_cast<std::size_t>(a * n + b)] = index.at(prod);
        }
    return out;
}

}  // namespace

FiniteGroupoid GroupoidDef::build(std::size_t cap) const
{
    if (pair) return pair_groupoid(*pair);
    const std::size_t points = perms.front().size();
    const PermGroup G = close_perms(perms, points, cap);
    if (acting_on == "single") return one_object(G.table);
    std::vector<std::vector<int>> act;
    if (acting_on == "self") {
        for (int g = 0; g < G.table.order; ++g) {
            act.emplace_back();
            for (int x = 0; x < G.table.order; ++x) act.back().push_back(G.table.product(g, x));
        }
    } else {
        act = G.elements;
    }
    return translation_groupoid(G.table, act);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    std::string text;
    int column = 0;
};

std::vector<Token> tokenize(const std::string& line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
        } else if (c == ';') {
            out.push_back({";", static_cast<int>(i) + 1});
            ++i;
        } else {
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != ';') ++i;
            out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
        }
    }
    return out;
}

struct LineCursor {
    int line;
    std::vector<Token> tokens;
    std::size_t pos = 1;  // tokens[0] is the keyword

    [[noreturn]] void fail(const std::string& msg, int column) const { throw ParseError(msg, line, column); }
    int end_column() const { return tokens.back().column + static_cast<int>(tokens.back().text.size()); }
    bool done() const { return pos >= tokens.size(); }
    const Token& next(const std::string& what)
    {
        if (done()) fail("expected " + what, end_column());
        return tokens[pos++];
    }
    void finish() const
    {
        if (!done()) fail("unexpected '" + tokens[pos].text + "'", tokens[pos].column);
    }

    long integer(const std::string& what, long lo)
    {
        const Token& t = next(what);
        long v = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            fail("expected " + what + ", found '" + t.text + "'", t.column);
        if (v < lo) fail(what + " must be at least " + std::to_string(lo), t.column);
        return v;
    }

    Rational rational()
    {
        const Token& t = next("a number");
        try {
            return parse_rational(t.text);
        } catch (const ParseError& e) {
            fail(e.what(), t.column);
        }
    }

    /// Rows separated by `;`, each with the same length.
    std::vector<RationalVector> rows()
    {
        std::vector<RationalVector> out(1);
        if (done()) fail("expected matrix entries", end_column());
        while (!done()) {
            if (tokens[pos].text == ";") {
                if (out.back().empty()) fail("empty matrix row", tokens[pos].column);
                out.emplace_back();
                ++pos;
                continue;
            }
            out.back().push_back(rational());
        }
        if (out.back().empty()) fail("empty matrix row", end_column());
        for (const auto& r : out)
            if (r.size() != out.front().size()) fail("matrix rows have different lengths", tokens.front().column);
        return out;
    }
};

struct Pending {
    int line;
    int column;
    std::string text;
};

RationalMatrix square_matrix(const std::vector<RationalVector>& rows, std::size_t dim, int line, int column,
                             const std::string& what)
{
    if (rows.size() != dim || rows.front().size() != dim)
        throw ParseError(what + " must be " + std::to_string(dim) + "x" + std::to_string(dim) + ", found " +
                             std::to_string(rows.size()) + "x" + std::to_string(rows.front().size()),
                         line, column);
    RationalMatrix m = RationalMatrix::from_rows(rows);
    if (!m.is_invertible()) throw ParseError(what + " is not invertible", line, column);
    return m;
}

}  // namespace

ActionSpec parse_spec(std::string_view text)
{
    ActionSpec spec;
    std::optional<int> kind_line;
    std::optional<std::size_t> dim;
    int dim_line = 0;
    std::vector<std::pair<std::vector<RationalVector>, int>> generator_rows;
    std::optional<std::vector<RationalVector>> frame_rows;
    int frame_line = 0;
    bool have_weights = false;
    std::vector<Pending> invariants;
    std::set<std::string> seen;
    GroupoidDef* open = nullptr;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = raw.substr(0, raw.find('#'));
        LineCursor cur{line_no, tokenize(line)};
        if (cur.tokens.empty()) continue;
        const Token& key = cur.tokens.front();
        auto once = [&](const std::string& k) {
            if (!seen.insert(k).second) cur.fail("duplicate '" + k + "'", key.column);
        };

        if (open) {
            if (key.text == "end") {
                cur.finish();
                if (!open->pair && open->perms.empty())
                    throw ParseError("groupoid '" + open->name + "' needs 'pair' or at least one 'perm'", line_no,
                                     key.column);
                open = nullptr;
            } else if (key.text == "pair") {
                if (open->pair || !open->perms.empty()) cur.fail("'pair' cannot be combined", key.column);
                open->pair = static_cast<int>(cur.integer("an object count", 1));
                cur.finish();
            } else if (key.text == "perm") {
                if (open->pair) cur.fail("'perm' cannot follow 'pair'", key.column);
                std::vector<int> p;
                std::vector<bool> hit;
                while (!cur.done()) p.push_back(static_cast<int>(cur.integer("a point index", 0)));
                if (p.empty()) cur.fail("expected a permutation", cur.end_column());
                hit.assign(p.size(), false);
                for (std::size_t i = 0; i < p.size(); ++i) {
                    if (static_cast<std::size_t>(p[i]) >= p.size() || hit[static_cast<std::size_t>(p[i])])
                        cur.fail("not a permutation of 0.." + std::to_string(p.size() - 1),
                                 cur.tokens[i + 1].column);
                    hit[static_cast<std::size_t>(p[i])] = true;
                }
                if (!open->perms.empty() && open->perms.front().size() != p.size())
                    cur.fail("permutations act on different point counts", key.column);
                open->perms.push_back(std::move(p));
            } else if (key.text == "acting-on") {
                const Token& t = cur.next("points, single or self");
                if (t.text != "points" && t.text != "single" && t.text != "self")
                    cur.fail("expected points, single or self, found '" + t.text + "'", t.column);
                open->acting_on = t.text;
                cur.finish();
            } else {
                cur.fail("unknown keyword '" + key.text + "' inside a groupoid block", key.column);
            }
            continue;
        }

        if (key.text == "kind") {
            once("kind");
            const Token& t = cur.next("a kind");
            if (t.text == "finite-matrix") spec.kind = ActionSpec::Kind::FiniteMatrix;
            else if (t.text == "circle-weights") spec.kind = ActionSpec::Kind::CircleWeights;
            else if (t.text == "finite-groupoid") spec.kind = ActionSpec::Kind::FiniteGroupoid;
            else cur.fail("unknown kind '" + t.text + "'", t.column);
            kind_line = line_no;
            cur.finish();
        } else if (key.text == "dim") {
            once("dim");
            const long d = cur.integer("a dimension", 0);
            if (static_cast<std::size_t>(d) > kDefaultMaxAmbientDim)
                cur.fail("dimension exceeds " + std::to_string(kDefaultMaxAmbientDim), cur.tokens[1].column);
            dim = static_cast<std::size_t>(d);
            dim_line = line_no;
            cur.finish();
        } else if (key.text == "generator") {
            generator_rows.emplace_back(cur.rows(), line_no);
        } else if (key.text == "weights") {
            once("weights");
            have_weights = true;
            while (!cur.done()) {
                const Token& t = cur.tokens[cur.pos];
                const long w = cur.integer("a weight", std::numeric_limits<long>::min());
                if (w == 0) cur.fail("weights must be nonzero", t.column);
                spec.weights.push_back(w);
            }
        } else if (key.text == "trivial") {
            once("trivial");
            spec.trivial = static_cast<std::size_t>(cur.integer("a dimension", 0));
            cur.finish();
        } else if (key.text == "frame") {
            once("frame");
            frame_rows = cur.rows();
            frame_line = line_no;
        } else if (key.text == "cap") {
            once("cap");
            spec.cap = static_cast<std::size_t>(cur.integer("a cap", 1));
            cur.finish();
        } else if (key.text == "invariant") {
            if (cur.tokens.size() < 2) cur.fail("expected a polynomial", cur.end_column());
            const int col = cur.tokens[1].column;
            invariants.push_back({line_no, col, line.substr(static_cast<std::size_t>(col - 1))});
        } else if (key.text == "groupoid") {
            const Token& t = cur.next("a name");
            for (const auto& g : spec.groupoids)
                if (g.name == t.text) cur.fail("duplicate groupoid '" + t.text + "'", t.column);
            cur.finish();
            spec.groupoids.push_back(GroupoidDef{t.text, line_no, std::nullopt, {}, "points"});
            open = &spec.groupoids.back();
        } else if (key.text == "cover") {
            once("cover");
            spec.cover = static_cast<int>(cur.integer("a point count", 1));
            cur.finish();
        } else if (key.text == "map") {
            MapDef m;
            m.name = cur.next("a groupoid name").text;
            m.line = line_no;
            while (!cur.done()) m.images.push_back(static_cast<int>(cur.integer("an object index", 0)));
            spec.maps.push_back(std::move(m));
        } else {
            cur.fail("unknown keyword '" + key.text + "'", key.column);
        }
    }
    if (open) throw ParseError("groupoid '" + open->name + "' is missing 'end'", line_no + 1, 1);
    if (!kind_line) throw ParseError("missing 'kind'", 1, 1);

    auto reject = [&](bool present, const std::string& what) {
        if (present) throw ParseError("'" + what + "' is not allowed for kind " + kind_name(spec.kind), *kind_line, 1);
    };

    switch (spec.kind) {
    case ActionSpec::Kind::FiniteMatrix: {
        reject(have_weights, "weights");
        reject(seen.count("trivial") > 0, "trivial");
        reject(frame_rows.has_value(), "frame");
        reject(!spec.groupoids.empty() || !spec.maps.empty() || spec.cover, "groupoid");
        if (!dim) throw ParseError("missing 'dim'", *kind_line, 1);
        spec.dim = *dim;
        for (const auto& [rows, line] : generator_rows)
            spec.generators.push_back(square_matrix(rows, spec.dim, line, 1, "generator"));
        break;
    }
    case ActionSpec::Kind::CircleWeights: {
        reject(!generator_rows.empty(), "generator");
        reject(!spec.groupoids.empty() || !spec.maps.empty() || spec.cover, "groupoid");
        if (!have_weights) throw ParseError("missing 'weights'", *kind_line, 1);
        spec.dim = 2 * spec.weights.size() + spec.trivial;
        if (dim && *dim != spec.dim)
            throw ParseError("dim " + std::to_string(*dim) + " disagrees with weights and trivial (" +
                                 std::to_string(spec.dim) + ")",
                             dim_line, 1);
        if (spec.dim > kDefaultMaxAmbientDim)
            throw ParseError("dimension exceeds " + std::to_string(kDefaultMaxAmbientDim), *kind_line, 1);
        if (frame_rows) spec.frame = square_matrix(*frame_rows, spec.dim, frame_line, 1, "frame");
        break;
    }
    case ActionSpec::Kind::FiniteGroupoid: {
        reject(dim.has_value(), "dim");
        reject(!generator_rows.empty(), "generator");
        reject(have_weights, "weights");
        reject(!invariants.empty(), "invariant");
        if (spec.groupoids.empty()) throw ParseError("no groupoid blocks", *kind_line, 1);
        for (const auto& m : spec.maps) {
            const auto it = std::find_if(spec.groupoids.begin(), spec.groupoids.end(),
                                         [&](const GroupoidDef& g) { return g.name == m.name; });
            if (it == spec.groupoids.end()) throw ParseError("unknown groupoid '" + m.name + "'", m.line, 5);
            if (!spec.cover) throw ParseError("'map' needs a preceding 'cover'", m.line, 1);
            if (static_cast<int>(m.images.size()) != *spec.cover)
                throw ParseError("map lists " + std::to_string(m.images.size()) + " images, cover has " +
                                     std::to_string(*spec.cover),
                                 m.line, 1);
        }
        break;
    }
    }

    for (const auto& inv : invariants) {
        try {
            PolyForm p = PolyForm::parse(inv.text, spec.dim);
            if (p.degree() != 0) throw ParseError("invariant must be a polynomial (0-form)", 1, 1);
            spec.invariants.push_back(std::move(p));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), inv.line, inv.column + std::max(e.column(), 1) - 1);
        }
    }
    return spec;
}

ActionSpec load_spec(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

namespace {

std::string matrix_line(const RationalMatrix& m)
{
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r) out += " ;";
        for (std::size_t c = 0; c < m.cols(); ++c) out += " " + m(r, c).get_str();
    }
    return out;
}

}  // namespace

std::string ActionSpec::canonical() const
{
    std::ostringstream out;
    out << "kind " << kind_name(kind) << '\n';
    switch (kind) {
    case Kind::FiniteMatrix:
        out << "dim " << dim << '\n';
        for (const auto& g : generators) out << "generator" << matrix_line(g) << '\n';
        break;
    case Kind::CircleWeights:
        out << "weights";
        for (long w : weights) out << ' ' << w;
        out << "\ntrivial " << trivial << '\n';
        if (frame) out << "frame" << matrix_line(*frame) << '\n';
        break;
    case Kind::FiniteGroupoid:
        for (const auto& g : groupoids) {
            out << "groupoid " << g.name << '\n';
            if (g.pair) out << "pair " << *g.pair << '\n';
            for (const auto& p : g.perms) {
                out << "perm";
                for (int x : p) out << ' ' << x;
                out << '\n';
            }
            if (!g.pair) out << "acting-on " << g.acting_on << '\n';
            out << "end\n";
        }
        if (cover) out << "cover " << *cover << '\n';
        for (const auto& m : maps) {
            out << "map " << m.name;
            for (int y : m.images) out << ' ' << y;
            out << '\n';
        }
        break;
    }
    for (const auto& p : invariants) out << "invariant " << p.to_string() << '\n';
    return out.str();
}

std::string ActionSpec::digest() const
{
    return "sha256:" + sha256_hex(canonical());
}

LinearAction ActionSpec::action() const
{
    switch (kind) {
    case Kind::FiniteMatrix: return FiniteMatrixGroup::close(dim, generators, cap);
    case Kind::CircleWeights:
        return frame ? CircleWeightAction(weights, trivial, *frame) : CircleWeightAction(weights, trivial);
    case Kind::FiniteGroupoid: break;
    }
    throw std::invalid_argument("a finite-groupoid file does not describe a linear action");
}

// ---------------------------------------------------------------------------
// JSON and DOT

namespace {

json strings(const RationalVector& v)
{
    json out = json::array();
    for (const auto& q : v) out.push_back(q.get_str());
    return out;
}

json pairs(const std::vector<std::pair<int, int>>& edges)
{
    json out = json::array();
    for (const auto& [p, q] : edges) out.push_back({p, q});
    return out;
}

std::string group_text(const LoopPoint& p)
{
    if (const int* h = std::get_if<int>(&p.group)) return "g" + std::to_string(*h);
    return std::get<Angle>(p.group).value.get_str();
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

json to_json(const StratificationResult& result)
{
    json out;
    out["circle"] = result.circle;
    json strata = json::array();
    int max_depth = 0;
    for (const auto& s : result.strata) {
        const int depth = result.depth[static_cast<std::size_t>(s.id)];
        max_depth = std::max(max_depth, depth);
        json row;
        row["id"] = s.id;
        row["group_part"] = s.group_label();
        row["isotropy"] = s.isotropy.label();
        row["isotropy_order"] = s.isotropy.order();
        row["dim"] = s.dim;
        row["components"] = s.component_count ? json(*s.component_count) : json(nullptr);
        row["depth"] = depth;
        row["witness"] = {{"group", group_text(s.witness)}, {"x", strings(s.witness.x)}};
        strata.push_back(std::move(row));
    }
    out["strata"] = std::move(strata);
    out["hasse"] = pairs(result.closure.hasse);
    out["relation"] = pairs(result.closure.relation);
    out["max_depth"] = max_depth;
    return out;
}

json to_json(const ValidationReport& report)
{
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back(
            {{"name", c.name}, {"passed", c.passed}, {"trials", c.trials}, {"counterexamples", c.counterexamples}});
    return {{"checks", checks}, {"passed", report.passed()}};
}

json to_json(const BasicCohomology& c)
{
    json truncated = json::array();
    for (bool t : c.truncated) truncated.push_back(t);
    return {{"max_degree", c.max_poly_degree},
            {"betti", c.betti},
            {"boundary_cocycles", c.boundary_cocycles},
            {"truncated", truncated},
            {"cochain_dims", c.cochain_dims}};
}

json to_json(const ProbeReport& r)
{
    json scales = json::array();
    for (const auto& s : r.scales) {
        json row = {{"scale", s.scale.get_str()}, {"samples", s.samples}, {"max_angle", s.max_angle}};
        if (r.quotient) row["max_residual"] = s.max_residual;
        scales.push_back(std::move(row));
    }
    return {{"base", r.base_stratum},   {"upper", r.upper_stratum}, {"quotient", r.quotient},
            {"tolerance", r.tolerance}, {"scales", scales},         {"trend", r.trend()},
            {"verdict", r.verdict()},   {"passed", r.passed}};
}

std::string to_dot(const StratificationResult& result)
{
    std::ostringstream out;
    out << "digraph strata {\n  rankdir=BT;\n  node [shape=box];\n";
    for (const auto& s : result.strata)
        out << "  s" << s.id << " [label=\"" << s.id << ": (" << s.group_label() << ", " << s.isotropy.label()
            << ")\\ndim " << s.dim << ", depth " << result.depth[static_cast<std::size_t>(s.id)] << "\"];\n";
    for (const auto& [p, q] : result.closure.hasse) out << "  s" << p << " -> s" << q << ";\n";
    out << "}\n";
    return out.str();
}

ClosureOrder closure_from_report(const json& report, std::size_t count)
{
    const json& body = report.contains("results") ? report.at("results") : report;
    if (!body.contains("strata") || !body.contains("hasse"))
        throw ParseError("check file is not a strata report", 1, 1);
    if (body.at("strata").size() != count)
        throw ParseError("check file lists " + std::to_string(body.at("strata").size()) + " strata, computed " +
                             std::to_string(count),
                         1, 1);
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : body.at("hasse")) {
        const int p = e.at(0).get<int>(), q = e.at(1).get<int>();
        if (p < 0 || q < 0 || static_cast<std::size_t>(p) >= count || static_cast<std::size_t>(q) >= count)
            throw ParseError("check file edge out of range", 1, 1);
        edges.emplace_back(p, q);
    }
    return order_from_edges(edges, count);
}

json make_report(const std::string& command, const ActionSpec& spec, const CommandResult& result,
                 std::optional<double> seconds)
{
    json out;
    out["schema_version"] = kSchemaVersion;
    out["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    out["command"] = command;
    out["input_digest"] = spec.digest();
    out["input_kind"] = kind_name(spec.kind);
    out["exit_code"] = static_cast<int>(result.exit);
    out["results"] = result.results;
    if (seconds) out["timing"] = {{"seconds", *seconds}};
    return out;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

LinearAction require_action(const ActionSpec& spec, const std::string& command)
{
    if (!spec.is_action())
        throw std::invalid_argument("'" + command + "' needs a finite-matrix or circle-weights file");
    return spec.action();
}

json action_summary(const ActionSpec& spec, const LinearAction& action)
{
    json out = {{"kind", kind_name(spec.kind)}, {"dim", spec.dim}};
    if (const auto* G = std::get_if<FiniteMatrixGroup>(&action)) out["group_order"] = G->order();
    else out["weights"] = spec.weights;
    return out;
}

std::string strata_table(const StratificationResult& r)
{
    std::ostringstream out;
    out << "id  group      isotropy       dim  components  depth  witness\n";
    for (const auto& s : r.strata) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-3d %-10s %-14s %-4d %-11s %-6d ", s.id, s.group_label().c_str(),
                      s.isotropy.label().c_str(), s.dim,
                      s.component_count ? std::to_string(*s.component_count).c_str() : "?",
                      r.depth[static_cast<std::size_t>(s.id)]);
        out << buf << "(" << group_text(s.witness) << ", " << to_string(s.witness.x) << ")\n";
    }
    out << "hasse:";
    for (const auto& [p, q] : r.closure.hasse) out << ' ' << p << "<" << q;
    out << '\n';
    return out.str();
}

}  // namespace

CommandResult cmd_strata(const ActionSpec& spec, const CommandOptions& options)
{
    const LinearAction action = require_action(spec, "strata");
    const StratificationResult r = loop_strata(action);
    CommandResult out;
    out.results = to_json(r);
    out.results["action"] = action_summary(spec, action);
    out.text = strata_table(r);
    out.dot = to_dot(r);
    if (options.inertia) {
        const InertiaStratification in = inertia_strata(r, action);
        json pieces = json::array();
        out.text += "inertia pieces (stratum: dim, components):";
        for (const auto& p : in.pieces) {
            pieces.push_back({{"stratum", p.stratum},
                              {"dim", p.dim},
                              {"components", p.component_count ? json(*p.component_count) : json(nullptr)}});
            out.text += " " + std::to_string(p.stratum) + ": " + std::to_string(p.dim) + ", " +
                        (p.component_count ? std::to_string(*p.component_count) : "?") + ";";
        }
        out.text += '\n';
        out.results["inertia"] = {{"pieces", pieces}, {"hasse", pairs(in.closure.hasse)}};
    }
    return out;
}

CommandResult cmd_validate(const ActionSpec& spec, const CommandOptions& options)
{
    const LinearAction action = require_action(spec, "validate");
    const StratificationResult r = loop_strata(action);
    ValidationOptions vo;
    vo.samples = options.samples;
    vo.seed = options.seed;
    const ValidationReport report = options.check
                                        ? validate(r, closure_from_report(*options.check, r.strata.size()), action, vo)
                                        : validate(r, action, vo);
    CommandResult out;
    out.results = to_json(report);
    out.results["seed"] = options.seed;
    out.results["samples"] = options.samples;
    out.results["asserted_order"] = options.check ? "check-file" : "computed";
    std::ostringstream text;
    for (const auto& c : report.checks) {
        text << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.trials << " trials)\n";
        for (const auto& e : c.counterexamples) text << "  counterexample: " << e << '\n';
    }
    out.text = text.str();
    out.exit = report.passed() ? ExitCode::Ok : ExitCode::InvariantFailure;
    return out;
}

CommandResult cmd_derham(const ActionSpec& spec, const CommandOptions& options)
{
    if (options.max_degree < 0) throw std::invalid_argument("--max-degree must be non-negative");
    const LinearAction action = require_action(spec, "derham");
    const BasicCohomology c = basic_cohomology(action, options.max_degree);
    bool acyclic = !c.betti.empty() && c.betti[0] == 1;
    for (std::size_t k = 1; k < c.betti.size(); ++k) acyclic = acyclic && c.betti[k] == 0;
    CommandResult out;
    out.results = to_json(c);
    out.results["acyclic"] = acyclic;
    std::ostringstream text;
    text << "basic cohomology, coefficient degree <= " << c.max_poly_degree << '\n';
    for (std::size_t k = 0; k < c.betti.size(); ++k)
        text << "H^" << k << " = " << c.betti[k] << (c.truncated[k] ? "  (truncated: boundary cocycles " +
                                                                          std::to_string(c.boundary_cocycles[k]) + ")"
                                                                    : "")
             << '\n';
    text << (acyclic ? "acyclic\n" : "NOT acyclic\n");
    out.text = text.str();
    out.exit = acyclic ? ExitCode::Ok : ExitCode::InvariantFailure;
    return out;
}

CommandResult cmd_groupoid(const ActionSpec& spec, const CommandOptions& options)
{
    if (spec.kind != ActionSpec::Kind::FiniteGroupoid)
        throw std::invalid_argument("'groupoid' needs a finite-groupoid file");
    std::map<std::string, FiniteGroupoid> built;
    for (const auto& g : spec.groupoids) built.emplace(g.name, g.build(spec.cap));

    CommandResult out;
    out.results["op"] = options.op;
    std::ostringstream text;
    if (options.op == "summary") {
        json rows = json::array();
        bool ok = true;
        for (const auto& def : spec.groupoids) {
            const auto& G = built.at(def.name);
            const GroupoidReport rep = validate(G);
            ok = ok && rep.valid();
            rows.push_back({{"name", def.name},
                            {"objects", G.objects},
                            {"arrows", G.arrows()},
                            {"orbits", G.orbit_count()},
                            {"valid", rep.valid()},
                            {"violations", rep.violations}});
            text << def.name << ": " << G.objects << " objects, " << G.arrows() << " arrows, " << G.orbit_count()
                 << " orbits" << (rep.valid() ? "" : ", INVALID") << '\n';
        }
        out.results["groupoids"] = rows;
        out.exit = ok ? ExitCode::Ok : ExitCode::InvariantFailure;
    } else if (options.op == "inertia") {
        json rows = json::array();
        for (const auto& def : spec.groupoids) {
            const FiniteGroupoid L = inertia_groupoid(built.at(def.name));
            rows.push_back({{"name", def.name},
                            {"objects", L.objects},
                            {"arrows", L.arrows()},
                            {"orbits", L.orbit_count()}});
            text << def.name << ": inertia groupoid with " << L.objects << " loops, " << L.arrows() << " arrows, "
                 << L.orbit_count() << " orbits\n";
        }
        out.results["groupoids"] = rows;
    } else if (options.op == "pullback") {
        if (spec.maps.empty()) throw std::invalid_argument("'pullback' needs at least one 'map'");
        json rows = json::array();
        bool ok = true;
        for (const auto& m : spec.maps) {
            const FiniteGroupoid& G = built.at(m.name);
            for (int y : m.images)
                if (y >= G.objects)
                    throw ParseError("map image " + std::to_string(y) + " is not an object of " + m.name, m.line, 1);
            const FiniteGroupoid P = pullback_groupoid(G, m.images);
            const auto base_orbits = G.orbits();
            const auto cover_orbits = P.orbits();
            // Induced map on orbits: orbit of y goes to the orbit of f(y).
            std::map<int, int> induced;
            bool well_defined = true;
            for (std::size_t y = 0; y < m.images.size(); ++y) {
                const int target = base_orbits[static_cast<std::size_t>(m.images[y])];
                auto [it, fresh] = induced.emplace(cover_orbits[y], target);
                if (!fresh && it->second != target) well_defined = false;
            }
            std::set<int> hit;
            for (const auto& [o, t] : induced) hit.insert(t);
            const bool injective = hit.size() == induced.size();
            const bool surjective = static_cast<int>(hit.size()) == G.orbit_count();
            const bool bijection = well_defined && injective && surjective;
            if (surjective) ok = ok && bijection;
            rows.push_back({{"name", m.name},
                            {"base_orbits", G.orbit_count()},
                            {"pullback_orbits", P.orbit_count()},
                            {"pullback_arrows", P.arrows()},
                            {"surjective_on_orbits", surjective},
                            {"orbit_bijection", bijection}});
            text << "pullback of " << m.name << ": " << P.orbit_count() << " orbits over " << G.orbit_count()
                 << (bijection ? ", orbit bijection\n" : ", no orbit bijection\n");
        }
        out.results["maps"] = rows;
        out.exit = ok ? ExitCode::Ok : ExitCode::InvariantFailure;
    } else if (options.op == "morita") {
        if (spec.maps.size() != 2) throw std::invalid_argument("'morita' needs exactly two 'map' lines");
        const auto& [mf, mg] = std::tie(spec.maps[0], spec.maps[1]);
        for (const auto* m : {&mf, &mg})
            for (int y : m->images)
                if (y >= built.at(m->name).objects)
                    throw ParseError("map image " + std::to_string(y) + " is not an object of " + m->name, m->line,
                                     1);
        const MoritaResult r = morita_check(built.at(mf.name), built.at(mg.name), mf.images, mg.images);
        out.results["verdict"] = to_string(r.verdict);
        out.results["reason"] = r.reason;
        out.results["witness"] = r.witness.has_value();
        text << "morita " << mf.name << " vs " << mg.name << ": " << to_string(r.verdict)
             << (r.reason.empty() ? "" : " (" + r.reason + ")") << '\n';
    } else {
        throw std::invalid_argument("unknown groupoid op '" + options.op + "' (summary, inertia, pullback, morita)");
    }
    out.text = text.str();
    return out;
}

CommandResult cmd_whitney(const ActionSpec& spec, const CommandOptions& options)
{
    const LinearAction action = require_action(spec, "whitney");
    const StratificationResult r = loop_strata(action);
    std::vector<std::pair<int, int>> todo;
    if (options.base || options.upper) {
        if (!options.base || !options.upper) throw std::invalid_argument("--base and --upper go together");
        todo.emplace_back(*options.base, *options.upper);
    } else {
        todo = r.closure.relation;
    }
    auto identity_part = [&](int id) {
        const auto& g = r.strata[static_cast<std::size_t>(id)].group_part;
        if (const int* h = std::get_if<int>(&g)) return *h == 0;
        return std::get<CircleCell>(g) == CircleCell::point(0);
    };

    json probes = json::array();
    bool ok = true;
    std::ostringstream text;
    auto record = [&](const ProbeReport& rep) {
        ok = ok && rep.passed;
        probes.push_back(to_json(rep));
        text << (rep.quotient ? "quotient " : "whitney-b ") << rep.base_stratum << " < " << rep.upper_stratum
             << ": finest angle " << format_double(rep.finest_angle()) << ", trend " << rep.trend() << ", "
             << rep.verdict() << '\n';
    };
    for (const auto& [p, q] : todo) {
        ProbeConfig c;
        c.base_stratum = p;
        c.upper_stratum = q;
        c.seed = options.seed;
        c.samples_per_scale = options.probe_samples;
        c.angle_tolerance = options.tolerance;
        record(probe_whitney_b(r, action, c));
    }
    if (!spec.invariants.empty()) {
        InvariantMap inv{spec.invariants};
        for (const auto& [p, q] : todo) {
            if (todo.size() > 1 && !(identity_part(p) && identity_part(q))) continue;
            ProbeConfig c;
            c.base_stratum = p;
            c.upper_stratum = q;
            c.seed = options.seed;
            c.samples_per_scale = options.probe_samples;
            c.angle_tolerance = options.tolerance;
            record(probe_quotient_whitney(r, action, inv, c));
        }
    }
    CommandResult out;
    out.results = {{"seed", options.seed}, {"probes", probes}, {"passed", ok}};
    out.text = text.str() + (ok ? "all probes pass\n" : "some probes give no numerical evidence\n");
    out.exit = ok ? ExitCode::Ok : ExitCode::InvariantFailure;
    return out;
}

}  // namespace strata::io
