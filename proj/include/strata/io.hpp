#pragma once

// Input files, canonical digests, and the report builders behind strata-lab.
//
// Input grammar (one statement per line, `#` starts a comment):
//
//   kind finite-matrix | circle-weights | finite-groupoid
//   dim N
//   generator r11 r12 ... ; r21 ... ; ...     rows separated by `;`
//   weights n1 n2 ...
//   trivial N
//   frame r11 ... ; ...
//   cap N
//   invariant <polynomial>
//
//   groupoid NAME            finite-groupoid files
//     pair N
//     perm i0 i1 ...         generator of a permutation group
//     acting-on points | single | self
//   end
//   cover N
//   map NAME y0 y1 ...
//
// Numbers are exact integers or fractions p/q.

#include "strata/forms.hpp"
#include "strata/groupoid.hpp"
#include "strata/strata.hpp"
#include "strata/validate.hpp"
#include "strata/whitney.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace strata::io {

inline constexpr const char* kToolName = "strata-lab";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum class ExitCode { Ok = 0, InvariantFailure = 1, Usage = 2, Cap = 3 };

struct GroupoidDef {
    std::string name;
    int line = 0;
    std::optional<int> pair;
    std::vector<std::vector<int>> perms;
    std::string acting_on = "points";

    /// Throws CapExceeded when the permutation group exceeds `cap`.
    FiniteGroupoid build(std::size_t cap) const;
};

struct MapDef {
    std::string name;
    int line = 0;
    std::vector<int> images;
};

struct ActionSpec {
    enum class Kind { FiniteMatrix, CircleWeights, FiniteGroupoid };

    Kind kind = Kind::FiniteMatrix;
    std::size_t dim = 0;
    std::vector<RationalMatrix> generators;
    std::vector<long> weights;
    std::size_t trivial = 0;
    std::optional<RationalMatrix> frame;
    std::size_t cap = kDefaultGroupCap;
    std::vector<PolyForm> invariants;
    std::vector<GroupoidDef> groupoids;
    std::optional<int> cover;
    std::vector<MapDef> maps;

    bool is_action() const { return kind != Kind::FiniteGroupoid; }
    /// Throws CapExceeded for a finite group past `cap`.
    LinearAction action() const;
    /// Whitespace- and comment-free normal form; equal iff the inputs agree.
    std::string canonical() const;
    /// "sha256:" followed by the hex digest of `canonical()`.
    std::string digest() const;
};

std::string kind_name(ActionSpec::Kind kind);

/// Throws ParseError with 1-based line and column.
ActionSpec parse_spec(std::string_view text);
ActionSpec load_spec(const std::string& path);

std::string sha256_hex(std::string_view data);

struct CommandOptions {
    std::uint64_t seed = 1;
    bool inertia = false;
    int max_degree = 5;
    std::string op = "summary";
    std::optional<int> base;
    std::optional<int> upper;
    std::size_t samples = 2000;
    std::size_t probe_samples = 32;
    double tolerance = 1e-6;
    std::optional<nlohmann::json> check;  // an earlier strata report
};

struct CommandResult {
    nlohmann::json results;
    std::string text;
    std::string dot;
    ExitCode exit = ExitCode::Ok;
};

CommandResult cmd_strata(const ActionSpec& spec, const CommandOptions& options);
CommandResult cmd_validate(const ActionSpec& spec, const CommandOptions& options);
CommandResult cmd_derham(const ActionSpec& spec, const CommandOptions& options);
CommandResult cmd_groupoid(const ActionSpec& spec, const CommandOptions& options);
CommandResult cmd_whitney(const ActionSpec& spec, const CommandOptions& options);

/// Report envelope around a command's results.
nlohmann::json make_report(const std::string& command, const ActionSpec& spec, const CommandResult& result,
                           std::optional<double> seconds = std::nullopt);

/// Hasse diagram with id, group part, isotropy, dim and depth in every label.
std::string to_dot(const StratificationResult& result);

nlohmann::json to_json(const StratificationResult& result);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const BasicCohomology& cohomology);
nlohmann::json to_json(const ProbeReport& report);

/// Closure order stated by the `hasse` edges of a strata report.
ClosureOrder closure_from_report(const nlohmann::json& report, std::size_t count);

}  // namespace strata::io
