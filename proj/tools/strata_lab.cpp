// strata-lab: loop-space stratifications, basic cohomology, groupoid checks
// and Whitney probes for linear actions described in a text file.

#include "strata/io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

using namespace strata;
using namespace strata::io;

namespace {

struct Common {
    std::string input;
    std::string json_path;
    std::string dot_path;
    std::string format = "text";
    std::uint64_t seed = 1;
    std::optional<std::size_t> cap;
    bool timing = false;
};

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Orbit Cartan type stratifications of linear loop spaces"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Common common;
    CommandOptions options;
    std::string check_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input,-i", common.input, "Input file")->required()->check(CLI::ExistingFile);
        sub->add_option("--json", common.json_path, "Write the JSON report to FILE");
        sub->add_option("--format", common.format, "Standard output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--seed", common.seed, "Random seed");
        sub->add_option("--cap", common.cap, "Group order cap")->check(CLI::PositiveNumber);
        sub->add_flag("--timing", common.timing, "Include wall-clock time in the report");
    };

    CLI::App* strata_cmd = app.add_subcommand("strata", "Loop strata, closure order and depths");
    add_common(strata_cmd);
    strata_cmd->add_option("--dot", common.dot_path, "Write the Hasse diagram in DOT format");
    strata_cmd->add_flag("--inertia", options.inertia, "Also report the inertia-space pieces");

    CLI::App* validate_cmd = app.add_subcommand("validate", "Sampling checks of partition, frontier and cones");
    add_common(validate_cmd);
    validate_cmd->add_option("--check-file", check_path, "Strata JSON report whose Hasse edges are checked")
        ->check(CLI::ExistingFile);
    validate_cmd->add_option("--samples", options.samples, "Loop points sampled for the partition check");

    CLI::App* derham_cmd = app.add_subcommand("derham", "Basic cohomology of polynomial forms");
    add_common(derham_cmd);
    derham_cmd->add_option("--max-degree", options.max_degree, "Coefficient degree bound D")
        ->check(CLI::NonNegativeNumber);

    CLI::App* groupoid_cmd = app.add_subcommand("groupoid", "Finite groupoid operations");
    add_common(groupoid_cmd);
    groupoid_cmd->add_option("--op", options.op, "summary, inertia, pullback or morita")
        ->check(CLI::IsMember({"summary", "inertia", "pullback", "morita"}));

    CLI::App* whitney_cmd = app.add_subcommand("whitney", "Numerical Whitney condition B probes");
    add_common(whitney_cmd);
    whitney_cmd->add_option("--base", options.base, "Base stratum id");
    whitney_cmd->add_option("--upper", options.upper, "Upper stratum id");
    whitney_cmd->add_option("--samples", options.probe_samples, "Samples per scale")->check(CLI::PositiveNumber);
    whitney_cmd->add_option("--tolerance", options.tolerance, "Angle tolerance at the finest scale")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    const auto start = std::chrono::steady_clock::now();
    try {
        ActionSpec spec = load_spec(common.input);
        if (common.cap) spec.cap = *common.cap;
        options.seed = common.seed;
        if (!check_path.empty()) {
            std::ifstream in(check_path);
            try {
                options.check = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(check_path + ": " + e.what(), 1, 1);
            }
        }

        CommandResult result;
        if (command == "strata") result = cmd_strata(spec, options);
        else if (command == "validate") result = cmd_validate(spec, options);
        else if (command == "derham") result = cmd_derham(spec, options);
        else if (command == "groupoid") result = cmd_groupoid(spec, options);
        else result = cmd_whitney(spec, options);

        std::optional<double> seconds;
        if (common.timing)
            seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const nlohmann::json report = make_report(command, spec, result, seconds);
        if (!common.json_path.empty()) write_file(common.json_path, report.dump(2) + "\n");
        if (!common.dot_path.empty()) write_file(common.dot_path, result.dot);
        if (common.format == "json") std::cout << report.dump(2) << '\n';
        else std::cout << result.text;
        return static_cast<int>(result.exit);
    } catch (const ParseError& e) {
        std::cerr << common.input << ":" << e.line() << ":" << e.column() << ": error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Cap);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::InvariantFailure);
    }
}
