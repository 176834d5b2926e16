// Command-line front end: analyze | build | detect | estimate | regress.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mipsym/cli.hpp"

namespace {

struct OutputTarget {
    std::string path;  // empty = stdout

    int write(const std::function<int(std::ostream&)>& fn) const {
        if (path.empty()) return fn(std::cout);
        std::ofstream out(path);
        if (!out) {
            std::cerr << "error: cannot write '" << path << "'\n";
            return mipsym::cli::kExitUsage;
        }
        return fn(out);
    }
};

void add_signature_flags(CLI::App* cmd, mipsym::SignatureConfig& cfg) {
    cmd->add_flag("--sharpen-var-degree", cfg.sharpen_var_degree,
                  "split variable classes by constraint-appearance count");
    cmd->add_flag("--sharpen-con-size", cfg.sharpen_con_size,
                  "split constraint classes by nonzero count");
    cmd->add_flag_function(
        "--no-bounds-signature", [&cfg](int64_t) { cfg.use_bounds = false; },
        "ignore variable bounds when grouping");
    cmd->add_flag_function(
        "--no-sense-signature", [&cfg](int64_t) { cfg.use_sense = false; },
        "ignore constraint senses when grouping");
    cmd->add_flag_function(
        "--no-value-profile", [&cfg](int64_t) { cfg.use_value_profile = false; },
        "ignore the multiset of coefficient values when grouping");
    cmd->add_option("--coeff-tolerance-digits", cfg.tolerance_digits,
                    "bucket coefficients to this many significant digits (0 = exact)")
        ->check(CLI::Range(0, 17));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIP formulation-symmetry detection via QUBO formulations"};
    app.require_subcommand(1);

    mipsym::cli::AnalyzeOptions analyze;
    mipsym::cli::BuildOptions build;
    mipsym::cli::DetectRunOptions detect;
    mipsym::cli::EstimateOptions estimate;
    mipsym::cli::RegressOptions regress;
    OutputTarget out;

    auto* cmd_analyze =
        app.add_subcommand("analyze", "per-instance formulation statistics (CSV/JSON)");
    cmd_analyze->add_option("paths", analyze.paths, "MPS files or directories")->required();
    cmd_analyze->add_option("--format", analyze.common.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_analyze->add_option("--out", out.path, "output file (default stdout)");
    cmd_analyze->add_option("--jobs", analyze.jobs, "parallel workers")->check(CLI::Range(1, 256));
    cmd_analyze->add_option("--max-n", analyze.max_n, "skip instances with more variables");
    cmd_analyze->add_option("--max-q", analyze.max_q,
                            "skip the reduced-model term count above this size (0 = no limit)");
    add_signature_flags(cmd_analyze, analyze.common.signature);

    auto* cmd_build = app.add_subcommand("build", "emit a formulation (.qubo text or JSON)");
    cmd_build->add_option("--mps", build.path, "MPS instance")->required();
    cmd_build
        ->add_option("--form", build.form,
                     "full|reduced|decomp:<class>|plus-full|plus-reduced|plus-decomp:<class>")
        ->required();
    cmd_build->add_option("--fix-mode", build.fix_mode, "constants|penalty (decomposed QUBO)")
        ->check(CLI::IsMember({"constants", "penalty"}));
    cmd_build->add_option("--out", out.path, "output file (default stdout)");
    add_signature_flags(cmd_build, build.common.signature);

    auto* cmd_detect = app.add_subcommand("detect", "detect symmetries and report orbits (JSON)");
    cmd_detect->add_option("--mps", detect.path, "MPS instance")->required();
    cmd_detect->add_option("--form", detect.form, "formulation to solve (default reduced)");
    cmd_detect->add_option("--seed", detect.anneal.seed, "annealer seed");
    cmd_detect->add_option("--restarts", detect.anneal.restarts, "annealer restarts");
    cmd_detect->add_option("--sweeps", detect.anneal.sweeps, "sweeps per restart");
    cmd_detect->add_option("--exact-limit", detect.exact_limit,
                           "exhaustive enumeration up to this many variables");
    cmd_detect->add_flag("--brute", detect.use_brute_force,
                         "enumerate reasonable permutations directly instead of sampling");
    cmd_detect->add_option("--out", out.path, "output file (default stdout)");
    add_signature_flags(cmd_detect, detect.common.signature);

    auto* cmd_estimate = app.add_subcommand("estimate", "Zephyr qubit bound for a QUBO size");
    cmd_estimate->add_option("--q", estimate.q, "QUBO variable count");
    cmd_estimate->add_option("--mps", estimate.path, "instance (uses its reduced size)");
    cmd_estimate->add_option("--format", estimate.common.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_estimate->add_option("--out", out.path, "output file (default stdout)");
    add_signature_flags(cmd_estimate, estimate.common.signature);

    auto* cmd_regress = app.add_subcommand("regress", "fit nu~n^k, mu~m^k over an analyze CSV");
    cmd_regress->add_option("--stats", regress.stats_path, "CSV written by analyze")->required();
    cmd_regress->add_option("--format", regress.common.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_regress->add_option("--out", out.path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : mipsym::cli::kExitUsage;
    }

    if (cmd_analyze->parsed())
        return out.write([&](std::ostream& os) {
            return mipsym::cli::run_analyze(analyze, os, std::cerr);
        });
    if (cmd_build->parsed())
        return out.write(
            [&](std::ostream& os) { return mipsym::cli::run_build(build, os, std::cerr); });
    if (cmd_detect->parsed())
        return out.write(
            [&](std::ostream& os) { return mipsym::cli::run_detect(detect, os, std::cerr); });
    if (cmd_estimate->parsed())
        return out.write(
            [&](std::ostream& os) { return mipsym::cli::run_estimate(estimate, os, std::cerr); });
    if (cmd_regress->parsed()) {
        std::ifstream stats(regress.stats_path);
        if (!stats) {
            std::cerr << "error: cannot open '" << regress.stats_path << "'\n";
            return mipsym::cli::kExitUsage;
        }
        return out.write([&](std::ostream& os) {
            return mipsym::cli::run_regress(regress, stats, os, std::cerr);
        });
    }
    return mipsym::cli::kExitUsage;
}
