#pragma once

/// Subcommand drivers behind the command-line tool. Kept header-side so the
/// test suite can run the exact pipeline the binary runs, against string
/// streams instead of files.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "mipsym/qubo_io.hpp"
#include "mipsym/report.hpp"

namespace mipsym::cli {

// exit codes: 0 success, 1 usage error, 2 all instances failed
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAllFailed = 2;

struct CommonOptions {
    SignatureConfig signature;
    PenaltyWeights weights;
    std::string format = "csv";  // csv|json
};

struct AnalyzeOptions {
    CommonOptions common;
    std::vector<std::string> paths;
    long long max_n = 0;  ///< 0 = unlimited; larger instances become error rows
    long long max_q = 5000;
    int jobs = 1;
};

namespace detail {

/// Expands directories into the .mps files they contain (sorted); plain
/// files pass through.
inline std::vector<std::string> expand_paths(const std::vector<std::string>& paths) {
    namespace fs = std::filesystem;
    std::vector<std::string> out;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".mps")
                    found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

inline std::string instance_label(const MipInstance& mip, const std::string& path) {
    if (!mip.name.empty()) return mip.name;
    return std::filesystem::path(path).stem().string();
}

inline MipInstance load_instance(const std::string& path, std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<std::string> warnings;
    MipInstance mip = parse_mps(in, &warnings);
    for (const auto& w : warnings) err << "warning: " << path << ": " << w << "\n";
    if (mip.name.empty()) mip.name = std::filesystem::path(path).stem().string();
    return mip;
}

}  // namespace detail

inline int run_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
    auto paths = detail::expand_paths(opt.paths);
    if (paths.empty()) {
        err << "error: no readable inputs\n";
        return kExitUsage;
    }

    auto analyze_one = [&](const std::string& path) {
        InstanceStats s;
        s.name = std::filesystem::path(path).stem().string();
        try {
            std::ostringstream warn_sink;
            MipInstance mip = detail::load_instance(path, warn_sink);
            s.name = mip.name;
            if (opt.max_n > 0 && mip.n > opt.max_n)
                throw std::runtime_error("skipped: n exceeds --max-n");
            s = analyze_instance(mip, opt.common.signature, opt.max_q);
        } catch (const std::exception& e) {
            s.ok = false;
            s.error = e.what();
        }
        return s;
    };

    // bounded worker pool; rows buffered and emitted in input order
    std::vector<InstanceStats> rows(paths.size());
    int jobs = std::max(1, opt.jobs);
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> workers;
    for (int w = 0; w < jobs; ++w)
        workers.push_back(std::async(std::launch::async, [&] {
            for (size_t k; (k = next.fetch_add(1)) < paths.size();) rows[k] = analyze_one(paths[k]);
        }));
    for (auto& f : workers) f.get();

    size_t failures = 0;
    if (opt.common.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : rows) {
            if (!s.ok) ++failures;
            arr.push_back(stats_json(s));
        }
        out << arr.dump(2) << "\n";
    } else {
        out << stats_csv_header() << "\n";
        for (const auto& s : rows) {
            if (!s.ok) ++failures;
            out << stats_csv_row(s) << "\n";
        }
    }
    for (const auto& s : rows)
        if (!s.ok) err << "error: " << s.name << ": " << s.error << "\n";
    return failures == rows.size() ? kExitAllFailed : kExitOk;
}

struct BuildOptions {
    CommonOptions common;
    std::string path;
    std::string form = "reduced";
    std::string fix_mode = "constants";  // constants|penalty, decomposed QUBO only
};

inline int run_build(const BuildOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        MipInstance mip = detail::load_instance(opt.path, err);
        auto spec = FormSpec::parse(opt.form);
        auto part = build_partition(mip, opt.common.signature);
        if (spec.is_plus()) {
            write_quboplus_json(build_quboplus_form(mip, part, spec, opt.common.weights), out);
        } else {
            FixMode mode = opt.fix_mode == "penalty" ? FixMode::penalty : FixMode::constants;
            QuboModel model = build_qubo_form(mip, part, spec, opt.common.weights, mode);
            write_qubo(model, out, mip.name + " " + spec.name());
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

struct DetectRunOptions {
    CommonOptions common;
    std::string path;
    std::string form = "reduced";
    AnnealConfig anneal;
    int exact_limit = 24;
    bool use_brute_force = false;
};

inline int run_detect(const DetectRunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        MipInstance mip = detail::load_instance(opt.path, err);
        DetectOptions d;
        d.form = FormSpec::parse(opt.form);
        d.signature = opt.common.signature;
        d.weights = opt.common.weights;
        d.anneal = opt.anneal;
        d.exact_limit = opt.exact_limit;
        d.use_brute_force = opt.use_brute_force;
        out << detect_report(mip, d).dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

struct EstimateOptions {
    CommonOptions common;
    long long q = 0;   ///< estimate directly from a variable count, or
    std::string path;  ///< from an instance's reduced formulation size
};

inline int run_estimate(const EstimateOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        long long q = opt.q;
        if (q <= 0) {
            if (opt.path.empty()) throw std::invalid_argument("need --q or --mps");
            MipInstance mip = detail::load_instance(opt.path, err);
            auto part = build_partition(mip, opt.common.signature);
            q = part.nu + part.mu;
        }
        auto z = zephyr_estimate(q);
        if (opt.common.format == "json") {
            nlohmann::json j;
            j["q"] = z.q;
            j["g"] = z.g;
            j["qubit_bound"] = z.qubit_bound;
            j["zephyr_total"] = z.zephyr_total;
            out << j.dump(2) << "\n";
        } else {
            out << "q,g,qubit_bound,zephyr_total\n"
                << z.q << "," << z.g << "," << z.qubit_bound << "," << z.zephyr_total << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

struct RegressOptions {
    CommonOptions common;
    std::string stats_path;  ///< CSV produced by analyze
};

inline int run_regress(const RegressOptions& opt, std::istream& stats_in, std::ostream& out,
                       std::ostream& err) {
    try {
        auto stats = parse_stats_csv(stats_in);
        RegressResult r = regress_stats(stats);
        auto opt_json = [](const std::optional<double>& v) {
            return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
        };
        auto opt_csv = [](const std::optional<double>& v) {
            return v ? mipsym::detail::fmt6(*v) : std::string{};
        };
        if (opt.common.format == "json") {
            nlohmann::json j;
            j["nu_exponent"] = opt_json(r.nu_exponent);
            j["mu_exponent"] = opt_json(r.mu_exponent);
            j["points_nu"] = r.points_nu;
            j["points_mu"] = r.points_mu;
            j["points_slope"] = r.points_slope;
            j["qubits_per_term"] = opt_json(r.qubits_per_term);
            out << j.dump(2) << "\n";
        } else {
            out << "metric,value,points\n";
            out << "nu_exponent," << opt_csv(r.nu_exponent) << "," << r.points_nu << "\n";
            out << "mu_exponent," << opt_csv(r.mu_exponent) << "," << r.points_mu << "\n";
            out << "qubits_per_term," << opt_csv(r.qubits_per_term) << "," << r.points_slope
                << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace mipsym::cli
