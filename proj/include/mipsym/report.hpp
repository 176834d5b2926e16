#pragma once

/// Instance statistics, symmetry reports and stats regressions — the layer
/// the CLI subcommands are built from.

#include <chrono>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "mipsym/build.hpp"
#include "mipsym/estimate.hpp"
#include "mipsym/mps.hpp"
#include "mipsym/sample.hpp"
#include "mipsym/symmetry.hpp"

namespace mipsym {

struct InstanceStats {
    std::string name;
    bool ok = false;
    std::string error;

    int n = 0, m = 0;
    long long nu = 0, mu = 0;
    long long q_full = 0, q_reduced = 0;
    double ratio_reduced = 0.0;
    int max_class_size = 0;
    long long q_maxdecomp = 0;
    double ratio_maxdecomp = 0.0;
    long long zephyr_g = 0, qubit_bound = 0;
    std::optional<std::size_t> n_terms_reduced;  ///< absent when skipped by the size guard
};

/// Computes the per-instance statistics row. Building the reduced model for
/// the term count is skipped when q_reduced exceeds max_build_q (0 disables
/// the guard).
inline InstanceStats analyze_instance(const MipInstance& mip, const SignatureConfig& cfg,
                                      long long max_build_q = 5000) {
    if (mip.n < 1) throw std::invalid_argument("instance has no variables");
    InstanceStats s;
    s.name = mip.name;
    s.n = mip.n;
    s.m = mip.m;
    auto part = build_partition(mip, cfg);
    s.nu = part.nu;
    s.mu = part.mu;
    s.q_full = static_cast<long long>(mip.n) * mip.n + static_cast<long long>(mip.m) * mip.m;
    s.q_reduced = part.nu + part.mu;
    s.ratio_reduced = static_cast<double>(s.q_reduced) / static_cast<double>(s.q_full);
    auto [class_id, size] = max_decomp_class(part);
    (void)class_id;
    s.max_class_size = size;
    s.q_maxdecomp = static_cast<long long>(size) * size + (mip.n - size) + part.mu;
    s.ratio_maxdecomp = static_cast<double>(s.q_maxdecomp) / static_cast<double>(s.q_full);
    auto z = zephyr_estimate(s.q_reduced);
    s.zephyr_g = z.g;
    s.qubit_bound = z.qubit_bound;
    if (mip.m >= 1 && (max_build_q <= 0 || s.q_reduced <= max_build_q))
        s.n_terms_reduced = count_terms(build_reduced(mip, part)).total;
    s.ok = true;
    return s;
}

namespace detail {

inline std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

inline std::string fmt_ratio(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
}

}  // namespace detail

inline std::string stats_csv_header() {
    return "name,n,m,nu,mu,q_full,q_reduced,ratio_reduced,max_class_size,q_maxdecomp,"
           "ratio_maxdecomp,zephyr_g,qubit_bound,n_terms_reduced,error";
}

inline std::string stats_csv_row(const InstanceStats& s) {
    std::ostringstream out;
    out << s.name << ",";
    if (s.ok) {
        out << s.n << "," << s.m << "," << s.nu << "," << s.mu << "," << s.q_full << ","
            << s.q_reduced << "," << detail::fmt_ratio(s.ratio_reduced) << "," << s.max_class_size
            << "," << s.q_maxdecomp << "," << detail::fmt_ratio(s.ratio_maxdecomp) << ","
            << s.zephyr_g << "," << s.qubit_bound << ",";
        if (s.n_terms_reduced) out << *s.n_terms_reduced;
        out << ",";
    } else {
        out << ",,,,,,,,,,,,," << s.error;
    }
    return out.str();
}

inline nlohmann::json stats_json(const InstanceStats& s) {
    nlohmann::json j;
    j["name"] = s.name;
    if (!s.ok) {
        j["error"] = s.error;
        return j;
    }
    j["n"] = s.n;
    j["m"] = s.m;
    j["nu"] = s.nu;
    j["mu"] = s.mu;
    j["q_full"] = s.q_full;
    j["q_reduced"] = s.q_reduced;
    j["ratio_reduced"] = s.ratio_reduced;
    j["max_class_size"] = s.max_class_size;
    j["q_maxdecomp"] = s.q_maxdecomp;
    j["ratio_maxdecomp"] = s.ratio_maxdecomp;
    j["zephyr_g"] = s.zephyr_g;
    j["qubit_bound"] = s.qubit_bound;
    if (s.n_terms_reduced)
        j["n_terms_reduced"] = *s.n_terms_reduced;
    else
        j["n_terms_reduced"] = nullptr;
    return j;
}

enum class Form { full, reduced, decomposed, plus_full, plus_reduced, plus_decomposed };

struct FormSpec {
    Form form = Form::reduced;
    int class_id = -1;  ///< decomposition class for the decomposed forms

    static FormSpec parse(const std::string& text) {
        FormSpec f;
        auto with_class = [&](Form form, const std::string& rest) {
            f.form = form;
            size_t used = 0;
            f.class_id = std::stoi(rest, &used);
            if (used != rest.size())
                throw std::invalid_argument("bad decomposition class '" + rest + "'");
        };
        if (text == "full")
            f.form = Form::full;
        else if (text == "reduced")
            f.form = Form::reduced;
        else if (text == "plus-full")
            f.form = Form::plus_full;
        else if (text == "plus-reduced")
            f.form = Form::plus_reduced;
        else if (text.rfind("decomp:", 0) == 0)
            with_class(Form::decomposed, text.substr(7));
        else if (text.rfind("plus-decomp:", 0) == 0)
            with_class(Form::plus_decomposed, text.substr(12));
        else
            throw std::invalid_argument("unknown form '" + text + "'");
        return f;
    }

    bool is_plus() const {
        return form == Form::plus_full || form == Form::plus_reduced ||
               form == Form::plus_decomposed;
    }

    std::string name() const {
        switch (form) {
            case Form::full: return "full";
            case Form::reduced: return "reduced";
            case Form::decomposed: return "decomp:" + std::to_string(class_id);
            case Form::plus_full: return "plus-full";
            case Form::plus_reduced: return "plus-reduced";
            case Form::plus_decomposed: return "plus-decomp:" + std::to_string(class_id);
        }
        return "?";
    }
};

inline QuboPlusModel build_quboplus_form(const MipInstance& mip,
                                         const ReasonabilityPartition& part, const FormSpec& spec,
                                         const PenaltyWeights& weights = {}) {
    switch (spec.form) {
        case Form::plus_full: return build_quboplus_full(mip, part, weights);
        case Form::plus_reduced: return build_quboplus_reduced(mip, part, weights);
        case Form::plus_decomposed:
            return build_quboplus_decomposed(mip, part, spec.class_id, weights);
        default: throw std::invalid_argument("not a QUBO-Plus form");
    }
}

/// Builds the sampling model for any form; QUBO-Plus forms are reduced to
/// plain QUBOs with unit constraint penalty.
inline QuboModel build_qubo_form(const MipInstance& mip, const ReasonabilityPartition& part,
                                 const FormSpec& spec, const PenaltyWeights& weights = {},
                                 FixMode fix_mode = FixMode::constants) {
    switch (spec.form) {
        case Form::full: return build_full(mip, part, weights);
        case Form::reduced: return build_reduced(mip, part, weights);
        case Form::decomposed: return build_decomposed(mip, part, spec.class_id, weights, fix_mode);
        default: return quboplus_to_qubo(build_quboplus_form(mip, part, spec, weights), 1.0);
    }
}

struct DetectOptions {
    FormSpec form;
    SignatureConfig signature;
    PenaltyWeights weights;
    AnnealConfig anneal;
    int exact_limit = 24;
    bool use_brute_force = false;  ///< bypass the QUBO and enumerate directly
    long long brute_limit = 1000000;
};

/// Runs detection end to end and assembles the report. Every generator in
/// the report has been re-verified against the instance; assignments that
/// fail verification are counted, never emitted.
inline nlohmann::json detect_report(const MipInstance& mip, const DetectOptions& opt) {
    auto part = build_partition(mip, opt.signature);
    nlohmann::json report;
    report["instance"] = mip.name;
    report["form"] = opt.form.name();

    std::vector<SymmetryPair> pairs;
    int rejected = 0;
    std::string source;

    if (opt.use_brute_force) {
        source = "brute";
        pairs = brute_force_symmetries(mip, part, opt.brute_limit);
    } else {
        QuboModel model = build_qubo_form(mip, part, opt.form, opt.weights);
        std::vector<std::vector<uint8_t>> zeros;
        if (model.registry().size() <= opt.exact_limit) {
            source = "exact";
            for (auto& hit : enumerate_exact(model, opt.exact_limit, 0.0))
                zeros.push_back(std::move(hit.assignment));
        } else {
            source = "anneal";
            report["seed"] = opt.anneal.seed;
            zeros = anneal(model, opt.anneal).zero_energy;
        }
        for (const auto& bits : zeros) {
            DecodedSymmetry d = decode_and_verify(mip, model.registry(), bits, opt.signature);
            if (d.is_symmetry)
                pairs.push_back({std::move(d.pi), std::move(d.sigma)});
            else
                ++rejected;
        }
    }

    // one generator per distinct pi, first witnessing sigma kept
    std::set<std::vector<int>> seen;
    report["generators"] = nlohmann::json::array();
    std::vector<std::vector<int>> pis;
    for (const auto& p : pairs) {
        if (!seen.insert(p.pi).second) continue;
        pis.push_back(p.pi);
        nlohmann::json g;
        g["pi"] = p.pi;
        g["sigma"] = p.sigma;
        g["verified"] = true;
        report["generators"].push_back(std::move(g));
    }
    report["orbits"] = orbits(mip.n, pis);
    report["source"] = source;
    report["verified"] = (rejected == 0);
    report["rejected_assignments"] = rejected;
    return report;
}

struct RegressResult {
    /// Absent when the fit is undefined on the data (e.g. every m equals 1,
    /// so mu ~ m^k carries no information).
    std::optional<double> nu_exponent;
    std::optional<double> mu_exponent;
    std::optional<double> qubits_per_term;
    int points_nu = 0, points_mu = 0, points_slope = 0;
};

/// Power fits nu ~ n^k and mu ~ m^k plus the zero-intercept linear fit of
/// qubit_bound against the reduced term count, over the usable stats rows.
inline RegressResult regress_stats(const std::vector<InstanceStats>& stats) {
    std::vector<std::pair<double, double>> nu_pts, mu_pts, slope_pts;
    for (const auto& s : stats) {
        if (!s.ok) continue;
        if (s.n > 0 && s.nu > 0) nu_pts.emplace_back(s.n, static_cast<double>(s.nu));
        if (s.m > 0 && s.mu > 0) mu_pts.emplace_back(s.m, static_cast<double>(s.mu));
        if (s.n_terms_reduced && *s.n_terms_reduced > 0)
            slope_pts.emplace_back(static_cast<double>(*s.n_terms_reduced),
                                   static_cast<double>(s.qubit_bound));
    }
    if (nu_pts.size() < 2 || mu_pts.size() < 2)
        throw std::invalid_argument("regress: need at least 2 usable rows");
    auto fit_if_informative = [](const std::vector<std::pair<double, double>>& pts)
        -> std::optional<double> {
        for (const auto& [x, y] : pts) {
            (void)y;
            if (x != 1.0) return power_fit(pts);
        }
        return std::nullopt;
    };
    RegressResult r;
    r.nu_exponent = fit_if_informative(nu_pts);
    r.mu_exponent = fit_if_informative(mu_pts);
    r.points_nu = static_cast<int>(nu_pts.size());
    r.points_mu = static_cast<int>(mu_pts.size());
    r.points_slope = static_cast<int>(slope_pts.size());
    if (slope_pts.size() >= 2) r.qubits_per_term = linear_fit_through_origin(slope_pts);
    return r;
}

/// Parses rows previously written by stats_csv_row (used by the regress
/// subcommand; unknown or error rows come back with ok = false).
inline std::vector<InstanceStats> parse_stats_csv(std::istream& in) {
    std::vector<InstanceStats> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("name,", 0) == 0) continue;  // header
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        fields.resize(15);
        InstanceStats s;
        s.name = fields[0];
        try {
            s.n = std::stoi(fields[1]);
            s.m = std::stoi(fields[2]);
            s.nu = std::stoll(fields[3]);
            s.mu = std::stoll(fields[4]);
            s.q_full = std::stoll(fields[5]);
            s.q_reduced = std::stoll(fields[6]);
            s.ratio_reduced = std::stod(fields[7]);
            s.max_class_size = std::stoi(fields[8]);
            s.q_maxdecomp = std::stoll(fields[9]);
            s.ratio_maxdecomp = std::stod(fields[10]);
            s.zephyr_g = std::stoll(fields[11]);
            s.qubit_bound = std::stoll(fields[12]);
            if (!fields[13].empty())
                s.n_terms_reduced = static_cast<std::size_t>(std::stoull(fields[13]));
            s.ok = true;
        } catch (const std::exception&) {
            s.ok = false;
            s.error = fields[14].empty() ? "unparseable row" : fields[14];
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace mipsym
