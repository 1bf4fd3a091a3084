#pragma once

#include <filesystem>
#include <fstream>
#include <map>

#include "tshift/build.hpp"
#include "tshift/cauchy.hpp"
#include "tshift/dynamics.hpp"
#include "tshift/inner.hpp"

namespace tshift {

/// 17 significant digits: lossless for IEEE doubles.
inline std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericError("cannot open " + path.string() + " for writing");
    out << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// CSV exports

inline std::string trace_csv(const RefinementTrace& trace) {
    std::string s = "epsilon,partial_integral\n";
    for (const auto& [eps, p] : trace.entries)
        s += fmt17(eps) + "," + fmt17(p) + "\n";
    return s;
}

inline std::string growth_csv(const GrowthReport& rep) {
    std::string s = "k,sup_derivative,bound_value,ratio\n";
    for (std::size_t i = 0; i < rep.k_values.size(); ++i) {
        double ratio = rep.sup_derivatives[i] / rep.bound_values[i];
        s += std::to_string(rep.k_values[i]) + "," + fmt17(rep.sup_derivatives[i]) + "," +
             fmt17(rep.bound_values[i]) + "," + fmt17(ratio) + "\n";
    }
    return s;
}

inline std::string w_bound_csv(const WBoundReport& rep) {
    std::string s = "k,sup_w,bound_value,ratio\n";
    for (std::size_t i = 0; i < rep.k_values.size(); ++i) {
        double ratio = rep.sup_w[i] / rep.bound_values[i];
        s += std::to_string(rep.k_values[i]) + "," + fmt17(rep.sup_w[i]) + "," +
             fmt17(rep.bound_values[i]) + "," + fmt17(ratio) + "\n";
    }
    return s;
}

inline std::string density_csv(const DensityReport& rep) {
    std::string s = "target,K,residual,condition_estimate\n";
    for (const DensityRow& r : rep.rows)
        s += r.target + "," + std::to_string(r.K) + "," + fmt17(r.residual) + "," +
             fmt17(r.condition_estimate) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// JSON exports

inline nlohmann::ordered_json quad_to_json(const QuadResult& q) {
    return {{"value", {q.value.real(), q.value.imag()}},
            {"error_estimate", q.error_estimate},
            {"cells_used", q.cells_used},
            {"max_depth_hit", q.max_depth_hit},
            {"converged", q.converged}};
}

inline nlohmann::ordered_json eigen_to_json(const EigenClassification& e,
                                            const std::string& trace_path) {
    nlohmann::ordered_json j{{"lambda", {e.lambda.real(), e.lambda.imag()}},
                             {"verdict", to_string(e.verdict)},
                             {"trace_file", trace_path}};
    if (e.norm_if_member) j["norm_if_member"] = *e.norm_if_member;
    return j;
}

inline nlohmann::ordered_json certificate_to_json(const StageCertificate& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["r_n"] = c.r_n;
    j["z_angles"] = c.z_angles;
    j["new_anchor_angles"] = c.new_anchor_angles;
    j["sup_error"] = c.sup_error;
    j["sup_bound"] = c.sup_bound;
    j["integral_R"] = c.integral_R;
    j["integral_R_err"] = c.integral_R_err;
    j["integral_gamma"] = c.integral_gamma;
    j["integral_gamma_err"] = c.integral_gamma_err;
    j["integral_bound"] = c.integral_bound;
    j["delta_n"] = c.delta_n;
    j["rho_n"] = c.rho_n;
    j["pass"] = c.pass;
    auto appr = nlohmann::ordered_json::array();
    for (const RationalCombo& R : c.approximants) appr.push_back(combo_to_json(R));
    j["approximants"] = std::move(appr);
    return j;
}

inline StageCertificate certificate_from_json(const nlohmann::json& j) {
    StageCertificate c;
    c.n = j.at("n").get<int>();
    c.r_n = j.at("r_n").get<double>();
    c.z_angles = j.at("z_angles").get<std::vector<double>>();
    c.new_anchor_angles = j.at("new_anchor_angles").get<std::vector<double>>();
    c.sup_error = j.at("sup_error").get<std::vector<double>>();
    c.sup_bound = j.at("sup_bound").get<double>();
    c.integral_R = j.at("integral_R").get<std::vector<double>>();
    c.integral_R_err = j.at("integral_R_err").get<std::vector<double>>();
    c.integral_gamma = j.at("integral_gamma").get<std::vector<double>>();
    c.integral_gamma_err = j.at("integral_gamma_err").get<std::vector<double>>();
    c.integral_bound = j.at("integral_bound").get<double>();
    c.delta_n = j.at("delta_n").get<double>();
    c.rho_n = j.at("rho_n").get<double>();
    c.pass = j.at("pass").get<bool>();
    for (const auto& a : j.at("approximants")) c.approximants.push_back(combo_from_json(a));
    return c;
}

inline nlohmann::ordered_json certificates_to_json(const DomainSpec& dom,
                                                   const std::vector<StageCertificate>& cs) {
    nlohmann::ordered_json j;
    j["domain_digest"] = domain_digest(dom);
    auto arr = nlohmann::ordered_json::array();
    for (const StageCertificate& c : cs) arr.push_back(certificate_to_json(c));
    j["stages"] = std::move(arr);
    return j;
}

inline nlohmann::ordered_json witness_to_json(const MixingWitness& w) {
    return {{"success", w.success},
            {"n", w.n},
            {"err_start", w.err_start},
            {"err_end", w.err_end},
            {"err_start_quad", w.err_start_quad},
            {"err_end_quad", w.err_end_quad},
            {"interior_residual", w.interior_residual},
            {"exterior_residual", w.exterior_residual},
            {"u", combo_to_json(w.u)},
            {"interior_part", combo_to_json(w.interior_part)},
            {"exterior_part", combo_to_json(w.exterior_part)}};
}

inline nlohmann::ordered_json zspec_to_json(const ZSpec& z) {
    nlohmann::ordered_json j;
    j["kind"] = z.kind == ZSpec::Kind::finite_list ? "finite-list" : "accumulating-sequence";
    j["angles"] = z.angles;
    if (z.accumulation_point) j["accumulation_point"] = *z.accumulation_point;
    return j;
}

inline ZSpec zspec_from_json(const nlohmann::json& j) {
    ZSpec z;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite-list") z.kind = ZSpec::Kind::finite_list;
    else if (kind == "accumulating-sequence") z.kind = ZSpec::Kind::accumulating_sequence;
    else throw PreconditionError("ZSpec: unknown kind '" + kind + "'");
    z.angles = j.at("angles").get<std::vector<double>>();
    if (j.contains("accumulation_point"))
        z.accumulation_point = j.at("accumulation_point").get<double>();
    z.validate();
    return z;
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    std::string command;
    std::string domain_file;
    std::optional<ZSpec> z_spec;
    std::map<std::string, double> tolerances;
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    int stages = 3;
    bool quiet = false;
    std::map<std::string, double> params;       // per-command numeric knobs
    std::map<std::string, std::string> options; // per-command string knobs

    void validate() const {
        static const std::vector<std::string> cmds{"build",  "eigen",  "density",
                                                   "mixing", "growth", "integrate",
                                                   "render", "verify"};
        bool ok = false;
        for (const auto& c : cmds) ok = ok || c == command;
        if (!ok) throw PreconditionError("RunConfig: unknown command '" + command + "'");
        for (const auto& [k, v] : tolerances)
            if (!(v > 0.0))
                throw PreconditionError("RunConfig: tolerance '" + k + "' must be positive");
    }

    double tol(const std::string& name, double fallback) const {
        auto it = tolerances.find(name);
        return it == tolerances.end() ? fallback : it->second;
    }

    double param(const std::string& name, double fallback) const {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }

    std::string option(const std::string& name, const std::string& fallback) const {
        auto it = options.find(name);
        return it == options.end() ? fallback : it->second;
    }
};

inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["domain_file"] = c.domain_file;
    if (c.z_spec) j["z_spec"] = zspec_to_json(*c.z_spec);
    j["tolerances"] = c.tolerances;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["stages"] = c.stages;
    j["quiet"] = c.quiet;
    j["params"] = c.params;
    j["options"] = c.options;
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.domain_file = j.value("domain_file", std::string{});
    if (j.contains("z_spec")) c.z_spec = zspec_from_json(j.at("z_spec"));
    if (j.contains("tolerances"))
        c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    c.output_dir = j.value("output_dir", std::string{"."});
    c.seed = j.value("seed", std::uint64_t{1});
    c.stages = j.value("stages", 3);
    c.quiet = j.value("quiet", false);
    if (j.contains("params"))
        c.params = j.at("params").get<std::map<std::string, double>>();
    if (j.contains("options"))
        c.options = j.at("options").get<std::map<std::string, std::string>>();
    c.validate();
    return c;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

}  // namespace tshift
