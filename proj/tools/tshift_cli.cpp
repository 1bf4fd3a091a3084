#include "tshift/cli.hpp"

#include "CLI11.hpp"

// tshift: numerical laboratory for the Taylor backward shift on Bergman
// spaces of cusp-decorated domains. See README.md for the command set.

int main(int argc, char** argv) {
    CLI::App app{"Taylor shift laboratory"};
    app.allow_extras(false);

    std::string config_path;
    std::string command;
    std::string domain_file;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int stages = 3;
    double tol = 0.0;
    bool quiet = false;
    std::vector<std::string> kv_params;
    std::vector<std::string> kv_options;
    std::vector<double> z_angles;

    app.add_option("--config", config_path, "JSON RunConfig file (other flags override)");
    app.add_option("--command", command, "build|eigen|density|mixing|growth|integrate|render|verify");
    app.add_option("--domain", domain_file, "domain file or preset (disc, crescent, crescent-cusped, disc-cusped)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--tol", tol, "quadrature tolerance");
    app.add_option("--seed", seed, "seed for sampled checks");
    app.add_option("--stages", stages, "stage count for build");
    app.add_option("--param", kv_params, "name=value numeric parameter (repeatable)");
    app.add_option("--opt", kv_options, "name=value string option (repeatable)");
    app.add_option("--z-angle", z_angles, "angle of a Z point for build (repeatable)");
    app.add_flag("--quiet", quiet, "suppress per-check lines");

    CLI11_PARSE(app, argc, argv);

    tshift::RunConfig cfg;
    try {
        if (!config_path.empty())
            cfg = tshift::config_from_json(
                nlohmann::json::parse(tshift::read_text_file(config_path)));
        if (!command.empty()) cfg.command = command;
        if (!domain_file.empty()) cfg.domain_file = domain_file;
        if (out_dir != ".") cfg.output_dir = out_dir;
        if (seed != 1) cfg.seed = seed;
        if (stages != 3) cfg.stages = stages;
        if (tol > 0.0) cfg.tolerances["quad"] = tol;
        if (quiet) cfg.quiet = true;
        auto split_kv = [](const std::string& s) {
            auto pos = s.find('=');
            if (pos == std::string::npos)
                throw tshift::PreconditionError("expected name=value, got '" + s + "'");
            return std::make_pair(s.substr(0, pos), s.substr(pos + 1));
        };
        for (const auto& s : kv_params) {
            auto [k, v] = split_kv(s);
            cfg.params[k] = std::stod(v);
        }
        for (const auto& s : kv_options) {
            auto [k, v] = split_kv(s);
            cfg.options[k] = v;
        }
        if (!z_angles.empty()) {
            tshift::ZSpec z;
            z.kind = tshift::ZSpec::Kind::finite_list;
            z.angles = z_angles;
            cfg.z_spec = z;
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return tshift::run(cfg);
}
