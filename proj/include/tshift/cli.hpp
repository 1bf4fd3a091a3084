#pragma once

#include <iostream>

#include "tshift/io.hpp"
#include "tshift/presets.hpp"
#include "tshift/render.hpp"

namespace tshift {

// Command dispatcher behind the tshift binary. Returns the process exit
// status: 0 all checks passed, 1 a check or certificate failed, 2 bad
// configuration. Partial artifacts stay on disk with a FAILED marker.

namespace cli_detail {

inline DomainSpec load_domain(const RunConfig& cfg) {
    if (auto d = preset_domain(cfg.domain_file)) return *d;
    if (cfg.domain_file.empty())
        throw PreconditionError("no domain_file given (a path or a preset name)");
    return parse_domain(read_text_file(cfg.domain_file));
}

inline RationalCombo named_combo(const std::string& spec) {
    if (spec == "one") return gamma(Complex(0, 0));  // constant 1
    if (spec == "z") return monomial(1);
    if (spec == "z2") return monomial(2);
    if (spec.rfind("gamma:", 0) == 0) {
        double angle = std::stod(spec.substr(6));
        return gamma(unit(angle));
    }
    return combo_from_json(nlohmann::json::parse(read_text_file(spec)));
}

inline std::vector<double> default_r_schedule(int stages) {
    std::vector<double> r;
    for (int n = 1; n <= stages; ++n)
        r.push_back(0.82 / n - (n > 1 ? 0.08 / n : 0.0));
    return r;
}

struct Reporter {
    bool quiet;
    bool all_ok = true;

    void line(const std::string& name, bool ok, const std::string& extra = "") {
        all_ok = all_ok && ok;
        if (!quiet)
            std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name
                      << (extra.empty() ? "" : ": " + extra) << "\n";
    }
};

}  // namespace cli_detail

inline int run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    fs::path out_dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    cli_detail::Reporter rep{cfg.quiet};
    auto finish = [&](bool ok) {
        if (!ok) write_text_file(out_dir / "FAILED", "one or more checks failed\n");
        return ok ? 0 : 1;
    };

    try {
        if (cfg.command == "render") {
            DomainSpec dom = cli_detail::load_domain(cfg);
            RenderOptions opt;
            if (!dom.cusps.empty()) opt.zoom_cusp = 0;
            write_text_file(out_dir / "domain.svg", render_svg(dom, opt));
            rep.line("render", true, (out_dir / "domain.svg").string());
            return finish(rep.all_ok);
        }

        if (cfg.command == "integrate") {
            DomainSpec dom = cli_detail::load_domain(cfg);
            double tol = cfg.tol("quad", 1e-8);
            std::string kind = cfg.option("integrand", "one");
            QuadResult q;
            if (kind == "one") {
                q = integrate_strip(dom, [](Complex) { return Complex(1, 0); }, tol);
            } else if (kind == "gamma-sq") {
                Complex a = unit(cfg.param("alpha_angle", 0.0)) * cfg.param("alpha_mod", 1.0);
                q = norm_sq(gamma(a), dom, tol);
            } else if (kind == "w") {
                WResult wr = w_integral(dom, static_cast<int>(cfg.param("k", 0.0)),
                                        Complex(cfg.param("x_re", 0.0), cfg.param("x_im", 0.0)),
                                        tol);
                q = wr.result;
                if (!wr.trace.entries.empty())
                    write_text_file(out_dir / "w_trace.csv", trace_csv(wr.trace));
            } else if (kind == "tree-one") {
                q = integrate(dom, [](Complex) { return Complex(1, 0); }, tol);
            } else {
                throw PreconditionError("integrate: unknown integrand '" + kind + "'");
            }
            write_text_file(out_dir / "integrate.json", quad_to_json(q).dump(2) + "\n");
            rep.line("integrate " + kind, q.converged,
                     "value " + fmt17(q.value.real()) + " +- " + fmt17(q.error_estimate));
            return finish(rep.all_ok);
        }

        if (cfg.command == "eigen") {
            DomainSpec dom = cli_detail::load_domain(cfg);
            EigenClassification e = eigen_classify(dom, unit(cfg.param("lambda_angle", 0.0)),
                                                   {0.2, 0.14, 0.098, 0.0686, 0.048, 0.0336,
                                                    0.0235},
                                                   cfg.tol("quad", 1e-7));
            write_text_file(out_dir / "eigen_trace.csv", trace_csv(e.evidence));
            write_text_file(out_dir / "eigen.json",
                            eigen_to_json(e, "eigen_trace.csv").dump(2) + "\n");
            rep.line("eigen-classify", e.verdict != EigenVerdict::inconclusive,
                     to_string(e.verdict));
            return finish(rep.all_ok);
        }

        if (cfg.command == "density") {
            DomainSpec dom = cli_detail::load_domain(cfg);
            Complex alpha = unit(cfg.param("alpha_angle", 0.0));
            std::vector<int> schedule;
            for (int K : {0, 10, 20, static_cast<int>(cfg.param("K_max", 40.0))})
                if (schedule.empty() || K > schedule.back()) schedule.push_back(K);
            std::vector<std::pair<std::string, RationalCombo>> targets;
            int tmax = static_cast<int>(cfg.param("target_degree_max", 3.0));
            for (int d = 0; d <= tmax; ++d)
                targets.emplace_back("z^" + std::to_string(d), monomial(d));
            DensityReport dr = density_probe(
                dom, [alpha](int k) { return gamma(alpha, k); }, targets, schedule,
                cfg.tol("quad", 1e-9));
            write_text_file(out_dir / "density.csv", density_csv(dr));
            bool mono = true;
            for (const auto& [label, target] : targets) {
                double prev = std::numeric_limits<double>::infinity();
                for (const DensityRow& r : dr.rows)
                    if (r.target == label) {
                        mono = mono && r.residual <= prev * (1.0 + 1e-6) + 1e-12;
                        prev = r.residual;
                    }
            }
            rep.line("density residuals monotone", mono);
            return finish(rep.all_ok);
        }

        if (cfg.command == "growth") {
            DomainSpec dom = cli_detail::load_domain(cfg);
            RationalCombo g = cli_detail::named_combo(cfg.option("g", "gamma-half"));
            if (cfg.option("g", "gamma-half") == "gamma-half") g = gamma(Complex(0.5, 0.0));
            GrowthReport gr = growth_check(operand(g), dom, cfg.param("r", 0.5),
                                           static_cast<int>(cfg.param("kmax", 6.0)),
                                           static_cast<int>(cfg.param("grid", 41.0)),
                                           cfg.tol("quad", 1e-7));
            write_text_file(out_dir / "growth.csv", growth_csv(gr));
            rep.line("derivative growth bound", gr.pass,
                     "fitted_C " + fmt17(gr.fitted_C));
            WBoundReport wb = w_bound_check(dom, cfg.param("r", 0.5),
                                            static_cast<int>(cfg.param("w_kmax", 10.0)),
                                            static_cast<int>(cfg.param("grid", 41.0)),
                                            cfg.tol("quad", 1e-7));
            write_text_file(out_dir / "w_bound.csv", w_bound_csv(wb));
            rep.line("W integral bound", wb.pass, "fitted_C " + fmt17(wb.fitted_C));
            return finish(rep.all_ok);
        }

        if (cfg.command == "build") {
            if (!cfg.z_spec) throw PreconditionError("build: z_spec required");
            std::vector<double> r_schedule;
            for (int n = 1; n <= cfg.stages; ++n) {
                auto it = cfg.params.find("r" + std::to_string(n));
                if (it != cfg.params.end()) r_schedule.push_back(it->second);
            }
            if (r_schedule.empty()) r_schedule = cli_detail::default_r_schedule(cfg.stages);
            if (static_cast<int>(r_schedule.size()) != cfg.stages)
                throw PreconditionError("build: r_schedule incomplete");
            std::vector<double> tol_schedule(cfg.stages, cfg.tol("collar", 1e-8));
            BuildResult br = build_domain(*cfg.z_spec, cfg.stages, r_schedule, tol_schedule);
            write_text_file(out_dir / "domain.json", serialize_domain(br.domain));
            write_text_file(out_dir / "certificates.json",
                            certificates_to_json(br.domain, br.certificates).dump(2) + "\n");
            RenderOptions opt;
            if (!br.domain.cusps.empty()) opt.zoom_cusp = 0;
            write_text_file(out_dir / "domain.svg", render_svg(br.domain, opt));
            for (const StageCertificate& c : br.certificates)
                rep.line("stage " + std::to_string(c.n) + " certificate", c.pass,
                         "rho " + fmt17(c.rho_n));
            rep.line("build", br.success, br.message);
            return finish(rep.all_ok);
        }

        if (cfg.command == "verify") {
            DomainSpec dom = cli_detail::load_domain(cfg);
            std::string cert_path = cfg.option("certificates", "");
            if (cert_path.empty()) throw PreconditionError("verify: certificates path required");
            nlohmann::json j = nlohmann::json::parse(read_text_file(cert_path));
            bool digest_ok = j.at("domain_digest").get<std::uint64_t>() == domain_digest(dom);
            std::vector<StageCertificate> certs;
            for (const auto& cj : j.at("stages")) certs.push_back(certificate_from_json(cj));
            VerifyReport vr = digest_ok
                                  ? verify_certificates(dom, certs, cfg.tol("quad", 1e-9))
                                  : VerifyReport{false, {"domain digest mismatch"}};
            nlohmann::ordered_json out{{"ok", vr.ok}, {"mismatches", vr.mismatches}};
            write_text_file(out_dir / "verify.json", out.dump(2) + "\n");
            rep.line("certificate re-verification", vr.ok,
                     vr.ok ? "" : vr.mismatches.front());
            return finish(rep.all_ok);
        }

        if (cfg.command == "mixing") {
            DomainSpec dom = cli_detail::load_domain(cfg);
            RationalCombo f = cli_detail::named_combo(cfg.option("f", "one"));
            RationalCombo g = cli_detail::named_combo(cfg.option("g", "z"));
            MixingWitness w = mixing_witness(dom, f, g, cfg.param("eps", 1e-2), {},
                                             cfg.tol("quad", 1e-8));
            write_text_file(out_dir / "witness.json", witness_to_json(w).dump(2) + "\n");
            rep.line("mixing witness", w.success,
                     w.success ? "n = " + std::to_string(w.n)
                               : "residuals " + fmt17(w.interior_residual) + ", " +
                                     fmt17(w.exterior_residual));
            return finish(rep.all_ok);
        }

        throw PreconditionError("unhandled command '" + cfg.command + "'");
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_text_file(out_dir / "FAILED", std::string(e.what()) + "\n");
        return 1;
    }
}

}  // namespace tshift
