#pragma once

#include "tshift/bridge.hpp"
#include "tshift/inner.hpp"
#include "tshift/runge.hpp"

namespace tshift {

// Staged construction of a cusp domain realizing unimodular eigenvalues on a
// prescribed circle set Z accumulating at 1. Stage n fits the targets
// gamma_{1,j}, j < n, by simple kernels with poles in Z inside the window
// U_{r_n}, places cusp hulls over the stage points, and certifies the two
// collar-integral constraints < 1/(n+1).
//
// The anchor set is conjugate-symmetrized: the kernels gamma_zeta used by the
// fits are singular at conj(zeta), so the collar integrals are finite only if
// the conjugate points are pinched as well. For the same reason
// gamma_lambda's membership in A^2 is decided at 1/lambda, and the
// symmetrized anchor set is exactly the set of realized eigenvalues.

struct ZSpec {
    enum class Kind { finite_list, accumulating_sequence };
    Kind kind = Kind::finite_list;
    std::vector<double> angles;  // radians
    std::optional<double> accumulation_point;

    void validate() const {
        if (angles.empty()) throw PreconditionError("ZSpec: empty angle list");
        for (std::size_t i = 0; i < angles.size(); ++i)
            for (std::size_t j = i + 1; j < angles.size(); ++j)
                if (std::abs(wrap_angle(angles[i] - angles[j])) < 1e-12)
                    throw PreconditionError("ZSpec: angles must be distinct mod 2pi");
        if (kind == Kind::accumulating_sequence) {
            if (!accumulation_point)
                throw PreconditionError("ZSpec: accumulating sequence needs a limit point");
            double prev = std::numeric_limits<double>::infinity();
            for (double a : angles) {
                double d = chord_dist(a, *accumulation_point);
                if (!(d < prev))
                    throw PreconditionError(
                        "ZSpec: accumulating sequence must approach the limit monotonically");
                prev = d;
            }
        }
    }

    /// Angles of Z together with their conjugates, deduplicated.
    std::vector<double> symmetrized() const {
        std::vector<double> out;
        auto push = [&](double a) {
            a = wrap_angle(a);
            for (double b : out)
                if (std::abs(wrap_angle(a - b)) < 1e-12) return;
            out.push_back(a);
        };
        for (double a : angles) {
            push(a);
            push(-a);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool contains_angle(double a, double tol = 1e-12) const {
        for (double b : symmetrized())
            if (std::abs(wrap_angle(a - b)) < tol) return true;
        return false;
    }
};

struct StageCertificate {
    int n = 0;
    double r_n = 0.0;
    std::vector<double> z_angles;          // stage points (symmetrized)
    std::vector<double> new_anchor_angles; // anchors added by this stage
    std::vector<double> sup_error;         // fit errors, j = 0..n-1
    double sup_bound = 0.0;                // 1/(n+1)
    std::vector<double> integral_R;        // measured collar integrals of |R_j|^2
    std::vector<double> integral_R_err;
    std::vector<double> integral_gamma;    // same for |gamma_{1,j}|^2
    std::vector<double> integral_gamma_err;
    double integral_bound = 0.0;           // 1/(n+1)
    double delta_n = 0.0;
    double rho_n = 0.0;
    bool pass = false;
    std::vector<RationalCombo> approximants;  // R_j, kept for re-verification
};

struct BuildParams {
    int per_stage_budget = 9;
    double rho_init = 0.25;
    int max_rho_halvings = 20;
    double delta_margin = 0.12;
    double delta_cap = 1.42;
    int cup_samples = 768;
    double fit_tol_factor = 0.5;   // fits must land below factor/(n+1)
    int fit_boundary_samples = 420;
    double margin_factor = 0.8;    // require value + 2 err < factor * bound
};

struct BuildResult {
    bool success = false;
    DomainSpec domain;
    std::vector<StageCertificate> certificates;
    std::string message;
};

namespace detail {

/// Greedy spread-maximizing choice of stage points, always including the
/// accumulation anchor 0, closed under conjugation.
inline std::vector<double> select_stage_points(const std::vector<double>& candidates,
                                               int budget) {
    std::vector<double> chosen{0.0};
    auto min_dist = [&](double a) {
        double d = std::numeric_limits<double>::infinity();
        for (double b : chosen) d = std::min(d, chord_dist(a, b));
        return d;
    };
    while (static_cast<int>(chosen.size()) < budget) {
        double best = 0.0, best_d = 0.0;
        for (double a : candidates) {
            double d = min_dist(a);
            if (d > best_d + 1e-15) {
                best_d = d;
                best = a;
            }
        }
        if (best_d < 1e-12) break;
        chosen.push_back(best);
        if (std::abs(wrap_angle(best + best)) > 1e-12) {  // not 0 or pi
            double conj = wrap_angle(-best);
            if (min_dist(conj) > 1e-12 && static_cast<int>(chosen.size()) < budget + 1)
                chosen.push_back(conj);
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

inline QuadResult collar_integral(const DomainSpec& dom, const InnerOperand& f,
                                  double window_radius, double tol) {
    StripOptions opts;
    opts.window = Excision{Complex(1.0, 0.0), window_radius};
    for (const Complex& p : f.singular_points) opts.breakpoints.push_back(std::arg(p));
    auto& fe = f.eval;
    Integrand h = [&fe](Complex z) { return Complex(std::norm(fe(z)), 0.0); };
    return integrate_strip(dom, h, tol, opts);
}

}  // namespace detail

inline BuildResult build_domain(const ZSpec& Z, int stages,
                                const std::vector<double>& r_schedule,
                                const std::vector<double>& tol_schedule,
                                const BuildParams& params = {}) {
    Z.validate();
    if (stages < 1) throw PreconditionError("build_domain: stages must be >= 1");
    if (static_cast<int>(r_schedule.size()) != stages)
        throw PreconditionError("build_domain: r_schedule must have one entry per stage");
    for (int n = 1; n <= stages; ++n) {
        double r = r_schedule[n - 1];
        if (!(r > 0.0) || !(r < 1.0 / n))
            throw PreconditionError("build_domain: need 0 < r_n < 1/n");
        if (n >= 2 && !(r < r_schedule[n - 2]))
            throw PreconditionError("build_domain: r_schedule must strictly decrease");
    }
    if (!Z.contains_angle(0.0))
        throw PreconditionError(
            "build_domain: Z must contain the accumulation anchor at angle 0");

    std::vector<double> zsym = Z.symmetrized();
    BuildResult out;
    out.domain = DomainSpec::disc();
    double rho_prev = params.rho_init;

    for (int n = 1; n <= stages; ++n) {
        StageCertificate cert;
        cert.n = n;
        cert.r_n = r_schedule[n - 1];
        cert.sup_bound = 1.0 / (n + 1);
        cert.integral_bound = 1.0 / (n + 1);

        std::vector<double> candidates;
        for (double a : zsym)
            if (chord_dist(a, 0.0) < cert.r_n) candidates.push_back(a);
        if (candidates.size() < 2) {
            out.message = "stage " + std::to_string(n) + ": too few Z points in the window";
            out.certificates.push_back(cert);
            return out;
        }
        cert.z_angles = detail::select_stage_points(candidates, params.per_stage_budget);

        CompactComplement K;
        K.window_radius = cert.r_n;
        K.boundary_samples = params.fit_boundary_samples;
        for (int j = 0; j < n; ++j) {
            RungeResult fit = runge_approximant(
                j, Complex(1.0, 0.0), static_cast<int>(cert.z_angles.size()), cert.z_angles,
                K, params.fit_tol_factor * cert.sup_bound);
            cert.sup_error.push_back(fit.sup_error);
            cert.approximants.push_back(fit.approximant);
            if (!fit.success) {
                out.message = "stage " + std::to_string(n) + ": fit for j=" +
                              std::to_string(j) + " stalled at sup error " +
                              std::to_string(fit.sup_error);
                out.certificates.push_back(cert);
                return out;
            }
        }

        for (double a : cert.z_angles)
            if (!has_cusp_at_angle(out.domain, a)) cert.new_anchor_angles.push_back(a);

        double window_angle = 2.0 * std::asin(std::min(1.0, cert.r_n / 2.0));
        cert.delta_n = std::min(params.delta_cap,
                                std::max(window_angle, std::sqrt(2.0 * cert.r_n)) +
                                    params.delta_margin);
        double quad_tol = n - 1 < static_cast<int>(tol_schedule.size())
                              ? tol_schedule[n - 1]
                              : 1e-8;

        double collar_radius = n >= 2 ? r_schedule[n - 2] : r_schedule[0];
        double rho = std::min(params.rho_init, rho_prev);
        bool stage_ok = false;
        for (int attempt = 0; attempt < params.max_rho_halvings; ++attempt, rho *= 0.5) {
            DomainSpec trial = out.domain;
            CupSpec cup;
            cup.delta = cert.delta_n;
            cup.rho = rho;
            cup.samples = params.cup_samples;
            for (double a : cert.new_anchor_angles)
                trial.cusps.push_back(make_cusp_region(a, cup, cert.r_n));
            trial.validate();
            if (!removed_set_connected(trial)) {
                if (cert.delta_n < params.delta_cap) {
                    cert.delta_n = std::min(params.delta_cap, cert.delta_n + 0.15);
                    --attempt, rho *= 2.0;  // retry same rho with a wider hull
                    continue;
                }
                out.message = "stage " + std::to_string(n) + ": removed set disconnected";
                out.certificates.push_back(cert);
                return out;
            }

            cert.integral_R.clear();
            cert.integral_R_err.clear();
            cert.integral_gamma.clear();
            cert.integral_gamma_err.clear();
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                QuadResult qR = detail::collar_integral(trial, operand(cert.approximants[j]),
                                                        collar_radius, quad_tol);
                QuadResult qg = detail::collar_integral(trial, operand(gamma(1.0, j)),
                                                        collar_radius, quad_tol);
                cert.integral_R.push_back(qR.real_value());
                cert.integral_R_err.push_back(qR.error_estimate);
                cert.integral_gamma.push_back(qg.real_value());
                cert.integral_gamma_err.push_back(qg.error_estimate);
                ok = qR.converged && qg.converged &&
                     qR.real_value() + 2.0 * qR.error_estimate <
                         params.margin_factor * cert.integral_bound &&
                     qg.real_value() + 2.0 * qg.error_estimate <
                         params.margin_factor * cert.integral_bound;
            }
            if (ok) {
                cert.rho_n = rho;
                cert.pass = true;
                out.domain = trial;
                rho_prev = rho;
                stage_ok = true;
                break;
            }
        }
        out.certificates.push_back(cert);
        if (!stage_ok) {
            out.message = "stage " + std::to_string(n) +
                          ": collar constraints unmet within the rho search budget";
            return out;
        }
    }
    out.success = true;
    return out;
}

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> mismatches;
};

// Independent re-check of every certificate quantity at a (typically tighter)
// quadrature tolerance; all strict inequalities must hold with margin at
// least twice the new error estimates.
inline VerifyReport verify_certificates(const DomainSpec& dom,
                                        const std::vector<StageCertificate>& certs,
                                        double quad_tol) {
    VerifyReport rep;
    auto fail = [&](const std::string& m) {
        rep.ok = false;
        rep.mismatches.push_back(m);
    };
    DomainSpec partial = DomainSpec::disc();
    partial.base = dom.base;
    partial.crescent_center = dom.crescent_center;
    partial.crescent_radius = dom.crescent_radius;
    for (const StageCertificate& cert : certs) {
        if (!cert.pass) {
            fail("stage " + std::to_string(cert.n) + ": certificate marked failed");
            continue;
        }
        for (double a : cert.new_anchor_angles) {
            const CuspRegion* found = nullptr;
            for (const CuspRegion& c : dom.cusps)
                if (std::abs(wrap_angle(c.anchor_angle - a)) < 1e-12) found = &c;
            if (!found) {
                fail("stage " + std::to_string(cert.n) + ": anchor missing from domain");
                continue;
            }
            if (std::abs(found->cup.delta - cert.delta_n) > 1e-12 ||
                std::abs(found->cup.rho - cert.rho_n) > 1e-12)
                fail("stage " + std::to_string(cert.n) + ": cusp parameters differ");
            partial.cusps.push_back(*found);
        }
        CompactComplement K;
        K.window_radius = cert.r_n;
        K.validation_factor = 5;
        std::vector<Complex> val_grid = K.sample(K.validation_factor);
        for (std::size_t j = 0; j < cert.approximants.size(); ++j) {
            double sup = detail::grid_sup_error(gamma(1.0, static_cast<int>(j)),
                                                cert.approximants[j], val_grid);
            if (!(sup < cert.sup_bound))
                fail("stage " + std::to_string(cert.n) + ": sup error " +
                     std::to_string(sup) + " not below " + std::to_string(cert.sup_bound));
        }
        double collar_radius = cert.n >= 2 && cert.n - 2 < static_cast<int>(certs.size())
                                   ? certs[cert.n - 2].r_n
                                   : cert.r_n;
        for (int j = 0; j < cert.n; ++j) {
            QuadResult qR = detail::collar_integral(
                partial, operand(cert.approximants[j]), collar_radius, quad_tol);
            QuadResult qg = detail::collar_integral(partial, operand(gamma(1.0, j)),
                                                    collar_radius, quad_tol);
            if (!qR.converged || !(qR.real_value() + 2.0 * qR.error_estimate <
                                   cert.integral_bound))
                fail("stage " + std::to_string(cert.n) + " j=" + std::to_string(j) +
                     ": |R_j|^2 collar integral fails re-verification");
            if (!qg.converged || !(qg.real_value() + 2.0 * qg.error_estimate <
                                   cert.integral_bound))
                fail("stage " + std::to_string(cert.n) + " j=" + std::to_string(j) +
                     ": |gamma_{1,j}|^2 collar integral fails re-verification");
        }
    }
    if (rep.ok) {
        for (const CuspRegion& c : dom.cusps) {
            bool claimed = false;
            for (const StageCertificate& cert : certs)
                for (double a : cert.new_anchor_angles)
                    if (std::abs(wrap_angle(c.anchor_angle - a)) < 1e-12) claimed = true;
            if (!claimed) fail("domain carries an anchor not covered by any certificate");
        }
    }
    return rep;
}

}  // namespace tshift
