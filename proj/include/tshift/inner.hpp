#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "tshift/rational.hpp"
#include "tshift/strip_quad.hpp"

namespace tshift {

// Evaluation view used by the quadrature-facing operations; carries the
// singular points so the integrator places breakpoints under them.
struct InnerOperand {
    std::function<Complex(Complex)> eval;
    std::vector<Complex> singular_points;
};

inline InnerOperand operand(const RationalCombo& f) {
    std::vector<Complex> sing;
    for (const Complex& p : poles(f))
        if (std::abs(p) < 1.2) sing.push_back(p);
    return InnerOperand{[f](Complex z) { return evaluate(f, z); }, std::move(sing)};
}

inline InnerOperand operand(const TaylorPoly& f) {
    return InnerOperand{[f](Complex z) { return evaluate(f, z); }, {}};
}

/// <f, g> = int_Omega f conj(g) dm2.
inline QuadResult inner_product(const InnerOperand& f, const InnerOperand& g,
                                const DomainSpec& dom, double tol,
                                double rel_scale = 0.0) {
    StripOptions opts;
    for (const Complex& p : f.singular_points) opts.breakpoints.push_back(std::arg(p));
    for (const Complex& p : g.singular_points) opts.breakpoints.push_back(std::arg(p));
    auto& fe = f.eval;
    auto& ge = g.eval;
    Integrand h = [&fe, &ge](Complex z) { return fe(z) * std::conj(ge(z)); };
    double eff_tol = tol * std::max(1.0, rel_scale);
    return integrate_strip(dom, h, eff_tol, opts);
}

inline QuadResult inner_product(const RationalCombo& f, const RationalCombo& g,
                                const DomainSpec& dom, double tol) {
    return inner_product(operand(f), operand(g), dom, tol);
}

inline QuadResult norm_sq(const RationalCombo& f, const DomainSpec& dom, double tol) {
    return inner_product(f, f, dom, tol);
}

/// Pre-admission check for basis elements with a pole on the unit circle.
inline bool admit_unimodular(const DomainSpec& dom, Complex alpha,
                             const std::vector<double>& scales = {0.2, 0.14, 0.1, 0.07,
                                                                  0.05, 0.035, 0.024}) {
    DivergenceProbe probe = divergence_probe(dom, alpha, scales);
    return probe.classification == DivergenceClass::convergent;
}

struct GramSystem {
    Eigen::MatrixXcd gram;       // A_{ij} = <b_j, b_i>, Hermitian by symmetrization
    Eigen::VectorXcd rhs;        // rhs_i = <target, b_i>
    double condition_estimate = 0.0;
    double quad_tol = 0.0;
    double target_norm_sq = 0.0;
    double quad_error_budget = 0.0;  // accumulated error estimates of all entries
};

// Assembles pairwise inner products and the target column. Basis elements with
// unimodular poles are admitted only after a convergent divergence probe; any
// non-converged quadrature aborts with the offending pair named.
inline GramSystem gram_system(const std::vector<RationalCombo>& basis,
                              const RationalCombo& target, const DomainSpec& dom,
                              double tol) {
    const int n = static_cast<int>(basis.size());
    for (int i = 0; i < n; ++i) {
        if (!is_canonical(basis[i]) || basis[i].is_zero())
            throw PreconditionError("gram_system: basis element " + std::to_string(i) +
                                    " not canonical or zero");
        for (int j = i + 1; j < n; ++j)
            if (approx_equal(basis[i], basis[j], 0.0))
                throw PreconditionError("gram_system: duplicate basis elements " +
                                        std::to_string(i) + "," + std::to_string(j));
    }
    std::vector<Complex> checked;
    auto require_membership = [&](const RationalCombo& f, const std::string& who) {
        for (const RationalTerm& t : f.terms) {
            if (t.alpha == Complex(0.0, 0.0)) continue;
            if (std::abs(std::abs(t.alpha) - 1.0) > 1e-12) continue;
            bool seen = false;
            for (const Complex& q : checked) seen = seen || q == t.alpha;
            if (seen) continue;
            checked.push_back(t.alpha);
            if (!admit_unimodular(dom, t.alpha))
                throw PreconditionError("gram_system: " + who +
                                        " has a unimodular pole outside A^2(Omega)");
        }
    };
    for (int i = 0; i < n; ++i) require_membership(basis[i], "basis[" + std::to_string(i) + "]");

    GramSystem sys;
    sys.quad_tol = tol;
    sys.gram.resize(n, n);
    sys.rhs.resize(n);
    std::vector<InnerOperand> ops;
    ops.reserve(basis.size());
    for (const RationalCombo& b : basis) ops.push_back(operand(b));
    InnerOperand top = operand(target);

    std::vector<double> diag(n, 1.0);
    for (int i = 0; i < n; ++i) {
        QuadResult q = inner_product(ops[i], ops[i], dom, tol, 1.0);
        if (!q.converged)
            throw NumericError("gram_system: non-converged norm for basis[" +
                               std::to_string(i) + "]");
        diag[i] = q.value.real();
        sys.gram(i, i) = Complex(diag[i], 0.0);
        sys.quad_error_budget += q.error_estimate;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double scale = std::sqrt(std::max(diag[i], 0.0) * std::max(diag[j], 0.0));
            QuadResult q = inner_product(ops[j], ops[i], dom, tol, scale);
            if (!q.converged)
                throw NumericError("gram_system: non-converged entry (" + std::to_string(i) +
                                   "," + std::to_string(j) + ")");
            sys.gram(i, j) = q.value;
            sys.gram(j, i) = std::conj(q.value);
            sys.quad_error_budget += 2.0 * q.error_estimate;
        }
    }
    sys.gram = 0.5 * (sys.gram + sys.gram.adjoint()).eval();

    QuadResult tn = inner_product(top, top, dom, tol, 1.0);
    if (!tn.converged) throw NumericError("gram_system: non-converged target norm");
    sys.target_norm_sq = tn.value.real();
    sys.quad_error_budget += tn.error_estimate;
    for (int i = 0; i < n; ++i) {
        double scale = std::sqrt(std::max(diag[i], 0.0) * std::max(sys.target_norm_sq, 0.0));
        QuadResult q = inner_product(top, ops[i], dom, tol, scale);
        if (!q.converged)
            throw NumericError("gram_system: non-converged rhs entry " + std::to_string(i));
        sys.rhs(i) = q.value;
        sys.quad_error_budget += q.error_estimate;
    }

    // condition estimate of the norm-scaled Gram
    Eigen::VectorXd dvec(n);
    for (int i = 0; i < n; ++i) dvec(i) = 1.0 / std::sqrt(std::max(diag[i], 1e-300));
    Eigen::MatrixXcd gn = dvec.asDiagonal() * sys.gram * dvec.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gn);
    double lmax = es.eigenvalues().maxCoeff();
    double lmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 0) lmin = std::min(lmin, es.eigenvalues()(i));
    sys.condition_estimate = lmax / std::max(lmin, 1e-300);
    return sys;
}

struct Projection {
    Eigen::VectorXcd coefficients;
    double residual = 0.0;
    int rank = 0;  // eigenvalues kept by the spectral cutoff
};

inline constexpr double kGramCutoff = 1e-12;

// Regularized projection: the basis is norm-scaled, the scaled Gram is
// eigendecomposed, and eigenvalues below 1e-12 * lambda_max are discarded.
// residual^2 = ||t||^2 - 2 Re(c^H rhs) + c^H G c, clamped at zero; a clearly
// negative value signals inconsistent quadrature and is an error.
inline Projection project(const GramSystem& sys, int use_first_k = -1) {
    const int full = static_cast<int>(sys.gram.rows());
    const int n = use_first_k < 0 ? full : std::min(use_first_k, full);
    Projection out;
    out.coefficients = Eigen::VectorXcd::Zero(full);
    if (n == 0) {
        out.residual = std::sqrt(std::max(sys.target_norm_sq, 0.0));
        return out;
    }
    Eigen::MatrixXcd g = sys.gram.topLeftCorner(n, n);
    Eigen::VectorXcd r = sys.rhs.head(n);
    Eigen::VectorXd dvec(n);
    for (int i = 0; i < n; ++i)
        dvec(i) = 1.0 / std::sqrt(std::max(g(i, i).real(), 1e-300));
    Eigen::MatrixXcd gn = dvec.asDiagonal() * g * dvec.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gn);
    if (es.info() != Eigen::Success) throw NumericError("project: eigensolver failed");
    double lmax = es.eigenvalues().maxCoeff();
    Eigen::VectorXcd rn = dvec.asDiagonal() * r;
    Eigen::VectorXcd y = es.eigenvectors().adjoint() * rn;
    for (int i = 0; i < n; ++i) {
        double lam = es.eigenvalues()(i);
        if (lam > kGramCutoff * lmax) {
            y(i) /= lam;
            ++out.rank;
        } else {
            y(i) = Complex(0.0, 0.0);
        }
    }
    Eigen::VectorXcd cn = es.eigenvectors() * y;
    Eigen::VectorXcd c = dvec.asDiagonal() * cn;
    double quad_form = (c.adjoint() * g * c)(0, 0).real();
    double cross = (c.adjoint() * r)(0, 0).real();
    double res_sq = sys.target_norm_sq - 2.0 * cross + quad_form;
    double slack = 1e-7 * (1.0 + std::abs(sys.target_norm_sq)) + 16.0 * sys.quad_error_budget;
    if (res_sq < -slack)
        throw NumericError("project: residual^2 = " + std::to_string(res_sq) +
                           " below -tolerance; quadrature inconsistent");
    out.residual = std::sqrt(std::max(res_sq, 0.0));
    out.coefficients.head(n) = c;
    return out;
}

struct DensityRow {
    std::string target;
    int K;
    double residual;
    double condition_estimate;
};

struct DensityReport {
    std::vector<DensityRow> rows;
};

/// Swaps the target column of an assembled system (basis Gram is reused).
inline void replace_target(GramSystem& sys, const std::vector<RationalCombo>& basis,
                           const RationalCombo& target, const DomainSpec& dom,
                           double tol) {
    InnerOperand top = operand(target);
    QuadResult tn = inner_product(top, top, dom, tol, 1.0);
    if (!tn.converged) throw NumericError("replace_target: non-converged target norm");
    sys.target_norm_sq = tn.value.real();
    const int n = static_cast<int>(basis.size());
    for (int i = 0; i < n; ++i) {
        double scale = std::sqrt(std::max(sys.gram(i, i).real(), 0.0) *
                                 std::max(sys.target_norm_sq, 0.0));
        QuadResult q = inner_product(top, operand(basis[i]), dom, tol, scale);
        if (!q.converged)
            throw NumericError("replace_target: non-converged rhs entry " + std::to_string(i));
        sys.rhs(i) = q.value;
    }
}

// Residual table (target x K) for an indexed basis family; the Gram of the
// largest K is assembled once and subsystems are re-projected.
inline DensityReport density_probe(const DomainSpec& dom,
                                   const std::function<RationalCombo(int)>& family,
                                   const std::vector<std::pair<std::string, RationalCombo>>& targets,
                                   const std::vector<int>& K_schedule, double tol) {
    DensityReport rep;
    if (targets.empty() || K_schedule.empty()) return rep;
    for (std::size_t i = 1; i < K_schedule.size(); ++i)
        if (K_schedule[i] <= K_schedule[i - 1])
            throw PreconditionError("density_probe: K_schedule must increase");
    int kmax = K_schedule.back();
    std::vector<RationalCombo> basis;
    for (int k = 0; k <= kmax; ++k) basis.push_back(family(k));
    GramSystem sys = gram_system(basis, targets.front().second, dom, tol);
    for (const auto& [label, target] : targets) {
        replace_target(sys, basis, target, dom, tol);
        for (int K : K_schedule) {
            Projection p = project(sys, K + 1);
            rep.rows.push_back({label, K, p.residual, sys.condition_estimate});
        }
    }
    return rep;
}

}  // namespace tshift
