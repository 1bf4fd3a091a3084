#pragma once

#include "tshift/inner.hpp"

namespace tshift {

/// k!, exact in double up to k = 170.
inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

/// Shape of the derivative bound: k! 5^{k/2} log^k(max(k,2)).
inline double derivative_bound_shape(int k) {
    double lk = std::log(static_cast<double>(std::max(k, 2)));
    return factorial(k) * std::pow(5.0, 0.5 * k) * std::pow(lk, k);
}

/// Shape of the W bound: 5^k log^{2k}(max(k,2)).
inline double w_bound_shape(int k) {
    double lk = std::log(static_cast<double>(std::max(k, 2)));
    return std::pow(5.0, k) * std::pow(lk, 2.0 * k);
}

// (Vg)^{(k)}(alpha) = k! int gamma_{alpha,k}(z) conj(g(z)) dm2(z).
// alpha must not put the kernel pole 1/alpha inside Omega.
inline QuadResult cauchy_transform(const InnerOperand& g, Complex alpha, int k,
                                   const DomainSpec& dom, double tol) {
    if (k < 0) throw PreconditionError("cauchy_transform: k must be >= 0");
    auto pole = kernel_singularity(alpha);
    if (pole && domain_membership(dom, *pole, 1e-12) == Region::inside)
        throw PreconditionError("cauchy_transform: kernel pole 1/alpha lies inside Omega");
    InnerOperand kern = operand(gamma(alpha, k));
    QuadResult q = inner_product(kern, g, dom, tol);
    q.value *= factorial(k);
    q.error_estimate *= factorial(k);
    return q;
}

inline QuadResult cauchy_transform(const RationalCombo& g, Complex alpha, int k,
                                   const DomainSpec& dom, double tol) {
    return cauchy_transform(operand(g), alpha, k, dom, tol);
}

struct GrowthReport {
    std::vector<int> k_values;
    std::vector<double> sup_derivatives;  // sup over sampled I of |(Vg)^{(k)}|
    std::vector<double> bound_values;     // fitted_C * k! 5^{k/2} log^k(max(k,2))
    double fitted_C = 0.0;
    bool pass = false;
};

/// The interval I = phi(i[-r/2, r/2]) on the real axis.
inline std::pair<double, double> growth_interval(double r) {
    return {strip_radius(-0.5 * r), strip_radius(0.5 * r)};
}

// Samples sup_{x in I} |(Vg)^{(k)}(x)| for k <= kmax on a grid over I and
// checks it against the quasi-analyticity bound shape, with the constant
// calibrated on k in {0,1}. Requires a cusp anchored at 1 (the normalization
// under which I surrounds the pinch).
inline GrowthReport growth_check(const InnerOperand& g, const DomainSpec& dom, double r,
                                 int kmax, int grid, double tol = 1e-7) {
    if (!(r > 0.0) || !(r < 1.0)) throw PreconditionError("growth_check: r must be in (0,1)");
    if (kmax < 0 || grid < 2) throw PreconditionError("growth_check: bad kmax or grid");
    if (!has_cusp_at_angle(dom, 0.0))
        throw PreconditionError("growth_check: domain must carry a cusp anchored at 1");
    auto [lo, hi] = growth_interval(r);
    GrowthReport rep;
    for (int k = 0; k <= kmax; ++k) {
        double sup = 0.0;
        for (int i = 0; i < grid; ++i) {
            double x = lo + (hi - lo) * i / (grid - 1);
            QuadResult q = cauchy_transform(g, Complex(x, 0.0), k, dom, tol);
            if (!q.converged)
                throw NumericError("growth_check: quadrature failed at k=" +
                                   std::to_string(k) + " x=" + std::to_string(x));
            sup = std::max(sup, std::abs(q.value));
        }
        rep.k_values.push_back(k);
        rep.sup_derivatives.push_back(sup);
    }
    rep.fitted_C = 0.0;
    for (int k = 0; k <= std::min(kmax, 1); ++k)
        rep.fitted_C = std::max(rep.fitted_C, rep.sup_derivatives[k] / derivative_bound_shape(k));
    rep.pass = true;
    for (int k = 0; k <= kmax; ++k) {
        rep.bound_values.push_back(rep.fitted_C * derivative_bound_shape(k));
        if (rep.sup_derivatives[k] > rep.bound_values[k] * (1.0 + 1e-9)) rep.pass = false;
    }
    return rep;
}

struct WBoundReport {
    std::vector<int> k_values;
    std::vector<double> sup_w;      // sup over sampled I of W(k, x)
    std::vector<double> bound_values;
    double fitted_C = 0.0;
    bool pass = false;
};

/// Same calibration scheme for sup_x W_Omega(k, x) against 5^k log^{2k}(max(k,2)).
inline WBoundReport w_bound_check(const DomainSpec& dom, double r, int kmax, int grid,
                                  double tol = 1e-7) {
    if (!(r > 0.0) || !(r < 1.0)) throw PreconditionError("w_bound_check: r must be in (0,1)");
    if (kmax < 1 || grid < 2) throw PreconditionError("w_bound_check: bad kmax or grid");
    auto [lo, hi] = growth_interval(r);
    WBoundReport rep;
    for (int k = 0; k <= kmax; ++k) {
        double sup = 0.0;
        for (int i = 0; i < grid; ++i) {
            double x = lo + (hi - lo) * i / (grid - 1);
            WResult wr = w_integral(dom, k, Complex(x, 0.0), tol * w_bound_shape(k));
            if (!wr.result.converged)
                throw NumericError("w_bound_check: W(k,x) failed at k=" + std::to_string(k) +
                                   " x=" + std::to_string(x));
            sup = std::max(sup, wr.result.real_value());
        }
        rep.k_values.push_back(k);
        rep.sup_w.push_back(sup);
    }
    rep.fitted_C = 0.0;
    for (int k = 0; k <= 1; ++k)
        rep.fitted_C = std::max(rep.fitted_C, rep.sup_w[k] / w_bound_shape(k));
    rep.pass = true;
    for (int k = 0; k <= kmax; ++k) {
        rep.bound_values.push_back(rep.fitted_C * w_bound_shape(k));
        if (rep.sup_w[k] > rep.bound_values[k] * (1.0 + 1e-9)) rep.pass = false;
    }
    return rep;
}

enum class EigenVerdict { eigenvalue, not_eigenvalue, inconclusive };

inline const char* to_string(EigenVerdict v) {
    switch (v) {
        case EigenVerdict::eigenvalue: return "eigenvalue";
        case EigenVerdict::not_eigenvalue: return "not-eigenvalue";
        default: return "inconclusive";
    }
}

struct EigenClassification {
    Complex lambda;
    EigenVerdict verdict = EigenVerdict::inconclusive;
    RefinementTrace evidence;
    std::optional<double> norm_if_member;
};

// lambda in E(T) iff gamma_lambda in A^2(Omega), probed through the partial
// integrals of |gamma_lambda|^2 about the singular point 1/lambda.
inline EigenClassification eigen_classify(const DomainSpec& dom, Complex lambda,
                                          const std::vector<double>& scales = {
                                              0.2, 0.14, 0.098, 0.0686, 0.048, 0.0336,
                                              0.0235},
                                          double tol = 1e-7) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
        throw PreconditionError("eigen_classify: lambda must be unimodular");
    EigenClassification out;
    out.lambda = lambda;
    DivergenceProbe probe = divergence_probe(dom, lambda, scales, tol);
    out.evidence = probe.trace;
    switch (probe.classification) {
        case DivergenceClass::convergent: {
            out.verdict = EigenVerdict::eigenvalue;
            QuadResult q = norm_sq(gamma(lambda), dom, tol);
            if (q.converged) out.norm_if_member = std::sqrt(q.value.real());
            else out.verdict = EigenVerdict::inconclusive;
            break;
        }
        case DivergenceClass::log_divergent:
            out.verdict = EigenVerdict::not_eigenvalue;
            break;
        default:
            out.verdict = EigenVerdict::inconclusive;
    }
    return out;
}

}  // namespace tshift
