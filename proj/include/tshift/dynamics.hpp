#pragma once

#include "tshift/cauchy.hpp"

namespace tshift {

/// ||T^n f|| for n = 0..N, exact shifts followed by quadrature norms.
inline std::vector<double> orbit_norms(const DomainSpec& dom, const RationalCombo& f,
                                       int N, double tol) {
    if (N < 0) throw PreconditionError("orbit_norms: N must be >= 0");
    for (const Complex& p : poles(f)) {
        if (domain_membership(dom, p, 1e-12) == Region::inside)
            throw PreconditionError("orbit_norms: f has a pole inside Omega");
        if (std::abs(std::abs(p) - 1.0) < 1e-12) {
            for (const RationalTerm& t : f.terms)
                if (t.alpha != Complex(0, 0) && std::abs(1.0 / t.alpha - p) < 1e-12 &&
                    !admit_unimodular(dom, t.alpha))
                    throw PreconditionError("orbit_norms: f not in A^2(Omega)");
        }
    }
    std::vector<double> norms;
    RationalCombo g = f;
    for (int n = 0; n <= N; ++n) {
        QuadResult q = norm_sq(g, dom, tol);
        if (!q.converged) throw NumericError("orbit_norms: norm quadrature failed");
        norms.push_back(std::sqrt(std::max(0.0, q.value.real())));
        if (n < N) g = shift_rational(g);
    }
    return norms;
}

struct MixingWitness {
    RationalCombo u;
    long n = 0;
    double err_start = 0.0;  // ||u - f||
    double err_end = 0.0;    // ||T^n u - g||
    double err_start_quad = 0.0;
    double err_end_quad = 0.0;
    RationalCombo interior_part;   // poles of 1/alpha outside the closed disc
    RationalCombo exterior_part;   // poles 1/beta inside removed cusp material
    bool success = false;
    double interior_residual = 0.0;
    double exterior_residual = 0.0;
};

struct MixingBudgets {
    int interior_poles = 13;
    int exterior_poles = 12;
    long n_max = 1 << 22;
};

namespace detail {

/// Interior eigenvalue ladder: alpha = 0 plus two rings inside the disc.
inline std::vector<Complex> interior_pole_ladder(int count) {
    std::vector<Complex> alphas{Complex(0.0, 0.0)};
    int ring = std::max(1, (count - 1) / 2);
    for (int i = 0; i < ring; ++i)
        alphas.push_back(std::polar(0.35, -kPi + kTwoPi * i / ring));
    for (int i = 0; i < count - 1 - ring; ++i)
        alphas.push_back(std::polar(0.68, -kPi + kTwoPi * (i + 0.5) / (count - 1 - ring)));
    return alphas;
}

// Exterior eigenvalue supply: beta = 1/z with z on a depth ladder inside the
// widest cusp hull, nearest the anchor first.
inline std::vector<Complex> exterior_pole_ladder(const DomainSpec& dom, int count) {
    if (dom.cusps.empty())
        throw PreconditionError("mixing_witness: domain has no cusp (no exterior supply)");
    std::size_t widest = 0;
    for (std::size_t i = 1; i < dom.cusps.size(); ++i)
        if (dom.cusps[i].cup.delta > dom.cusps[widest].cup.delta) widest = i;
    const CuspRegion& c = dom.cusps[widest];
    auto iv = c.latitude_interval(0.0);
    if (!iv) throw NumericError("mixing_witness: empty cusp section");
    double deep = -iv->first;   // latitude depth of the chord at the anchor ray
    double top = 1e-3 * deep;
    std::vector<Complex> betas;
    for (int i = 0; i < count; ++i) {
        double s = -(top * std::pow(deep * 0.85 / top, static_cast<double>(i) /
                                                            std::max(1, count - 1)));
        Complex z = std::polar(strip_radius(s), c.anchor_angle);
        if (!c.contains(z)) continue;
        betas.push_back(1.0 / z);
    }
    if (betas.empty()) throw NumericError("mixing_witness: pole ladder left the hull");
    return betas;
}

inline RationalCombo combo_from_coeffs(const std::vector<RationalCombo>& basis,
                                       const Eigen::VectorXcd& c) {
    RationalCombo out;
    for (int i = 0; i < c.size(); ++i)
        out = add(out, scale(basis[i], c(i)));
    return out;
}

}  // namespace detail

// Constructive Godefroy-Shapiro witness: f is approximated in span{gamma_alpha,
// |alpha| < 1}, g in span{gamma_beta, 1/beta inside the removed cusps}, and
// u = f~ + sum c_i beta_i^{-n} gamma_{beta_i} satisfies T^n u = T^n f~ + g~
// exactly in the algebra. n grows by doubling until both errors fall under eps.
inline MixingWitness mixing_witness(const DomainSpec& dom, const RationalCombo& f,
                                    const RationalCombo& g, double eps,
                                    const MixingBudgets& budgets = {}, double tol = 1e-8) {
    if (!(eps > 0.0)) throw PreconditionError("mixing_witness: eps must be positive");
    MixingWitness w;

    std::vector<RationalCombo> ibasis;
    for (Complex a : detail::interior_pole_ladder(budgets.interior_poles))
        ibasis.push_back(gamma(a));
    GramSystem isys = gram_system(ibasis, f, dom, tol);
    Projection ip = project(isys);
    w.interior_residual = ip.residual;
    w.interior_part = detail::combo_from_coeffs(ibasis, ip.coefficients);

    std::vector<Complex> betas = detail::exterior_pole_ladder(dom, budgets.exterior_poles);
    std::vector<RationalCombo> ebasis;
    for (Complex b : betas) ebasis.push_back(gamma(b));
    GramSystem esys = gram_system(ebasis, g, dom, tol);
    Projection ep = project(esys);
    w.exterior_residual = ep.residual;
    w.exterior_part = detail::combo_from_coeffs(ebasis, ep.coefficients);

    if (w.interior_residual > 0.5 * eps || w.exterior_residual > 0.5 * eps) {
        w.success = false;  // basis budgets too small; report achieved residuals
        return w;
    }

    for (long n = 1; n <= budgets.n_max; n *= 2) {
        RationalCombo damped;
        for (const RationalTerm& t : w.exterior_part.terms)
            damped.terms.push_back(
                {t.alpha, t.k, t.c * std::pow(t.alpha, -static_cast<double>(n))});
        damped = canonicalize(std::move(damped));
        RationalCombo u = add(w.interior_part, damped);
        RationalCombo shifted = shift_rational_n(u, n);

        QuadResult qs = norm_sq(sub(u, f), dom, tol);
        QuadResult qe = norm_sq(sub(shifted, g), dom, tol);
        if (!qs.converged || !qe.converged)
            throw NumericError("mixing_witness: error norm quadrature failed");
        double es = std::sqrt(std::max(0.0, qs.value.real()));
        double ee = std::sqrt(std::max(0.0, qe.value.real()));
        if (es < eps && ee < eps) {
            w.u = u;
            w.n = n;
            w.err_start = es;
            w.err_end = ee;
            w.err_start_quad = qs.error_estimate;
            w.err_end_quad = qe.error_estimate;
            w.success = true;
            return w;
        }
    }
    w.success = false;
    return w;
}

}  // namespace tshift
