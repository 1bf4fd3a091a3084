#pragma once

#include <Eigen/Dense>

#include "tshift/rational.hpp"

namespace tshift {

// Constructive stand-in for the Runge step: the target gamma_{alpha,j} is
// fitted on the compact set K = closed disc minus the window {|z-1| < r} by a
// combination of simple kernels gamma_zeta with zeta drawn from a pool of
// circle points inside the window. Poles are picked greedily by fit
// improvement; the returned sup error is measured on a denser validation grid.

struct CompactComplement {
    double window_radius = 0.5;  // r of the removed window about 1
    int boundary_samples = 600;
    int validation_factor = 3;

    void validate() const {
        if (!(window_radius > 0.0) || !(window_radius < 2.0))
            throw PreconditionError("CompactComplement: window radius must be in (0,2)");
        if (boundary_samples < 32)
            throw PreconditionError("CompactComplement: too few samples");
    }

    // K's boundary: the circle arc |z|=1 outside the window, the window arc
    // |z-1|=r inside the disc, and a few interior rings for LS stability.
    std::vector<Complex> sample(int factor) const {
        std::vector<Complex> pts;
        const int m = boundary_samples * factor;
        double theta_min = 2.0 * std::asin(std::min(1.0, window_radius / 2.0));
        for (int i = 0; i <= m; ++i) {
            double th = theta_min + (kTwoPi - 2.0 * theta_min) * i / m;
            pts.push_back(unit(th));
        }
        // window arc inside the closed disc
        for (int i = 0; i <= m / 2; ++i) {
            double ph = kPi / 2.0 + kPi * i / (m / 2);
            Complex z = 1.0 + window_radius * unit(ph);
            if (std::abs(z) <= 1.0) pts.push_back(z);
        }
        for (double ring : {0.35, 0.7, 0.9}) {
            for (int i = 0; i < m / 4; ++i) {
                Complex z = std::polar(ring, -kPi + kTwoPi * (i + 0.5) / (m / 4));
                if (std::abs(z - 1.0) >= window_radius) pts.push_back(z);
            }
        }
        return pts;
    }
};

struct RungeResult {
    RationalCombo approximant;
    double sup_error = std::numeric_limits<double>::infinity();
    bool success = false;
    std::vector<double> pole_angles_used;
};

namespace detail {

inline double grid_sup_error(const RationalCombo& target, const RationalCombo& fit,
                             const std::vector<Complex>& grid) {
    double sup = 0.0;
    for (const Complex& z : grid)
        sup = std::max(sup, std::abs(evaluate(target, z) - evaluate(fit, z)));
    return sup;
}

inline RationalCombo ls_fit(const RationalCombo& target,
                            const std::vector<double>& pole_angles,
                            const std::vector<Complex>& grid) {
    const int n = static_cast<int>(pole_angles.size());
    const int m = static_cast<int>(grid.size());
    Eigen::MatrixXcd A(m, n);
    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i) {
        b(i) = evaluate(target, grid[i]);
        for (int j = 0; j < n; ++j)
            A(i, j) = 1.0 / (1.0 - unit(pole_angles[j]) * grid[i]);
    }
    // minimum-norm least squares keeps coefficients tame when poles cluster
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
    cod.setThreshold(1e-11);
    Eigen::VectorXcd c = cod.solve(b);
    RationalCombo fit;
    for (int j = 0; j < n; ++j)
        fit.terms.push_back({unit(pole_angles[j]), 0, c(j)});
    return canonicalize(std::move(fit));
}

}  // namespace detail

inline RungeResult runge_approximant(int j, Complex alpha, int pole_budget,
                                     const std::vector<double>& pole_pool,
                                     const CompactComplement& K, double tol) {
    if (j < 0) throw PreconditionError("runge_approximant: j must be >= 0");
    if (pole_pool.empty()) throw PreconditionError("runge_approximant: empty pole pool");
    if (!(tol > 0.0)) throw PreconditionError("runge_approximant: tol must be positive");
    K.validate();
    RationalCombo target = gamma(alpha, j);
    std::vector<Complex> fit_grid = K.sample(1);
    std::vector<Complex> val_grid = K.sample(K.validation_factor);

    RungeResult best;
    best.approximant = RationalCombo{};
    best.sup_error = detail::grid_sup_error(target, best.approximant, val_grid);
    if (pole_budget <= 0) return best;  // failure carrying max |target| on K

    std::vector<double> chosen;
    std::vector<char> used(pole_pool.size(), 0);
    for (int round = 0; round < pole_budget && static_cast<int>(chosen.size()) <
                                                   static_cast<int>(pole_pool.size());
         ++round) {
        int pick = -1;
        double pick_err = std::numeric_limits<double>::infinity();
        RationalCombo pick_fit;
        for (std::size_t p = 0; p < pole_pool.size(); ++p) {
            if (used[p]) continue;
            std::vector<double> trial = chosen;
            trial.push_back(pole_pool[p]);
            RationalCombo fit = detail::ls_fit(target, trial, fit_grid);
            double err = detail::grid_sup_error(target, fit, fit_grid);
            if (err < pick_err) {
                pick_err = err;
                pick = static_cast<int>(p);
                pick_fit = fit;
            }
        }
        if (pick < 0) break;
        used[pick] = 1;
        chosen.push_back(pole_pool[pick]);
        double val_err = detail::grid_sup_error(target, pick_fit, val_grid);
        if (val_err < best.sup_error) {
            best.sup_error = val_err;
            best.approximant = pick_fit;
            best.pole_angles_used = chosen;
        }
        if (best.sup_error <= tol) break;
    }
    best.success = best.sup_error <= tol;
    return best;
}

}  // namespace tshift
