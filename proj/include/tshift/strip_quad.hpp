#pragma once

#include <algorithm>

#include "tshift/quad.hpp"

namespace tshift {

// In strip coordinates z = tan(pi/4 + s/2) e^{it} the spherical measure is
// dm2 = cos(s) ds dt, and disc, crescent hole, cusp hulls and circular
// excisions all cut closed-form latitude intervals at fixed longitude. The
// domain is integrated as an adaptive 1-D problem in t whose integrand is a
// sum of smooth inner integrals; the ultraflat cusp slivers keep their exact
// widths (computed in latitude space), which a planar mesh cannot resolve.

struct Excision {
    Complex center;
    double radius = 0.0;
};

struct Interval {
    double lo, hi;
};

namespace detail {

/// Latitude interval cut by |z - c| <= r at longitude t, intersected with s < 0.
inline std::optional<Interval> ball_latitudes(Complex c, double r, double t) {
    double a = std::abs(c) * std::cos(t - std::arg(c));
    double disc = a * a - std::norm(c) + r * r;
    if (disc < 0.0) return std::nullopt;
    double d = std::sqrt(disc);
    double r_lo = a - d, r_hi = a + d;
    if (r_hi <= 0.0) return std::nullopt;
    double s_lo = r_lo <= 0.0 ? -kHalfPi : strip_latitude(r_lo);
    double s_hi = strip_latitude(r_hi);
    if (s_lo >= 0.0) return std::nullopt;
    return Interval{s_lo, std::min(s_hi, 0.0)};
}

inline void subtract_interval(std::vector<Interval>& set, const Interval& cut) {
    if (!(cut.hi > cut.lo)) return;
    std::vector<Interval> out;
    out.reserve(set.size() + 1);
    for (const Interval& iv : set) {
        if (cut.hi <= iv.lo || cut.lo >= iv.hi) {
            out.push_back(iv);
            continue;
        }
        if (cut.lo > iv.lo) out.push_back({iv.lo, cut.lo});
        if (cut.hi < iv.hi) out.push_back({cut.hi, iv.hi});
    }
    set = std::move(out);
}

}  // namespace detail

/// Latitude intervals of Omega (minus excisions) at longitude t.
inline void domain_latitudes(const DomainSpec& dom, double t,
                             const std::vector<Excision>& excisions,
                             std::vector<Interval>& out) {
    out.clear();
    out.push_back({-kHalfPi, 0.0});
    if (dom.base == BaseKind::crescent) {
        auto iv = detail::ball_latitudes(dom.crescent_center, dom.crescent_radius, t);
        if (iv) detail::subtract_interval(out, *iv);
    }
    for (const CuspRegion& c : dom.cusps) {
        double u = wrap_angle(t - c.anchor_angle);
        auto iv = c.latitude_interval(u);
        if (iv) detail::subtract_interval(out, {iv->first, iv->second});
    }
    for (const Excision& e : excisions) {
        auto iv = detail::ball_latitudes(e.center, e.radius, t);
        if (iv) detail::subtract_interval(out, *iv);
    }
}

struct StripOptions {
    std::vector<Excision> excisions;
    std::vector<double> breakpoints;   // extra longitudes (pole angles, cuts)
    std::optional<Excision> window;    // restrict integration to this ball
    int max_pieces = 6000;
    double inner_rel_tol = 1e-12;
};

namespace detail {

struct GkValue {
    Complex value{0.0, 0.0};
    double error = 0.0;
    bool finite = true;
};

template <typename F>
GkValue gk15(const F& h, double a, double b) {
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    Complex k(0, 0), g(0, 0);
    int gi = 0;
    bool ok = true;
    for (int i = 0; i < 15; ++i) {
        Complex v = h(c + hw * gauss::k15_x[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            v = Complex(0.0, 0.0);
            ok = false;
        }
        k += gauss::k15_w[i] * v;
        if (i % 2 == 1) g += gauss::g7_w[gi++] * v;
    }
    k *= hw;
    g *= hw;
    return GkValue{k, std::abs(k - g), ok};
}

template <typename F>
GkValue adaptive_gk(const F& h, double a, double b, double abs_tol, double rel_tol,
                    int depth = 0) {
    GkValue v = gk15(h, a, b);
    if (depth >= 45) return v;
    if (v.finite && v.error <= std::max(abs_tol, std::abs(v.value) * rel_tol)) return v;
    double m = 0.5 * (a + b);
    GkValue l = adaptive_gk(h, a, m, 0.5 * abs_tol, rel_tol, depth + 1);
    GkValue r = adaptive_gk(h, m, b, 0.5 * abs_tol, rel_tol, depth + 1);
    return GkValue{l.value + r.value, l.error + r.error, l.finite && r.finite && v.finite};
}

struct Piece {
    double a, b;
    Complex value;
    double error;
    bool finite;
    long id;
};

}  // namespace detail

/// Adaptive integration of f against m2 over the domain in strip coordinates.
inline QuadResult integrate_strip(const DomainSpec& dom, const Integrand& f, double tol,
                                  const StripOptions& opts = {}) {
    if (!(tol > 0.0)) throw PreconditionError("integrate_strip: tol must be positive");
    std::vector<double> cuts{-kPi, kPi};
    auto add_cut = [&](double t) { cuts.push_back(wrap_angle(t)); };
    for (const CuspRegion& c : dom.cusps) {
        add_cut(c.anchor_angle);
        add_cut(c.anchor_angle - c.angular_limit());
        add_cut(c.anchor_angle + c.angular_limit());
    }
    if (dom.base == BaseKind::crescent) {
        double aw = std::abs(dom.crescent_center) > 0
                        ? std::asin(std::min(1.0, dom.crescent_radius / std::abs(dom.crescent_center)))
                        : kPi;
        add_cut(std::arg(dom.crescent_center) - aw);
        add_cut(std::arg(dom.crescent_center) + aw);
    }
    for (const Excision& e : opts.excisions)
        if (std::abs(e.center) > 0) add_cut(std::arg(e.center));
    for (double b : opts.breakpoints) add_cut(b);
    if (opts.window && std::abs(opts.window->center) > 0) {
        double aw = std::asin(std::min(1.0, opts.window->radius / std::abs(opts.window->center)));
        add_cut(std::arg(opts.window->center) - aw);
        add_cut(std::arg(opts.window->center) + aw);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               cuts.end());

    long evals = 0;
    std::vector<Interval> scratch;
    auto outer = [&](double t) -> Complex {
        domain_latitudes(dom, t, opts.excisions, scratch);
        if (opts.window) {
            auto wiv = detail::ball_latitudes(opts.window->center, opts.window->radius, t);
            std::vector<Interval> clipped;
            if (wiv) {
                for (const Interval& iv : scratch) {
                    double lo = std::max(iv.lo, wiv->lo), hi = std::min(iv.hi, wiv->hi);
                    if (hi > lo) clipped.push_back({lo, hi});
                }
            }
            scratch = std::move(clipped);
        }
        Complex acc(0, 0);
        for (const Interval& iv : scratch) {
            auto inner = [&](double s) -> Complex {
                ++evals;
                Complex z = std::polar(strip_radius(s), t);
                return f(z) * std::cos(s);
            };
            auto v = detail::adaptive_gk(inner, iv.lo, iv.hi, tol * 1e-6, opts.inner_rel_tol);
            acc += v.value;
            if (!v.finite) acc += Complex(1e308, 0.0);  // poison, caught by outer
        }
        return acc;
    };

    std::vector<detail::Piece> pieces;
    long next_id = 0;
    auto eval_piece = [&](double a, double b) {
        auto v = detail::gk15(outer, a, b);
        // refine the outer estimate one level before trusting it
        auto l = detail::gk15(outer, a, 0.5 * (a + b));
        auto r = detail::gk15(outer, 0.5 * (a + b), b);
        Complex fine = l.value + r.value;
        double err = std::abs(fine - v.value) + 0.25 * (l.error + r.error);
        pieces.push_back({a, b, fine, err, v.finite && l.finite && r.finite, next_id++});
        std::push_heap(pieces.begin(), pieces.end(),
                       [](const detail::Piece& x, const detail::Piece& y) {
                           return x.error < y.error || (x.error == y.error && x.id > y.id);
                       });
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] - cuts[i] > 1e-14) eval_piece(cuts[i], cuts[i + 1]);

    auto heap_cmp = [](const detail::Piece& x, const detail::Piece& y) {
        return x.error < y.error || (x.error == y.error && x.id > y.id);
    };
    bool budget_hit = false;
    while (true) {
        double total_err = 0.0;
        for (const detail::Piece& p : pieces) total_err += p.error;
        if (total_err <= tol) break;
        if (static_cast<long>(pieces.size()) >= opts.max_pieces) {
            budget_hit = true;
            break;
        }
        std::pop_heap(pieces.begin(), pieces.end(), heap_cmp);
        detail::Piece worst = pieces.back();
        pieces.pop_back();
        if (worst.error <= tol / (8.0 * std::max<std::size_t>(1, pieces.size()))) {
            pieces.push_back(worst);
            std::push_heap(pieces.begin(), pieces.end(), heap_cmp);
            break;  // error dominated by many small pieces; good enough
        }
        double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) {
            pieces.push_back(worst);
            std::push_heap(pieces.begin(), pieces.end(), heap_cmp);
            budget_hit = true;
            break;
        }
        eval_piece(worst.a, m);
        eval_piece(m, worst.b);
    }

    std::sort(pieces.begin(), pieces.end(),
              [](const detail::Piece& x, const detail::Piece& y) { return x.a < y.a; });
    std::vector<Complex> vals;
    std::vector<double> errs;
    bool all_finite = true;
    for (const detail::Piece& p : pieces) {
        vals.push_back(p.value);
        errs.push_back(p.error);
        all_finite = all_finite && p.finite;
    }
    QuadResult res;
    res.value = pairwise_sum(vals);
    res.error_estimate = pairwise_sum(errs);
    res.cells_used = std::max<long>(1, evals);
    res.max_depth_hit = budget_hit;
    res.converged = all_finite && !budget_hit && res.error_estimate <= tol;
    return res;
}

// ---------------------------------------------------------------------------
// W-integrals and divergence diagnosis

struct RefinementTrace {
    std::vector<std::pair<double, double>> entries;  // (epsilon, partial integral)
};

/// Singular point of |1 - alpha z|: z = 1/alpha.
inline std::optional<Complex> kernel_singularity(Complex alpha) {
    if (alpha == Complex(0.0, 0.0)) return std::nullopt;
    Complex p = 1.0 / alpha;
    if (std::abs(p) > 1.2) return std::nullopt;  // far outside the closed disc
    return p;
}

struct WResult {
    QuadResult result;
    RefinementTrace trace;  // populated only when divergence is suspected
};

/// W_Omega(k, x) = int |1 - x z|^{-(2k+2)} dm2 with pole-aware refinement.
inline WResult w_integral(const DomainSpec& dom, int k, Complex x, double tol) {
    if (k < 0) throw PreconditionError("w_integral: k must be >= 0");
    if (!(tol > 0.0)) throw PreconditionError("w_integral: tol must be positive");
    Integrand f;
    if (x == Complex(0.0, 0.0)) {
        f = [](Complex) { return Complex(1.0, 0.0); };
    } else {
        double expo = -(k + 1.0);
        Complex xx = x;
        f = [xx, expo](Complex z) {
            return Complex(std::pow(std::norm(1.0 - xx * z), expo), 0.0);
        };
    }
    StripOptions opts;
    auto pole = kernel_singularity(x);
    if (pole) {
        double pa = std::arg(*pole);
        opts.breakpoints = {pa, pa - 0.05, pa + 0.05, pa - 0.3, pa + 0.3};
    }
    WResult wr;
    wr.result = integrate_strip(dom, f, tol, opts);
    if (!wr.result.converged && pole) {
        for (double eps : {0.1, 0.05, 0.025, 0.0125, 0.00625}) {
            StripOptions eo = opts;
            eo.excisions.push_back({*pole, eps});
            QuadResult part = integrate_strip(dom, f, tol, eo);
            wr.trace.entries.emplace_back(eps, part.value.real());
        }
    }
    return wr;
}

// log_tail_integral(k, r) = int_{e^{1/r}}^inf e^{-u} u^{-1} log^{2k}(u) du,
// split at max(k^2, e^{1/r}); the integrand is evaluated through its logarithm
// so that log^{2k}(u) never overflows.
inline double log_tail_integral(int k, double r) {
    if (k < 0) throw PreconditionError("log_tail_integral: k must be >= 0");
    if (!(r > 0.0) || !(r < 1.0)) throw PreconditionError("log_tail_integral: r in (0,1)");
    const double lo = std::exp(1.0 / r);
    const double split = std::max(static_cast<double>(k) * k, lo);
    const double p = 2.0 * k;
    auto log_integrand = [p](double u) {
        return -u - std::log(u) + (p > 0 ? p * std::log(std::log(u)) : 0.0);
    };
    // shift by the maximum of the log-integrand over the active range
    auto integrate_log = [&](double a, double b) -> double {
        if (!(b > a)) return 0.0;
        double shift = std::max(log_integrand(a), log_integrand(b));
        double mid_u = std::clamp(p / std::log(std::max(a, 3.0)), a, b);
        shift = std::max(shift, log_integrand(mid_u));
        auto h = [&](double u) { return Complex(std::exp(log_integrand(u) - shift), 0.0); };
        auto v = detail::adaptive_gk(h, a, b, 1e-16, 1e-13);
        return std::exp(shift) * v.value.real();
    };
    double tail_end = split + 60.0 + 14.0 * k;  // e^{-u} kills the rest
    double total = 0.0;
    if (lo < split) total += integrate_log(lo, split);
    total += integrate_log(std::max(lo, split), tail_end);
    return total;
}

enum class DivergenceClass { convergent, log_divergent, inconclusive };

inline const char* to_string(DivergenceClass c) {
    switch (c) {
        case DivergenceClass::convergent: return "convergent";
        case DivergenceClass::log_divergent: return "log-divergent";
        default: return "inconclusive";
    }
}

struct DivergenceProbe {
    RefinementTrace trace;
    DivergenceClass classification = DivergenceClass::inconclusive;
    double log_slope = 0.0;       // c in  partial ~ a + c*log(1/eps)
    double fit_residual = 0.0;    // relative to the variation of the partials
};

// Partial integrals of |gamma_alpha|^2 over Omega minus shrinking balls about
// the singular point 1/alpha, with a fit-based classification. Divergence is
// not decidable numerically; the contract is an indicator with an explicit
// inconclusive outcome.
inline DivergenceProbe divergence_probe(const DomainSpec& dom, Complex alpha,
                                        const std::vector<double>& scales,
                                        double tol = 1e-7) {
    if (scales.size() < 3)
        throw PreconditionError("divergence_probe: need at least 3 scales for a fit");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0) || !(scales[i] < 1.0))
            throw PreconditionError("divergence_probe: scales must lie in (0,1)");
        if (i > 0 && !(scales[i] < scales[i - 1]))
            throw PreconditionError("divergence_probe: scales must strictly decrease");
    }
    Complex a = alpha;
    Integrand f = [a](Complex z) {
        return Complex(1.0 / std::norm(1.0 - a * z), 0.0);
    };
    auto pole = kernel_singularity(alpha);
    DivergenceProbe probe;
    for (double eps : scales) {
        StripOptions opts;
        if (pole) {
            opts.excisions.push_back({*pole, eps});
            double pa = std::arg(*pole);
            opts.breakpoints = {pa};
        }
        QuadResult part = integrate_strip(dom, f, tol, opts);
        probe.trace.entries.emplace_back(eps, part.value.real());
    }
    const auto& e = probe.trace.entries;
    const std::size_t n = e.size();
    // geometric decay of increments => convergent
    bool geometric = true;
    double prev_inc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double inc = e[i + 1].second - e[i].second;
        if (inc < -1e-6 * std::abs(e[i].second)) geometric = false;
        if (i > 0 && inc > 0.92 * prev_inc + 1e-9 * std::abs(e[i].second)) geometric = false;
        prev_inc = std::max(inc, 0.0);
    }
    // least squares fit against log(1/eps)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [eps, p] : e) {
        double x = std::log(1.0 / eps);
        sx += x;
        sy += p;
        sxx += x * x;
        sxy += x * p;
    }
    double denom = n * sxx - sx * sx;
    double c = (n * sxy - sx * sy) / denom;
    double b = (sy - c * sx) / n;
    double ss_res = 0, ss_var = 0, mean = sy / n;
    for (const auto& [eps, p] : e) {
        double fit = b + c * std::log(1.0 / eps);
        ss_res += (p - fit) * (p - fit);
        ss_var += (p - mean) * (p - mean);
    }
    probe.log_slope = c;
    probe.fit_residual = ss_var > 0 ? std::sqrt(ss_res / ss_var) : 1.0;
    if (geometric) {
        probe.classification = DivergenceClass::convergent;
    } else if (c > 0.0 && probe.fit_residual < 0.10) {
        probe.classification = DivergenceClass::log_divergent;
    } else {
        probe.classification = DivergenceClass::inconclusive;
    }
    return probe;
}

}  // namespace tshift
