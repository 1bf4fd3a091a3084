#pragma once

#include <array>
#include <functional>

#include "tshift/domain.hpp"

namespace tshift {

/// Density of the spherical measure: dm2 = 4/(1+|z|^2)^2 dA. Total mass of the
/// sphere is 4*pi; the unit disc carries 2*pi.
inline double spherical_density(Complex z) {
    double q = 1.0 + std::norm(z);
    return 4.0 / (q * q);
}

struct QuadResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    long cells_used = 0;
    bool max_depth_hit = false;
    bool converged = false;

    double real_value() const { return value.real(); }
};

using Integrand = std::function<Complex(Complex)>;

namespace gauss {

// Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 4> gl8_x = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
inline constexpr std::array<double, 4> gl8_w = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

inline constexpr std::array<double, 2> gl4_x = {0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 2> gl4_w = {0.6521451548625461, 0.3478548451374538};

// Kronrod 15 with embedded Gauss 7 (QUADPACK 15-point pair).
inline constexpr std::array<double, 15> k15_x = {
    -0.9914553711208126, -0.9491079123427585, -0.8648644233597691, -0.7415311855993945,
    -0.5860872354676911, -0.4058451513773972, -0.2077849550078985, 0.0,
    0.2077849550078985,  0.4058451513773972,  0.5860872354676911,  0.7415311855993945,
    0.8648644233597691,  0.9491079123427585,  0.9914553711208126};
inline constexpr std::array<double, 15> k15_w = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278,
    0.2044329400752989, 0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
// Gauss-7 weights aligned with the odd Kronrod nodes (indices 1,3,...,13).
inline constexpr std::array<double, 7> g7_w = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

}  // namespace gauss

namespace detail {

/// Distance proxy from z to the nearest piece of the domain boundary.
inline double boundary_clearance(const DomainSpec& dom, Complex z) {
    double g = std::abs(1.0 - std::abs(z));
    if (dom.base == BaseKind::crescent)
        g = std::min(g, std::abs(std::abs(z - dom.crescent_center) - dom.crescent_radius));
    for (const CuspRegion& c : dom.cusps) g = std::min(g, c.boundary_gap(z));
    return g;
}

inline bool strictly_inside(const DomainSpec& dom, Complex z) {
    return domain_membership(dom, z, 1e-13) == Region::inside;
}

struct Cell {
    double x0, y0, size;
    Complex corner(int i) const {
        return Complex(x0 + (i & 1 ? size : 0.0), y0 + (i & 2 ? size : 0.0));
    }
    Complex center() const { return Complex(x0 + 0.5 * size, y0 + 0.5 * size); }
};

enum class CellClass { inside, outside, boundary };

inline CellClass classify_cell(const DomainSpec& dom, const Cell& c) {
    double half_diag = c.size * 0.7071067811865476;
    int in_count = 0;
    double min_clear = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 5; ++i) {
        Complex p = i < 4 ? c.corner(i) : c.center();
        if (strictly_inside(dom, p)) ++in_count;
        min_clear = std::min(min_clear, boundary_clearance(dom, p));
    }
    if (in_count == 5 && min_clear > half_diag) return CellClass::inside;
    if (in_count == 0 && min_clear > half_diag) return CellClass::outside;
    return CellClass::boundary;
}

struct TreeLeaf {
    Cell cell;
    int depth;
    bool boundary;
    Complex value;
    double error;
    long id;
};

// Boundary tangency points whose slivers can be thinner than the probe
// spacing of a boundary cell. Each knows the gap width at angular distance u,
// from which a bound on the mass a cell of size h can hide follows.
struct PinchPoint {
    Complex at;
    bool ultraflat;  // cusp anchor (doubly-exponential) vs parabolic tangency
    double rho = 1.0;

    double gap_width(double u) const {
        return ultraflat ? rho * cusp_profile(u) : 0.5 * u * u;
    }

    // Mass a cell of size h whose center sits near the circle at angular
    // distance d from the pinch can hide: zero once the gap is resolvable.
    double hidden_mass_bound(Complex cell_center, double h) const {
        double r = std::abs(cell_center);
        if (std::abs(r - 1.0) > 2.0 * h) return 0.0;
        double d = std::abs(wrap_angle(std::arg(cell_center) - std::arg(at)));
        if (d > 0.8) return 0.0;
        double w = gap_width(d + 2.0 * h);
        if (w >= h / 8.0) return 0.0;  // probes resolve the sliver
        return 4.0 * w * 2.0 * h;      // density <= 4 on the disc
    }
};

inline std::vector<PinchPoint> pinch_points(const DomainSpec& dom) {
    std::vector<PinchPoint> pts;
    if (dom.base == BaseKind::crescent) {
        double m = std::abs(dom.crescent_center);
        if (m > 0 && std::abs(m + dom.crescent_radius - 1.0) < 1e-9)
            pts.push_back({dom.crescent_center / m, false, 1.0});
    }
    for (const CuspRegion& c : dom.cusps) pts.push_back({c.anchor(), true, c.cup.rho});
    return pts;
}

struct TreeState {
    const DomainSpec* dom;
    const Integrand* f;
    int max_depth;
    std::vector<PinchPoint> pinches;
    long evals = 0;
    long next_id = 0;
    bool depth_hit = false;

    Complex weighted(Complex z) {
        ++evals;
        return (*f)(z)*spherical_density(z);
    }

    Complex gl_cell(const Cell& c, bool fine) {
        double hx = 0.5 * c.size;
        Complex mid = c.center();
        Complex acc(0, 0);
        int m = fine ? 4 : 2;
        const double* xs = fine ? gauss::gl8_x.data() : gauss::gl4_x.data();
        const double* ws = fine ? gauss::gl8_w.data() : gauss::gl4_w.data();
        for (int i = 0; i < m; ++i)
            for (int si = -1; si <= 1; si += 2)
                for (int j = 0; j < m; ++j)
                    for (int sj = -1; sj <= 1; sj += 2) {
                        Complex z = mid + Complex(si * hx * xs[i], sj * hx * xs[j]);
                        acc += ws[i] * ws[j] * weighted(z);
                    }
        return acc * (hx * hx);
    }

    // Column rule for a boundary cell: per abscissa, the inside segments are
    // located by probing plus bisection, then integrated with a small rule.
    // Columns run across the boundary (axis chosen from the corner pattern) so
    // the per-column mass is a smooth function of the abscissa.
    Complex column_rule(const Cell& c, bool fine, bool columns_along_y) {
        double hx = 0.5 * c.size;
        Complex acc(0, 0);
        auto point = [&](double a, double b) {  // a = abscissa, b = along-column
            return columns_along_y ? Complex(a, b) : Complex(b, a);
        };
        auto inside = [&](double a, double b) {
            return strictly_inside(*dom, point(a, b));
        };
        const double b0 = columns_along_y ? c.y0 : c.x0;
        auto segment = [&](double a, double blo, double bhi, double wa) {
            if (!(bhi > blo)) return;
            double h = 0.5 * (bhi - blo), m = 0.5 * (bhi + blo);
            Complex s(0, 0);
            for (int j = 0; j < 2; ++j)
                for (int sj = -1; sj <= 1; sj += 2)
                    s += gauss::gl4_w[j] * weighted(point(a, m + sj * h * gauss::gl4_x[j]));
            acc += wa * h * s;
        };
        auto column = [&](double a, double wa) {
            constexpr int kProbes = 17;
            std::array<bool, kProbes> in{};
            for (int i = 0; i < kProbes; ++i)
                in[i] = inside(a, b0 + c.size * i / (kProbes - 1));
            auto refine = [&](double blo, double bhi, bool lo_in) {
                for (int it = 0; it < 42; ++it) {
                    double bm = 0.5 * (blo + bhi);
                    if (inside(a, bm) == lo_in) blo = bm;
                    else bhi = bm;
                }
                return 0.5 * (blo + bhi);
            };
            double seg_lo = b0;
            bool open = in[0];
            for (int i = 0; i + 1 < kProbes; ++i) {
                if (in[i] == in[i + 1]) continue;
                double bc = refine(b0 + c.size * i / (kProbes - 1),
                                   b0 + c.size * (i + 1) / (kProbes - 1), in[i]);
                if (in[i]) segment(a, seg_lo, bc, wa), open = false;
                else seg_lo = bc, open = true;
            }
            if (open) segment(a, seg_lo, b0 + c.size, wa);
        };
        int m = fine ? 4 : 2;
        const double* xs = fine ? gauss::gl8_x.data() : gauss::gl4_x.data();
        const double* ws = fine ? gauss::gl8_w.data() : gauss::gl4_w.data();
        double amid = columns_along_y ? c.center().real() : c.center().imag();
        for (int i = 0; i < m; ++i)
            for (int si = -1; si <= 1; si += 2)
                column(amid + si * hx * xs[i], ws[i] * hx);
        return acc;
    }

    TreeLeaf make_leaf(const Cell& c, int depth, CellClass cl) {
        TreeLeaf leaf;
        leaf.cell = c;
        leaf.depth = depth;
        leaf.boundary = (cl == CellClass::boundary);
        if (leaf.boundary) {
            // 3x3 membership pattern decides the column axis: columns must
            // cross the boundary, not run parallel to it.
            bool m[3][3];
            for (int iy = 0; iy < 3; ++iy)
                for (int ix = 0; ix < 3; ++ix)
                    m[iy][ix] = strictly_inside(
                        *dom, Complex(c.x0 + 0.5 * c.size * ix, c.y0 + 0.5 * c.size * iy));
            int across_x = 0, across_y = 0;
            for (int iy = 0; iy < 3; ++iy)
                for (int ix = 0; ix < 2; ++ix) across_x += m[iy][ix] != m[iy][ix + 1];
            for (int ix = 0; ix < 3; ++ix)
                for (int iy = 0; iy < 2; ++iy) across_y += m[iy][ix] != m[iy + 1][ix];
            bool along_y = across_y >= across_x;  // horizontal-ish boundary
            Complex fine = column_rule(c, true, along_y);
            Complex coarse = column_rule(c, false, along_y);
            leaf.value = fine;
            leaf.error = std::abs(fine - coarse);
        } else {
            Complex fine = gl_cell(c, true);
            Complex coarse = gl_cell(c, false);
            leaf.value = fine;
            leaf.error = std::abs(fine - coarse);
        }
        // account for sliver mass below sampling resolution near pinches
        if (leaf.boundary) {
            for (const PinchPoint& p : pinches) {
                double bound = p.hidden_mass_bound(c.center(), c.size);
                if (bound > 0.0) {
                    double fs = std::abs((*f)(c.center() * (1.0 - 1e-9)));
                    if (!std::isfinite(fs)) fs = 1e12;
                    leaf.error += bound * std::max(1.0, fs);
                }
            }
        }
        leaf.id = next_id++;
        return leaf;
    }
};

}  // namespace detail

// Adaptive quadtree integration of f against m2 over the domain. Interior
// cells use a tensor Gauss-Legendre rule; cells cut by the boundary use a
// column rule whose segments are located by bisection on membership. Cells
// are refined worst-error-first until the summed estimate meets the
// tolerance. Deterministic: fixed ordering, pairwise reduction.
inline QuadResult integrate(const DomainSpec& dom, const Integrand& f, double tol,
                            int max_depth = 30) {
    if (!(tol > 0.0)) throw PreconditionError("integrate: tol must be positive");
    if (max_depth < 4) throw PreconditionError("integrate: max_depth too small");
    detail::TreeState st;
    st.dom = &dom;
    st.f = &f;
    st.max_depth = max_depth;
    st.pinches = detail::pinch_points(dom);

    std::vector<detail::TreeLeaf> leaves;
    // seed with a uniform grid fine enough to see the domain pieces
    const int seed_depth = 4;
    const int n0 = 1 << seed_depth;
    for (int iy = 0; iy < n0; ++iy)
        for (int ix = 0; ix < n0; ++ix) {
            detail::Cell c{-1.0 + 2.0 * ix / n0, -1.0 + 2.0 * iy / n0, 2.0 / n0};
            detail::CellClass cl = detail::classify_cell(dom, c);
            if (cl == detail::CellClass::outside) continue;
            leaves.push_back(st.make_leaf(c, seed_depth, cl));
        }

    auto cmp = [](const detail::TreeLeaf& a, const detail::TreeLeaf& b) {
        return a.error < b.error || (a.error == b.error && a.id > b.id);
    };
    std::make_heap(leaves.begin(), leaves.end(), cmp);
    double total_err = 0.0;
    for (const auto& l : leaves) total_err += l.error;
    const long cell_budget = 200000;
    while (total_err > tol) {
        if (static_cast<long>(leaves.size()) >= cell_budget) {
            st.depth_hit = true;
            break;
        }
        std::pop_heap(leaves.begin(), leaves.end(), cmp);
        detail::TreeLeaf worst = leaves.back();
        leaves.pop_back();
        if (worst.depth >= max_depth ||
            worst.error <= tol / (16.0 * std::max<std::size_t>(1, leaves.size()))) {
            if (worst.depth >= max_depth) st.depth_hit = true;
            leaves.push_back(worst);
            std::push_heap(leaves.begin(), leaves.end(), cmp);
            break;
        }
        total_err -= worst.error;
        double h = 0.5 * worst.cell.size;
        for (int q = 0; q < 4; ++q) {
            detail::Cell k{worst.cell.x0 + (q & 1 ? h : 0.0),
                           worst.cell.y0 + (q & 2 ? h : 0.0), h};
            detail::CellClass cl = detail::classify_cell(dom, k);
            if (cl == detail::CellClass::outside) continue;
            leaves.push_back(st.make_leaf(k, worst.depth + 1, cl));
            total_err += leaves.back().error;
            std::push_heap(leaves.begin(), leaves.end(), cmp);
        }
    }

    std::sort(leaves.begin(), leaves.end(),
              [](const detail::TreeLeaf& a, const detail::TreeLeaf& b) {
                  if (a.cell.y0 != b.cell.y0) return a.cell.y0 < b.cell.y0;
                  if (a.cell.x0 != b.cell.x0) return a.cell.x0 < b.cell.x0;
                  return a.depth < b.depth;
              });
    std::vector<Complex> vals;
    std::vector<double> errs;
    vals.reserve(leaves.size());
    for (const auto& l : leaves) {
        vals.push_back(l.value);
        errs.push_back(l.error);
    }
    QuadResult res;
    res.value = pairwise_sum(vals);
    res.error_estimate = pairwise_sum(errs);
    res.cells_used = std::max<long>(1, static_cast<long>(leaves.size()));
    res.max_depth_hit = st.depth_hit;
    res.converged = res.error_estimate <= tol && !st.depth_hit;
    return res;
}

}  // namespace tshift
