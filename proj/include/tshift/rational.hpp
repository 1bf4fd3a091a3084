#pragma once

#include <algorithm>

#include "tshift/common.hpp"
#include "tshift/taylor.hpp"

#include "json.hpp"

namespace tshift {

// Exact finite sums  sum c * z^k / (1 - alpha z)^{k+1}.  gamma_alpha is the
// term (alpha, 0, 1); monomials z^k are the terms (0, k, 1). The Taylor shift
// acts in closed form:
//   T gamma_{alpha,0} = alpha gamma_{alpha,0}
//   T gamma_{alpha,k} = gamma_{alpha,k-1} + alpha gamma_{alpha,k}   (k >= 1)
// which covers alpha = 0 (monomial shift) with no special case.
struct RationalTerm {
    Complex alpha{0.0, 0.0};
    int k = 0;
    Complex c{1.0, 0.0};
};

struct RationalCombo {
    std::vector<RationalTerm> terms;

    bool is_zero() const { return terms.empty(); }
};

inline bool term_order(const RationalTerm& a, const RationalTerm& b) {
    if (a.alpha.real() != b.alpha.real()) return a.alpha.real() < b.alpha.real();
    if (a.alpha.imag() != b.alpha.imag()) return a.alpha.imag() < b.alpha.imag();
    return a.k < b.k;
}

/// Sort by (alpha, k), merge duplicates, drop zero coefficients.
inline RationalCombo canonicalize(RationalCombo f) {
    std::sort(f.terms.begin(), f.terms.end(), term_order);
    std::vector<RationalTerm> out;
    for (const RationalTerm& t : f.terms) {
        if (!out.empty() && out.back().alpha == t.alpha && out.back().k == t.k)
            out.back().c += t.c;
        else
            out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const RationalTerm& t) { return t.c == Complex(0.0, 0.0); }),
              out.end());
    return RationalCombo{std::move(out)};
}

inline bool is_canonical(const RationalCombo& f) {
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (f.terms[i].c == Complex(0.0, 0.0)) return false;
        if (i > 0 && !term_order(f.terms[i - 1], f.terms[i])) return false;
    }
    return true;
}

inline RationalCombo gamma(Complex alpha, int k = 0, Complex c = Complex(1.0, 0.0)) {
    if (k < 0) throw PreconditionError("gamma: k must be >= 0");
    return canonicalize(RationalCombo{{RationalTerm{alpha, k, c}}});
}

inline RationalCombo monomial(int k, Complex c = Complex(1.0, 0.0)) {
    return gamma(Complex(0.0, 0.0), k, c);
}

inline RationalCombo add(const RationalCombo& f, const RationalCombo& g) {
    RationalCombo h = f;
    h.terms.insert(h.terms.end(), g.terms.begin(), g.terms.end());
    return canonicalize(std::move(h));
}

inline RationalCombo scale(const RationalCombo& f, Complex c) {
    if (c == Complex(0.0, 0.0)) return {};
    RationalCombo h = f;
    for (RationalTerm& t : h.terms) t.c *= c;
    return h;
}

inline RationalCombo sub(const RationalCombo& f, const RationalCombo& g) {
    return add(f, scale(g, Complex(-1.0, 0.0)));
}

/// Exact image under the Taylor shift.
inline RationalCombo shift_rational(const RationalCombo& f) {
    if (!is_canonical(f)) throw PreconditionError("shift_rational: input not canonical");
    RationalCombo out;
    for (const RationalTerm& t : f.terms) {
        if (t.k == 0) {
            if (t.alpha != Complex(0.0, 0.0))
                out.terms.push_back({t.alpha, 0, t.c * t.alpha});
            // constants map to zero
        } else {
            out.terms.push_back({t.alpha, t.k - 1, t.c});
            if (t.alpha != Complex(0.0, 0.0))
                out.terms.push_back({t.alpha, t.k, t.c * t.alpha});
        }
    }
    return canonicalize(std::move(out));
}

inline RationalCombo shift_rational_n(RationalCombo f, long n) {
    bool diagonal = true;
    for (const RationalTerm& t : f.terms) diagonal = diagonal && t.k == 0;
    if (diagonal && n > 8) {
        // T^n acts diagonally on simple kernels: c gamma_alpha -> c alpha^n gamma_alpha
        RationalCombo out;
        for (const RationalTerm& t : f.terms) {
            if (t.alpha == Complex(0.0, 0.0)) continue;  // constants die after one shift
            out.terms.push_back({t.alpha, 0, t.c * std::pow(t.alpha, static_cast<double>(n))});
        }
        return canonicalize(std::move(out));
    }
    for (long i = 0; i < n; ++i) f = shift_rational(f);
    return f;
}

/// Poles 1/alpha of the nonzero-alpha terms.
inline std::vector<Complex> poles(const RationalCombo& f) {
    std::vector<Complex> ps;
    for (const RationalTerm& t : f.terms) {
        if (t.alpha == Complex(0.0, 0.0)) continue;
        Complex p = 1.0 / t.alpha;
        bool dup = false;
        for (const Complex& q : ps) dup = dup || q == p;
        if (!dup) ps.push_back(p);
    }
    return ps;
}

inline Complex evaluate(const RationalCombo& f, Complex z) {
    Complex acc(0.0, 0.0);
    for (const RationalTerm& t : f.terms) {
        Complex den = 1.0 - t.alpha * z;
        if (std::abs(den) < 1e-14)
            throw NumericError("RationalCombo: evaluation at a pole");
        acc += t.c * std::pow(z, t.k) / std::pow(den, t.k + 1);
    }
    return acc;
}

inline bool approx_equal(const RationalCombo& f, const RationalCombo& g, double tol) {
    RationalCombo d = sub(f, g);
    for (const RationalTerm& t : d.terms)
        if (std::abs(t.c) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json combo_to_json(const RationalCombo& f) {
    auto terms = nlohmann::ordered_json::array();
    for (const RationalTerm& t : f.terms)
        terms.push_back({{"alpha", {t.alpha.real(), t.alpha.imag()}},
                         {"k", t.k},
                         {"c", {t.c.real(), t.c.imag()}}});
    return nlohmann::ordered_json{{"terms", std::move(terms)}};
}

inline RationalCombo combo_from_json(const nlohmann::json& j) {
    RationalCombo f;
    for (const auto& t : j.at("terms")) {
        f.terms.push_back({Complex(t.at("alpha").at(0).get<double>(),
                                   t.at("alpha").at(1).get<double>()),
                           t.at("k").get<int>(),
                           Complex(t.at("c").at(0).get<double>(),
                                   t.at("c").at(1).get<double>())});
    }
    return canonicalize(std::move(f));
}

inline nlohmann::ordered_json poly_to_json(const TaylorPoly& f) {
    auto coeffs = nlohmann::ordered_json::array();
    for (const Complex& a : f.coeffs) coeffs.push_back({a.real(), a.imag()});
    return nlohmann::ordered_json{{"coeffs", std::move(coeffs)}};
}

inline TaylorPoly poly_from_json(const nlohmann::json& j) {
    TaylorPoly f;
    for (const auto& a : j.at("coeffs"))
        f.coeffs.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    return f;
}

}  // namespace tshift
