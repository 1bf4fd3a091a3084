#pragma once

#include "tshift/common.hpp"

namespace tshift {

// Truncated Taylor coefficient vector a_0..a_N. Length is part of the
// identity: nothing is trimmed.
struct TaylorPoly {
    std::vector<Complex> coeffs;

    std::size_t length() const { return coeffs.size(); }
    bool empty() const { return coeffs.empty(); }
};

/// Tf: coefficient left-shift, length decreases by one.
inline TaylorPoly shift_poly(const TaylorPoly& f) {
    if (f.empty()) return {};
    return TaylorPoly{std::vector<Complex>(f.coeffs.begin() + 1, f.coeffs.end())};
}

inline TaylorPoly shift_poly_n(TaylorPoly f, int n) {
    for (int i = 0; i < n && !f.empty(); ++i) f = shift_poly(f);
    return f;
}

inline Complex evaluate(const TaylorPoly& f, Complex z) {
    Complex acc(0.0, 0.0);
    for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

/// n-th partial sum S_n f.
inline TaylorPoly partial_sum(const TaylorPoly& f, int n) {
    if (n < 0) return {};
    std::size_t len = std::min<std::size_t>(f.coeffs.size(), static_cast<std::size_t>(n) + 1);
    return TaylorPoly{std::vector<Complex>(f.coeffs.begin(), f.coeffs.begin() + len)};
}

// | T^{n+1}f(z) - (f(z) - S_n f(z))/z^{n+1} |, both sides computed
// independently. Vanishes to rounding for every finite Taylor vector.
inline double iterate_identity_residual(const TaylorPoly& f, int n, Complex z) {
    if (z == Complex(0.0, 0.0))
        throw PreconditionError("iterate_identity_residual: z must be nonzero");
    if (n < 0 || static_cast<std::size_t>(n) + 1 > f.coeffs.size() + 64)
        throw PreconditionError("iterate_identity_residual: n out of range");
    TaylorPoly iter = f;
    for (int i = 0; i <= n; ++i) iter = shift_poly(iter);
    Complex lhs = evaluate(iter, z);
    Complex rhs = (evaluate(f, z) - evaluate(partial_sum(f, n), z)) / std::pow(z, n + 1);
    return std::abs(lhs - rhs);
}

}  // namespace tshift
