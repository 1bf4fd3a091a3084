#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tshift {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Normalize an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    if (a > kPi) a -= kTwoPi;
    return a;
}

inline Complex unit(double angle) { return std::polar(1.0, angle); }

/// Chordal distance between two circle points given by angles.
inline double chord_dist(double a, double b) { return std::abs(unit(a) - unit(b)); }

// Deterministic summation: values are reduced pairwise in index order, so the
// result does not depend on evaluation scheduling.
inline double pairwise_sum(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t h = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2) v[h++] = v[i] + v[i + 1];
        if (n % 2 == 1) v[h++] = v[n - 1];
        n = h;
    }
    return v[0];
}

inline Complex pairwise_sum(std::vector<Complex>& v) {
    if (v.empty()) return Complex(0.0, 0.0);
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t h = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2) v[h++] = v[i] + v[i + 1];
        if (n % 2 == 1) v[h++] = v[n - 1];
        n = h;
    }
    return v[0];
}

// Small splitmix-based generator for sampled checks. std::mt19937 with
// library distributions is not bit-portable; this one is.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    Complex unit_complex() { return unit(uniform(-kPi, kPi)); }

    Complex complex_in_disc(double radius) {
        double r = radius * std::sqrt(uniform());
        return std::polar(r, uniform(-kPi, kPi));
    }

  private:
    std::uint64_t state_;
};

}  // namespace tshift
