#pragma once

// Reference values computed without the library: closed-form truncated
// moments, brute-force Riemann sums and grid scans. Nothing here calls gq.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

namespace oracle {

inline double q_const(double r) { return std::pow(2.0, -r) / (1.0 + r); }

// ---- uniform on [lo, hi] ---------------------------------------------------

// Optimal moment of the cell [a, b] inside the support; centroid is the midpoint.
inline double uniform_cell_moment(double lo, double hi, double a, double b, double r) {
    return q_const(r) * std::pow(b - a, 1.0 + r) / (hi - lo);
}

// ---- exponential(rate), r = 2 ----------------------------------------------

struct Truncated {
    double mass;
    double mean;
    double moment; // mass * conditional variance
};

inline Truncated exponential_cell(double rate, double a, double b) {
    const double ea = std::exp(-rate * a);
    if (std::isinf(b)) return {ea, a + 1.0 / rate, ea / (rate * rate)};
    const double L = b - a;
    const double q = std::exp(-rate * L);
    const double mass = ea * (1.0 - q);
    const double mean = a + 1.0 / rate - L * q / (1.0 - q);
    const double var = 1.0 / (rate * rate) - L * L * q / ((1.0 - q) * (1.0 - q));
    return {mass, mean, mass * var};
}

// ---- standard Gaussian, r = 2 ----------------------------------------------

inline double phi(double x) { return std::isinf(x) ? 0.0 : std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline Truncated gaussian_cell(double a, double b) {
    const double z = Phi(b) - Phi(a);
    const double mean = (phi(a) - phi(b)) / z;
    const double xa = std::isinf(a) ? 0.0 : a * phi(a);
    const double xb = std::isinf(b) ? 0.0 : b * phi(b);
    const double var = 1.0 + (xa - xb) / z - mean * mean;
    return {z, mean, z * var};
}

// ---- brute force -----------------------------------------------------------

// Composite midpoint rule for int_a^b |x - c|^r h(x) dx.
inline double riemann_moment(const std::function<double(double)>& h, double a, double b, double c, double r,
                             int panels = 400000) {
    const double w = (b - a) / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double x = a + (i + 0.5) * w;
        s += std::pow(std::abs(x - c), r) * h(x);
    }
    return s * w;
}

// Minimizer of c -> riemann_moment over [a, b] by golden-section search.
inline double riemann_centroid(const std::function<double(double)>& h, double a, double b, double r,
                               int panels = 20000) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = a, hi = b;
    for (int it = 0; it < 100; ++it) {
        const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        if (riemann_moment(h, a, b, x1, r, panels) < riemann_moment(h, a, b, x2, r, panels)) hi = x2;
        else lo = x1;
    }
    return 0.5 * (lo + hi);
}

// Split point of [a, b] for Exponential(rate), r = 2, equalizing the two
// optimal moments: scan a grid of `steps` points, then refine the bracketing
// grid cell by repeated scanning.
inline double exponential_split_scan(double rate, double a, double b, int steps = 1000) {
    auto v = [&](double s) { return exponential_cell(rate, a, s).moment - exponential_cell(rate, s, b).moment; };
    double lo = a, hi = std::isinf(b) ? a + 50.0 / rate : b;
    for (int round = 0; round < 4; ++round) {
        const double w = (hi - lo) / steps;
        double prev = lo;
        for (int i = 1; i <= steps; ++i) {
            const double x = lo + i * w;
            if (v(x) >= 0.0) {
                lo = prev;
                hi = x;
                break;
            }
            prev = x;
        }
    }
    return 0.5 * (lo + hi);
}

// ---- Zador constants at r = 2 ------------------------------------------------

inline constexpr double zador_uniform = 1.0 / 12.0;
inline constexpr double zador_laplace = 9.0;   // (1/12) (int (e^{-|x|}/2)^{1/3})^3 = (1/12) * 108
inline const double zador_gaussian = std::numbers::pi * std::sqrt(3.0) / 2.0;
inline constexpr double zador_exponential = 2.25; // (1/12) * 3^3

} // namespace oracle
