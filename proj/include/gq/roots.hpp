#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

namespace gq::roots {

struct Tolerance {
    double x_abs = 0.0;
    double x_rel = 1e-12;
    double f_abs = 0.0;
};

struct Result {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Root of an increasing function on a bracket with f(lo) <= 0 <= f(hi).
/// Bracketing is kept throughout (TOMS 748), so monotone but non-smooth
/// functions are safe. Returns the evaluated point with the smallest |f|;
/// ties keep the leftmost point.
template <class F>
Result solve_increasing(F&& f, double lo, double hi, double f_lo, double f_hi, const Tolerance& tol,
                        int max_iter) {
    Result best{lo, f_lo, 0, false};
    if (std::abs(f_hi) < std::abs(f_lo)) best = {hi, f_hi, 0, false};

    auto width_ok = [&](double a, double b) {
        return (b - a) <= tol.x_abs + tol.x_rel * std::max({std::abs(a), std::abs(b), 1.0});
    };
    if (f_lo >= 0.0 || std::abs(f_lo) <= tol.f_abs) return {lo, f_lo, 0, true};
    if (f_hi <= 0.0 || std::abs(f_hi) <= tol.f_abs) return {hi, f_hi, 0, true};
    if (width_ok(lo, hi)) {
        best.converged = true;
        return best;
    }

    auto tracked = [&](double x) {
        const double v = f(x);
        ++best.evaluations;
        if (std::abs(v) < std::abs(best.fx) || (std::abs(v) == std::abs(best.fx) && x < best.x)) {
            best.x = x;
            best.fx = v;
        }
        return v;
    };
    auto done = [&](double a, double b) { return std::abs(best.fx) <= tol.f_abs || width_ok(a, b); };

    std::uintmax_t iters = static_cast<std::uintmax_t>(std::max(max_iter, 1));
    const auto bracket = boost::math::tools::toms748_solve(tracked, lo, hi, f_lo, f_hi, done, iters);
    best.converged = done(bracket.first, bracket.second);
    return best;
}

} // namespace gq::roots
