#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gq::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    int max_depth = 60;
    int max_panels = 2000;
    // Exponent k of the tail map x = end +/- scale * ((1 - t)^-k - 1); k = 1 is t / (1 - t).
    double tail_power = 1.0;
};

/// Map exponent for an integrand decaying like |x|^-decay. Keeps the mapped
/// integrand bounded near t = 1; light tails (infinite decay) use k = 1.
inline double tail_power_for(double decay) {
    if (!std::isfinite(decay)) return 1.0;
    if (!(decay > 1.0)) return 64.0;
    return std::clamp(2.0 / (decay - 1.0), 1.0, 64.0);
}

template <std::size_t N>
struct Result {
    std::array<double, N> value{};
    // Largest per-component error estimate.
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

namespace detail {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

template <std::size_t N>
struct Panel {
    double lo, hi;
    std::array<double, N> value;
    std::array<double, N> error;
    int depth;
};

// One Gauss-Kronrod 21/10 panel on [lo, hi] for a vector-valued integrand.
template <std::size_t N, class F>
Panel<N> evaluate_panel(F& f, double lo, double hi, int depth) {
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<double, N> kron{};
    std::array<double, N> gauss{};
    const std::array<double, N> f0 = f(mid);
    for (std::size_t k = 0; k < N; ++k) kron[k] = f0[k] * wk[0];
    // Odd Kronrod indices carry the Gauss nodes for the 10-point rule.
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const std::array<double, N> fp = f(mid + half * xk[i]);
        const std::array<double, N> fm = f(mid - half * xk[i]);
        for (std::size_t k = 0; k < N; ++k) {
            const double s = fp[k] + fm[k];
            kron[k] += s * wk[i];
            if (i % 2 == 1) gauss[k] += s * wg[i / 2];
        }
    }
    Panel<N> p{lo, hi, {}, {}, depth};
    for (std::size_t k = 0; k < N; ++k) {
        p.value[k] = kron[k] * half;
        const double diff = std::abs((kron[k] - gauss[k]) * half);
        const double floor = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(p.value[k]);
        p.error[k] = std::max(diff, floor);
    }
    return p;
}

// Each component must meet max(abs_tol, rel_tol * |value|) on its own.
template <std::size_t N>
bool within_tolerance(const std::array<double, N>& value, const std::array<double, N>& error,
                      const Options& opt) {
    for (std::size_t k = 0; k < N; ++k) {
        if (!(error[k] <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value[k])))) return false;
    }
    return true;
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of a vector-valued integrand on a
/// finite interval. The panel with the largest error is bisected until the summed
/// error meets max(abs_tol, rel_tol * |value|) or the depth/panel budget runs out.
template <std::size_t N, class F>
Result<N> integrate_finite(F&& f, double lo, double hi, const Options& opt) {
    Result<N> out;
    if (!(hi > lo)) return out;

    std::vector<detail::Panel<N>> panels;
    panels.push_back(detail::evaluate_panel<N>(f, lo, hi, 0));

    for (;;) {
        std::array<double, N> value{};
        std::array<double, N> error{};
        for (const auto& p : panels) {
            for (std::size_t k = 0; k < N; ++k) {
                value[k] += p.value[k];
                error[k] += p.error[k];
            }
        }
        out.value = value;
        out.error = *std::max_element(error.begin(), error.end());
        out.panels = static_cast<int>(panels.size());
        if (detail::within_tolerance<N>(value, error, opt)) {
            out.converged = true;
            return out;
        }
        // Refine the panel contributing most to the worst-offending component.
        std::size_t k_bad = 0;
        double ratio_bad = -1.0;
        for (std::size_t k = 0; k < N; ++k) {
            const double ratio = error[k] / std::max(opt.abs_tol, opt.rel_tol * std::abs(value[k]));
            if (ratio > ratio_bad) {
                ratio_bad = ratio;
                k_bad = k;
            }
        }
        auto worst = std::max_element(panels.begin(), panels.end(), [k_bad](const auto& a, const auto& b) {
            return a.error[k_bad] < b.error[k_bad];
        });
        if (worst->depth >= opt.max_depth || static_cast<int>(panels.size()) >= opt.max_panels) {
            out.converged = false;
            return out;
        }
        const double mid = 0.5 * (worst->lo + worst->hi);
        if (!(mid > worst->lo && mid < worst->hi)) {
            out.converged = false;
            return out;
        }
        const auto left = detail::evaluate_panel<N>(f, worst->lo, mid, worst->depth + 1);
        const auto right = detail::evaluate_panel<N>(f, mid, worst->hi, worst->depth + 1);
        *worst = left;
        panels.push_back(right);
    }
}

/// Integrates over [lo, hi] where either end may be infinite. Semi-infinite
/// ranges use x = end +/- scale * ((1 - t)^-k - 1) with t in [0, 1) and
/// k = opt.tail_power; the doubly infinite range is split at `center`.
template <std::size_t N, class F>
Result<N> integrate(F&& f, double lo, double hi, const Options& opt, double scale = 1.0,
                    double center = 0.0) {
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) return integrate_finite<N>(f, lo, hi, opt);

    if (lo_inf && hi_inf) {
        auto left = integrate<N>(f, lo, center, opt, scale, center);
        auto right = integrate<N>(f, center, hi, opt, scale, center);
        for (std::size_t k = 0; k < N; ++k) left.value[k] += right.value[k];
        left.error = std::max(left.error, right.error);
        left.panels += right.panels;
        left.converged = left.converged && right.converged;
        return left;
    }

    const double anchor = lo_inf ? hi : lo;
    const double sign = lo_inf ? -1.0 : 1.0;
    const double k = opt.tail_power;
    auto mapped = [&](double t) {
        const double one_minus = 1.0 - t;
        double x, jac;
        if (k == 1.0) {
            x = anchor + sign * scale * t / one_minus;
            jac = scale / (one_minus * one_minus);
        } else {
            const double g = std::pow(one_minus, -k);
            x = anchor + sign * scale * (g - 1.0);
            jac = scale * k * g / one_minus;
        }
        std::array<double, N> v{};
        if (!std::isfinite(x) || !std::isfinite(jac)) return v;
        v = f(x);
        for (auto& c : v) c = (c == 0.0) ? 0.0 : c * jac;
        return v;
    };
    return integrate_finite<N>(mapped, 0.0, 1.0, opt);
}

/// Scalar convenience wrapper around integrate<1>.
template <class F>
Result<1> integrate_scalar(F&& f, double lo, double hi, const Options& opt, double scale = 1.0,
                           double center = 0.0) {
    auto wrapped = [&](double x) { return std::array<double, 1>{f(x)}; };
    return integrate<1>(wrapped, lo, hi, opt, scale, center);
}

} // namespace gq::quad
