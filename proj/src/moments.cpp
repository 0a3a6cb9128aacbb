#include "gq/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "gq/errors.hpp"
#include "gq/roots.hpp"
#include "segments.hpp"

namespace gq {

namespace {

using detail::Segment;
using detail::segments;

std::string interval_text(double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << a << ", " << b << "]";
    return os.str();
}

void check_interval(double a, double b) {
    if (std::isnan(a) || std::isnan(b) || a > b) {
        throw Error(ErrorCode::InvalidInterval, "interval " + interval_text(a, b) + " has a > b");
    }
}

template <std::size_t N, class F>
std::array<double, N> integrate_segments(const DensityModel& model, const std::vector<Segment>& segs, F&& f,
                                         double growth, const SolverConfig& cfg, const char* what) {
    // `growth`: power of |x| multiplying h in the integrand.
    auto opt = quad_options(cfg);
    opt.tail_power = quad::tail_power_for(model.tail_decay() - growth);
    std::array<double, N> total{};
    double error = 0.0;
    bool converged = true;
    for (const auto& [lo, hi] : segs) {
        // Algebraic tails look the same at every scale, so map relative to the anchor.
        double scale = model.scale();
        if (std::isfinite(model.tail_decay())) {
            if (std::isfinite(lo)) scale = std::max(scale, std::abs(lo));
            else if (std::isfinite(hi)) scale = std::max(scale, std::abs(hi));
        }
        const auto r = quad::integrate<N>(f, lo, hi, opt, scale, model.center());
        for (std::size_t k = 0; k < N; ++k) total[k] += r.value[k];
        error += r.error;
        converged = converged && r.converged;
    }
    bool finite = std::isfinite(error);
    double scale = 0.0;
    for (double v : total) {
        finite = finite && std::isfinite(v);
        scale = std::max(scale, std::abs(v));
    }
    if (!finite || !converged) {
        if (!finite || !(error <= std::max(opt.abs_tol, opt.rel_tol * scale))) {
            std::ostringstream os;
            os.precision(3);
            os << what << ": quadrature did not converge (error estimate " << error << ")";
            throw QuadratureFailure(os.str(), error);
        }
    }
    return total;
}

// Reference point for raw moments: a finite end or the model centre.
double reference_point(const DensityModel& model, double lo, double hi) {
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    if (std::isfinite(lo)) return lo;
    if (std::isfinite(hi)) return hi;
    return model.center();
}

CellSolution quadratic_cell(const DensityModel& model, double a, double b, const SolverConfig& cfg) {
    const auto segs = segments(model, a, b);
    if (segs.empty()) throw Error(ErrorCode::EmptyCell, "cell " + interval_text(a, b) + " has no mass");
    const double ref = reference_point(model, segs.front().first, segs.back().second);
    auto f = [&](double x) {
        const double h = model.pdf(x);
        const double d = x - ref;
        return std::array<double, 3>{h, h * d, h * d * d};
    };
    const auto m = integrate_segments<3>(model, segs, f, 2.0, cfg, "cell moment");
    if (!(m[0] > 0.0)) throw Error(ErrorCode::EmptyCell, "cell " + interval_text(a, b) + " has no mass");
    const double shift = m[1] / m[0];
    const double lo = segs.front().first, hi = segs.back().second;
    CellSolution out;
    out.center = std::clamp(ref + shift, lo, hi);
    out.moment = std::max(0.0, m[2] - shift * m[1]);
    return out;
}

// Derivative (up to the factor r) of c -> partial_moment(a, b, c); increasing in c.
double centroid_condition(const DensityModel& model, double lo, double hi, double c, double r,
                          const SolverConfig& cfg) {
    const double e = r - 1.0;
    auto f = [&](double x) {
        const double h = model.pdf(x);
        if (h == 0.0) return std::array<double, 1>{0.0};
        const double d = c - x;
        const double w = std::pow(std::abs(d), e);
        return std::array<double, 1>{d > 0.0 ? w * h : -w * h};
    };
    return integrate_segments<1>(model, segments(model, lo, hi, c), f, r - 1.0, cfg, "centroid condition")[0];
}

double general_centroid(const DensityModel& model, double a, double b, const Order& order,
                        const SolverConfig& cfg) {
    const double lo = std::max(a, model.support_lo());
    const double hi = std::min(b, model.support_hi());
    const double r = order.value();
    auto g = [&](double c) { return centroid_condition(model, lo, hi, c, r, cfg); };

    // Clamp infinite ends to extreme quantiles, then widen if the cell lies
    // beyond them.
    double c_lo = std::isfinite(lo) ? lo : std::min(model.quantile(1e-15), hi - model.scale());
    double c_hi = std::isfinite(hi) ? hi : std::max(model.quantile(1.0 - 1e-15), lo + model.scale());
    if (!std::isfinite(c_lo)) c_lo = c_hi - model.scale();
    if (!std::isfinite(c_hi)) c_hi = c_lo + model.scale();

    double g_lo = g(c_lo);
    for (double step = model.scale(); g_lo > 0.0 && !std::isfinite(lo); step *= 2.0) {
        c_lo -= step;
        g_lo = g(c_lo);
    }
    double g_hi = g(c_hi);
    for (double step = model.scale(); g_hi < 0.0 && !std::isfinite(hi); step *= 2.0) {
        c_hi += step;
        g_hi = g(c_hi);
    }
    if (g_lo > 0.0 || g_hi < 0.0) {
        throw Error(ErrorCode::ConstructionFailure,
                    "could not bracket the optimal point of cell " + interval_text(a, b));
    }
    const roots::Tolerance tol{0.0, cfg.root_tol, 0.0};
    const auto root = roots::solve_increasing(g, c_lo, c_hi, g_lo, g_hi, tol, cfg.max_root_iter);
    return std::clamp(root.x, lo, hi);
}

} // namespace

quad::Options quad_options(const SolverConfig& cfg) {
    return quad::Options{cfg.quad_rel_tol, cfg.quad_abs_tol, cfg.max_quad_depth, cfg.max_quad_panels};
}

double partial_moment(const DensityModel& model, double a, double b, double c, const Order& order,
                      const SolverConfig& cfg) {
    check_interval(a, b);
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidParameter, "moment centre must be finite");
    if (a == b) return 0.0;
    const double r = order.value();
    const bool quadratic = order.is_quadratic();
    auto f = [&](double x) {
        const double h = model.pdf(x);
        if (h == 0.0) return std::array<double, 1>{0.0};
        const double d = x - c;
        return std::array<double, 1>{(quadratic ? d * d : std::pow(std::abs(d), r)) * h};
    };
    return integrate_segments<1>(model, segments(model, a, b, c), f, r, cfg, "partial moment")[0];
}

CellSolution solve_cell(const DensityModel& model, double a, double b, const Order& order,
                        const SolverConfig& cfg) {
    check_interval(a, b);
    if (!(model.mass(a, b) > 0.0)) {
        throw Error(ErrorCode::EmptyCell, "cell " + interval_text(a, b) + " has no mass");
    }
    if (order.is_quadratic()) return quadratic_cell(model, a, b, cfg);
    CellSolution out;
    out.center = general_centroid(model, a, b, order, cfg);
    out.moment = partial_moment(model, a, b, out.center, order, cfg);
    return out;
}

double one_point_optimal(const DensityModel& model, double a, double b, const Order& order,
                         const SolverConfig& cfg) {
    return solve_cell(model, a, b, order, cfg).center;
}

double cell_moment(const DensityModel& model, double a, double b, const Order& order, const SolverConfig& cfg) {
    check_interval(a, b);
    if (!(model.mass(a, b) > 0.0)) return 0.0;
    return solve_cell(model, a, b, order, cfg).moment;
}

} // namespace gq
