#include "gq/gersho.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gq/errors.hpp"
#include "gq/moments.hpp"
#include "gq/roots.hpp"

namespace gq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBracketSteps = 200;
// Largest relative spread of cell moments build_gersho will return.
constexpr double kMaxSpread = 1e-6;

std::string real_text(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

roots::Tolerance moment_tolerance(const SolverConfig& cfg, double moment_scale) {
    return {0.0, cfg.root_tol, cfg.root_tol_moment * moment_scale};
}

// Smallest b > a with cell_moment(a, b) = target, given tail = cell_moment(a, support_hi) >= target.
double extend_with_tail(const DensityModel& model, const Order& order, double a, double target, double tail,
                        const SolverConfig& cfg) {
    const double hi = model.support_hi();
    if (target == tail) return hi;
    const double start = std::max(a, model.support_lo());
    auto f = [&](double b) { return cell_moment(model, start, b, order, cfg) - target; };

    double lo_b, f_lo, hi_b, f_hi;
    if (std::isfinite(start)) {
        // High-rate guess: a cell of width w and density h carries about Q(r) h w^(1+r).
        double h = model.pdf(start);
        if (!(h > 0.0)) h = 1.0 / model.scale();
        double step = std::pow(target / (order.uniform_cell_constant() * h), 1.0 / (1.0 + order.value()));
        if (!(step > 0.0) || !std::isfinite(step)) step = model.scale();
        lo_b = start;
        f_lo = -target;
        hi_b = std::min(start + step, hi);
        f_hi = (hi_b == hi) ? tail - target : f(hi_b);
        for (int i = 0; f_hi < 0.0; ++i) {
            if (i == kMaxBracketSteps) {
                throw Error(ErrorCode::ConstructionFailure, "extend_cell: no upper bracket from a = " + real_text(a));
            }
            lo_b = hi_b;
            f_lo = f_hi;
            step *= 2.0;
            hi_b = std::min(lo_b + step, hi);
            f_hi = (hi_b == hi) ? tail - target : f(hi_b);
        }
    } else {
        // Unbounded left end: walk outward from the model centre.
        double x = std::min(model.center(), hi);
        double fx = (x == hi) ? tail - target : f(x);
        double step = model.scale();
        if (fx >= 0.0) {
            hi_b = x;
            f_hi = fx;
            for (int i = 0;; ++i) {
                if (i == kMaxBracketSteps) {
                    throw Error(ErrorCode::ConstructionFailure, "extend_cell: no lower bracket");
                }
                x -= step;
                step *= 2.0;
                fx = f(x);
                if (fx < 0.0) break;
                hi_b = x;
                f_hi = fx;
            }
            lo_b = x;
            f_lo = fx;
        } else {
            lo_b = x;
            f_lo = fx;
            for (int i = 0;; ++i) {
                if (i == kMaxBracketSteps) {
                    throw Error(ErrorCode::ConstructionFailure, "extend_cell: no upper bracket");
                }
                x = std::min(x + step, hi);
                step *= 2.0;
                fx = (x == hi) ? tail - target : f(x);
                if (fx >= 0.0) break;
                lo_b = x;
                f_lo = fx;
            }
            hi_b = x;
            f_hi = fx;
        }
    }
    if (!std::isfinite(hi_b)) return hi;
    const auto root = roots::solve_increasing(f, lo_b, hi_b, f_lo, f_hi, moment_tolerance(cfg, target),
                                              cfg.max_root_iter);
    return root.x;
}

struct Sweep {
    std::vector<double> boundaries;
    // Increasing in m: 1 - tail/m once all boundaries are placed, larger
    // (cells still owed minus tail/m) when the tail runs out early.
    double residual = 0.0;
    bool complete = true;
};

Sweep sweep(const DensityModel& model, const Order& order, int n, double m, const SolverConfig& cfg) {
    Sweep out;
    out.boundaries.reserve(static_cast<std::size_t>(n - 1));
    double b = model.support_lo();
    const double hi = model.support_hi();
    for (int i = 0; i + 1 < n; ++i) {
        const double tail = cell_moment(model, b, hi, order, cfg);
        if (tail < m) {
            out.complete = false;
            out.residual = static_cast<double>(n - i) - tail / m;
            return out;
        }
        b = extend_with_tail(model, order, b, m, tail, cfg);
        if (!(b < hi)) {
            out.complete = false;
            out.residual = static_cast<double>(n - i - 1);
            return out;
        }
        out.boundaries.push_back(b);
    }
    out.residual = 1.0 - cell_moment(model, b, hi, order, cfg) / m;
    return out;
}

void check_level(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "quantization level n must be >= 1");
}

} // namespace

const char* to_string(Method m) noexcept {
    switch (m) {
    case Method::OuterBisection: return "outer_bisection";
    case Method::Doubling: return "doubling";
    case Method::Lloyd: return "lloyd";
    case Method::Counterexample: return "counterexample";
    }
    return "unknown";
}

Method method_from_string(const std::string& s) {
    if (s == "outer_bisection") return Method::OuterBisection;
    if (s == "doubling") return Method::Doubling;
    if (s == "lloyd") return Method::Lloyd;
    if (s == "counterexample") return Method::Counterexample;
    throw Error(ErrorCode::ParseError, "unknown quantizer method '" + s + "'");
}

Quantizer::Quantizer(Order order_, std::vector<double> boundaries_, std::vector<double> codepoints_,
                     std::vector<double> cell_moments_, double support_lo_, double support_hi_, Method method_,
                     bool unique_)
    : order(order_),
      boundaries(std::move(boundaries_)),
      codepoints(std::move(codepoints_)),
      cell_moments(std::move(cell_moments_)),
      support_lo(support_lo_),
      support_hi(support_hi_),
      method(method_),
      unique(unique_) {}

std::pair<double, double> Quantizer::cell(std::size_t i) const {
    const double lo = (i == 0) ? support_lo : boundaries[i - 1];
    const double hi = (i + 1 >= codepoints.size()) ? support_hi : boundaries[i];
    return {lo, hi};
}

double Quantizer::distortion() const { return std::accumulate(cell_moments.begin(), cell_moments.end(), 0.0); }

double per_cell_spread(std::span<const double> moments) {
    if (moments.size() < 2) return 0.0;
    const double mean = std::accumulate(moments.begin(), moments.end(), 0.0) / static_cast<double>(moments.size());
    if (!(mean > 0.0)) return kInf;
    double spread = 0.0;
    for (double m : moments) spread = std::max(spread, std::abs(m - mean) / mean);
    return spread;
}

double extend_cell(const DensityModel& model, const Order& order, double a, double target, const SolverConfig& cfg) {
    if (std::isnan(target) || target < 0.0) {
        throw Error(ErrorCode::InvalidTarget, "extend_cell: target moment must be >= 0");
    }
    if (std::isnan(a) || !(a < model.support_hi())) {
        throw Error(ErrorCode::InvalidInterval, "extend_cell: a = " + real_text(a) + " is not below the support end");
    }
    if (target == 0.0) return a;
    const double tail = cell_moment(model, a, model.support_hi(), order, cfg);
    if (target > tail) {
        throw Error(ErrorCode::TargetTooLarge, "extend_cell: target " + real_text(target) +
                                                   " exceeds the remaining tail moment " + real_text(tail));
    }
    return extend_with_tail(model, order, a, target, tail, cfg);
}

Quantizer quantizer_from_boundaries(const DensityModel& model, const Order& order, std::vector<double> boundaries,
                                   Method method, const SolverConfig& cfg) {
    const std::size_t n = boundaries.size() + 1;
    std::vector<double> codepoints(n), moments(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = (i == 0) ? model.support_lo() : boundaries[i - 1];
        const double hi = (i + 1 == n) ? model.support_hi() : boundaries[i];
        const auto cell = solve_cell(model, lo, hi, order, cfg);
        codepoints[i] = cell.center;
        moments[i] = cell.moment;
    }
    return Quantizer(order, std::move(boundaries), std::move(codepoints), std::move(moments), model.support_lo(),
                     model.support_hi(), method, model.interval_support());
}

BuildResult build_gersho(const DensityModel& model, int n, const Order& order, const SolverConfig& cfg) {
    check_level(n);
    cfg.validate();
    check_order(order, cfg);

    ConstructionReport report;
    report.method = Method::OuterBisection;
    report.unique = model.interval_support();

    if (n == 1) {
        auto q = quantizer_from_boundaries(model, order, {}, Method::OuterBisection, cfg);
        report.distortion = q.distortion();
        return {std::move(q), std::move(report)};
    }

    const double total = cell_moment(model, model.support_lo(), model.support_hi(), order, cfg);
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw Error(ErrorCode::ConstructionFailure, "build_gersho: total moment is not finite and positive");
    }

    // Solve in u = log m. The residual is increasing in m, so it is in u too.
    auto residual = [&](double u) {
        const double r = sweep(model, order, n, std::exp(u), cfg).residual;
        report.residual_history.push_back(r);
        return r;
    };

    const double u_max = std::log(total);
    double u_guess = u_max - (1.0 + order.value()) * std::log(static_cast<double>(n));
    const double widen = std::log(8.0);
    double u_lo = u_guess - widen, u_hi = std::min(u_guess + widen, u_max);
    double f_lo = residual(u_lo);
    for (int i = 0; f_lo > 0.0; ++i) {
        if (i == 60) throw Error(ErrorCode::ConstructionFailure, "build_gersho: residual bracket not found below");
        u_hi = u_lo;
        u_lo -= widen;
        f_lo = residual(u_lo);
    }
    double f_hi = residual(u_hi);
    for (int i = 0; f_hi < 0.0; ++i) {
        if (u_hi >= u_max || i == 60) {
            throw Error(ErrorCode::ConstructionFailure, "build_gersho: residual bracket not found above");
        }
        u_lo = u_hi;
        f_lo = f_hi;
        u_hi = std::min(u_hi + widen, u_max);
        f_hi = residual(u_hi);
    }

    const roots::Tolerance tol{0.0, 4.0 * std::numeric_limits<double>::epsilon(), cfg.root_tol_moment};
    const auto root = roots::solve_increasing(residual, u_lo, u_hi, f_lo, f_hi, tol, cfg.max_root_iter);

    auto final_sweep = sweep(model, order, n, std::exp(root.x), cfg);
    if (!final_sweep.complete) {
        throw Error(ErrorCode::ConstructionFailure, "build_gersho: final sweep did not place all boundaries");
    }
    auto q = quantizer_from_boundaries(model, order, std::move(final_sweep.boundaries), Method::OuterBisection, cfg);
    report.distortion = q.distortion();
    report.per_cell_spread = per_cell_spread(q.cell_moments);
    report.outer_iterations = static_cast<int>(report.residual_history.size());
    if (!(report.per_cell_spread <= kMaxSpread)) {
        throw Error(ErrorCode::ConstructionFailure,
                    "build_gersho: cell moments not equalized (relative spread " + real_text(report.per_cell_spread) + ")");
    }
    q.unique = report.unique;
    return {std::move(q), std::move(report)};
}

double split_cell(const DensityModel& model, const Order& order, double a, double b, const SolverConfig& cfg) {
    if (std::isnan(a) || std::isnan(b) || a > b) throw Error(ErrorCode::InvalidInterval, "split_cell: a > b");
    const double cell_mass = model.mass(a, b);
    if (!(cell_mass > 0.0)) throw Error(ErrorCode::EmptyCell, "split_cell: cell has no mass");
    const double lo = std::max(a, model.support_lo());
    const double hi = std::min(b, model.support_hi());
    const double whole = cell_moment(model, lo, hi, order, cfg);

    auto v = [&](double s) { return cell_moment(model, lo, s, order, cfg) - cell_moment(model, s, hi, order, cfg); };

    // Start at the conditional median.
    double s0;
    if (lo >= model.center()) {
        s0 = model.quantile(std::clamp(1.0 - (model.sf(lo) - 0.5 * cell_mass), 0.0, 1.0));
    } else {
        s0 = model.quantile(std::clamp(model.cdf(lo) + 0.5 * cell_mass, 0.0, 1.0));
    }
    if (!(s0 > lo && s0 < hi)) {
        if (std::isfinite(lo) && std::isfinite(hi)) s0 = 0.5 * (lo + hi);
        else if (std::isfinite(lo)) s0 = lo + model.scale();
        else if (std::isfinite(hi)) s0 = hi - model.scale();
        else s0 = model.center();
    }

    const double width = (std::isfinite(lo) && std::isfinite(hi)) ? hi - lo : model.scale();
    double s_lo = s0, s_hi = s0;
    double v0 = v(s0);
    double v_lo = v0, v_hi = v0;
    if (v0 < 0.0) {
        double step = 0.25 * width;
        for (int i = 0; v_hi < 0.0; ++i) {
            if (i == kMaxBracketSteps) throw Error(ErrorCode::ConstructionFailure, "split_cell: no upper bracket");
            s_lo = s_hi;
            v_lo = v_hi;
            s_hi = std::isfinite(hi) ? std::min(s_hi + step, hi) : s_hi + step;
            v_hi = (s_hi == hi) ? whole : v(s_hi);
            step *= 2.0;
        }
    } else {
        double step = 0.25 * width;
        for (int i = 0; v_lo > 0.0; ++i) {
            if (i == kMaxBracketSteps) throw Error(ErrorCode::ConstructionFailure, "split_cell: no lower bracket");
            s_hi = s_lo;
            v_hi = v_lo;
            s_lo = std::isfinite(lo) ? std::max(s_lo - step, lo) : s_lo - step;
            v_lo = (s_lo == lo) ? -whole : v(s_lo);
            step *= 2.0;
        }
    }
    const auto root = roots::solve_increasing(v, s_lo, s_hi, v_lo, v_hi, moment_tolerance(cfg, 0.5 * whole),
                                              cfg.max_root_iter);
    return root.x;
}

BuildResult build_by_doubling(const DensityModel& model, int k, const Order& order, const SolverConfig& cfg) {
    if (k < 0 || k > 30) throw Error(ErrorCode::InvalidParameter, "doubling depth k must lie in [0, 30]");
    cfg.validate();
    check_order(order, cfg);

    ConstructionReport report;
    report.method = Method::Doubling;
    report.unique = model.interval_support();

    auto q = quantizer_from_boundaries(model, order, {}, Method::Doubling, cfg);
    for (int level = 1; level <= k; ++level) {
        std::vector<double> next;
        next.reserve(2 * q.level() - 1);
        for (std::size_t i = 0; i < q.level(); ++i) {
            const auto [lo, hi] = q.cell(i);
            next.push_back(split_cell(model, order, lo, hi, cfg));
            if (i + 1 < q.level()) next.push_back(q.boundaries[i]);
        }
        q = quantizer_from_boundaries(model, order, std::move(next), Method::Doubling, cfg);
        const auto check = verify_quantizer(model, q, order, 1e-6, cfg);
        report.residual_history.push_back(check.per_cell_spread);
    }
    q.unique = report.unique;
    report.distortion = q.distortion();
    report.per_cell_spread = per_cell_spread(q.cell_moments);
    report.outer_iterations = k;
    return {std::move(q), std::move(report)};
}

Verification verify_quantizer(const DensityModel& model, const Quantizer& q, const Order& order, double tol,
                              const SolverConfig& cfg) {
    Verification v;
    const std::size_t n = q.codepoints.size();
    std::ostringstream note;

    v.g2 = n >= 1 && q.boundaries.size() + 1 == n;
    for (std::size_t i = 0; v.g2 && i < q.boundaries.size(); ++i) {
        const double b = q.boundaries[i];
        if (!std::isfinite(b) || (i > 0 && !(b > q.boundaries[i - 1]))) v.g2 = false;
    }
    for (std::size_t i = 0; v.g2 && i < n; ++i) {
        if (!std::isfinite(q.codepoints[i]) || (i > 0 && !(q.codepoints[i] > q.codepoints[i - 1]))) v.g2 = false;
    }
    if (!v.g2) {
        note << "cells or codepoints are not strictly increasing and finite; ";
        v.note = note.str();
        return v;
    }

    auto cell_of = [&](std::size_t i) {
        const double lo = (i == 0) ? model.support_lo() : q.boundaries[i - 1];
        const double hi = (i + 1 == n) ? model.support_hi() : q.boundaries[i];
        return std::pair{lo, hi};
    };

    v.g1 = q.cell_moments.size() == n;
    v.g3 = true;
    v.cell_moments.assign(n, 0.0);
    try {
        for (std::size_t i = 0; i < n; ++i) {
            const auto [lo, hi] = cell_of(i);
            if (!(lo < hi) || !(model.mass(lo, hi) > 0.0)) {
                v.g1 = false;
                v.g3 = false;
                note << "cell " << i << " has no mass; ";
                continue;
            }
            const double best = one_point_optimal(model, lo, hi, order, cfg);
            const double offset = std::abs(q.codepoints[i] - best);
            v.max_center_offset = std::max(v.max_center_offset, offset);
            if (offset > tol * std::max(1.0, std::abs(best))) v.g3 = false;
            v.cell_moments[i] = partial_moment(model, lo, hi, q.codepoints[i], order, cfg);
        }
    } catch (const Error& e) {
        v.g3 = false;
        note << e.what() << "; ";
    }
    v.distortion = std::accumulate(v.cell_moments.begin(), v.cell_moments.end(), 0.0);
    v.per_cell_spread = per_cell_spread(v.cell_moments);
    v.g4 = v.g1 && v.per_cell_spread <= tol;

    v.voronoi = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double mid = 0.5 * (q.codepoints[i] + q.codepoints[i + 1]);
        if (std::abs(q.boundaries[i] - mid) > tol * std::max(1.0, std::abs(mid))) v.voronoi = false;
    }
    v.note = note.str();
    return v;
}

double distortion(const DensityModel& model, const Quantizer& q, const Order& order, const SolverConfig& cfg) {
    double total = 0.0;
    for (std::size_t i = 0; i < q.level(); ++i) {
        const double lo = (i == 0) ? model.support_lo() : q.boundaries[i - 1];
        const double hi = (i + 1 == q.level()) ? model.support_hi() : q.boundaries[i];
        total += partial_moment(model, lo, hi, q.codepoints[i], order, cfg);
    }
    return total;
}

} // namespace gq
