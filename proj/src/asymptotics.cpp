#include "gq/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "gq/errors.hpp"
#include "gq/lloyd.hpp"
#include "gq/moments.hpp"
#include "gq/quadrature.hpp"
#include "segments.hpp"

namespace gq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double zador_integral(const DensityModel& model, const Order& order, const SolverConfig& cfg) {
    const double p = 1.0 / (1.0 + order.value());
    // Pareto tails converge too slowly for quadrature when the exponent is near 1 + r.
    if (const auto* t = std::get_if<PowerTail>(&model.family())) {
        return std::pow((t->exponent - 1.0) / t->cutoff, p) * t->cutoff / (t->exponent * p - 1.0);
    }
    auto f = [&](double x) {
        const double h = model.pdf(x);
        return std::array<double, 1>{h > 0.0 ? std::pow(h, p) : 0.0};
    };
    const auto opt = quad_options(cfg);
    double total = 0.0;
    for (const auto& [lo, hi] : detail::segments(model, model.support_lo(), model.support_hi())) {
        const auto r = quad::integrate<1>(f, lo, hi, opt, model.scale(), model.center());
        if (!r.converged || !std::isfinite(r.value[0])) {
            throw QuadratureFailure("integral of h^(1/(1+r)) did not converge", r.error);
        }
        total += r.value[0];
    }
    return total;
}

ConvergenceRow build_row(const DensityModel& model, const Order& order, int n, TableMethod method,
                         const SolverConfig& cfg, std::optional<double> zador, std::optional<Quantizer>& out) {
    ConvergenceRow row;
    row.n = n;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (method == TableMethod::Gersho) {
            out = build_gersho(model, n, order, cfg).quantizer;
        } else {
            out = run_lloyd(model, n, order, LloydInit::quantile_grid(), cfg).quantizer;
        }
        row.distortion = out->distortion();
        row.scaled = std::pow(static_cast<double>(n), order.value()) * row.distortion;
        row.ratio = zador ? row.scaled / *zador : kNaN;
        row.rate = (zador && n > 1) ? std::abs(*zador - row.scaled) * n / std::log(static_cast<double>(n)) : kNaN;
    } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
        row.distortion = row.scaled = row.ratio = row.rate = kNaN;
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

} // namespace

double zador_constant(const DensityModel& model, const Order& order, const SolverConfig& cfg) {
    if (!model.zador_finite(order.value())) {
        throw Error(ErrorCode::InfiniteZadorConstant, "integral of h^(1/(1+r)) diverges for " + model.describe());
    }
    const double integral = zador_integral(model, order, cfg);
    return order.uniform_cell_constant() * std::pow(integral, 1.0 + order.value());
}

std::vector<int> dyadic_levels(int k) {
    if (k < 0 || k > 30) throw Error(ErrorCode::InvalidParameter, "dyadic exponent must lie in [0, 30]");
    std::vector<int> levels;
    for (int i = 0; i <= k; ++i) levels.push_back(1 << i);
    return levels;
}

ConvergenceTable convergence_table(const DensityModel& model, const Order& order, const std::vector<int>& levels,
                                   TableMethod method, const SolverConfig& cfg, int jobs) {
    if (levels.empty()) throw Error(ErrorCode::InvalidParameter, "convergence table needs at least one level");
    for (int n : levels) {
        if (n < 1) throw Error(ErrorCode::InvalidParameter, "levels must be >= 1");
    }
    cfg.validate();

    ConvergenceTable table;
    try {
        table.zador = zador_constant(model, order, cfg);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InfiniteZadorConstant) throw;
    }
    table.rows.resize(levels.size());
    table.quantizers.resize(levels.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < levels.size(); i = next++) {
            table.rows[i] = build_row(model, order, levels[i], method, cfg, table.zador, table.quantizers[i]);
        }
    };
    const int threads = std::clamp(jobs, 1, static_cast<int>(levels.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return table;
}

Census cell_census(const Quantizer& q, const Interval& I, double slack) {
    const double s = slack * std::max({1.0, std::abs(I.lo), std::abs(I.hi)});
    Census c;
    for (std::size_t i = 0; i < q.level(); ++i) {
        const auto [lo, hi] = q.cell(i);
        if (lo >= I.lo - s && hi <= I.hi + s) {
            ++c.n1;
        } else if (hi <= I.lo + s || lo >= I.hi - s) {
            ++c.n2;
        }
    }
    return c;
}

DiagnosticsRow diagnostics(const DensityModel& model, const Quantizer& q, const Order& order, const Interval& I,
                           const SolverConfig& cfg, std::optional<double> zador) {
    if (!std::isfinite(I.lo) || !std::isfinite(I.hi) || I.lo > I.hi) {
        throw Error(ErrorCode::InvalidParameter, "diagnostics interval must be compact");
    }
    if (!(model.mass(I.lo, I.hi) > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "diagnostics interval carries no mass");
    }
    if (!zador) {
        try {
            zador = zador_constant(model, order, cfg);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InfiniteZadorConstant) throw;
        }
    }

    const std::size_t n = q.level();
    const double nd = static_cast<double>(n);
    const double r = order.value();

    DiagnosticsRow row;
    row.n = static_cast<int>(n);
    row.zador_finite = zador.has_value();

    const auto census = cell_census(q, I);
    row.point_density = census.n1 / nd;

    std::vector<double> moments(n);
    double total = 0.0, inside = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [lo, hi] = q.cell(i);
        moments[i] = partial_moment(model, lo, hi, q.codepoints[i], order, cfg);
        total += moments[i];
        const double a = std::max(lo, I.lo), b = std::min(hi, I.hi);
        if (b > a) inside += partial_moment(model, a, b, q.codepoints[i], order, cfg);
    }
    row.error_density = total > 0.0 ? inside / total : 0.0;

    const double reference = zador ? *zador : std::pow(nd, r) * total;
    const double h_integral =
        zador ? std::pow(*zador / order.uniform_cell_constant(), 1.0 / (1.0 + r)) : std::numeric_limits<double>::infinity();
    const double slack = 1e-9 * std::max({1.0, std::abs(I.lo), std::abs(I.hi)});
    for (std::size_t i = 0; i < n; ++i) {
        const auto [lo, hi] = q.cell(i);
        if (!(lo >= I.lo - slack && hi <= I.hi + slack)) continue;
        const double expected = std::pow(model.pdf(q.codepoints[i]), r / (1.0 + r)) * h_integral;
        row.mass_deviation = std::max(row.mass_deviation, std::abs(nd * model.mass(lo, hi) - expected));
        row.g4_deviation = std::max(row.g4_deviation, std::abs(std::pow(nd, 1.0 + r) * moments[i] - reference));
    }
    return row;
}

Interval default_diagnostic_interval(const DensityModel& model, const Order& order, const SolverConfig& cfg) {
    const auto q = build_gersho(model, 8, order, cfg).quantizer;
    return {q.boundaries.front(), q.boundaries.back()};
}

Quantizer counterexample_quantizer(int n, double eps, const Order& order) {
    if (n < 2) throw Error(ErrorCode::InvalidParameter, "counterexample needs n >= 2");
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidParameter, "counterexample needs eps in (0, 1)");
    const double first = eps / n;
    const double width = (1.0 - first) / (n - 1);
    const double q_r = order.uniform_cell_constant();
    const double r = order.value();

    std::vector<double> boundaries, codepoints, moments;
    boundaries.push_back(first);
    codepoints.push_back(0.5 * first);
    moments.push_back(q_r * std::pow(first, 1.0 + r));
    for (int i = 1; i < n; ++i) {
        const double lo = first + (i - 1) * width;
        const double hi = (i == n - 1) ? 1.0 : first + i * width;
        if (i < n - 1) boundaries.push_back(hi);
        codepoints.push_back(0.5 * (lo + hi));
        moments.push_back(q_r * std::pow(hi - lo, 1.0 + r));
    }
    return Quantizer(order, std::move(boundaries), std::move(codepoints), std::move(moments), 0.0, 1.0,
                     Method::Counterexample, false);
}

} // namespace gq
