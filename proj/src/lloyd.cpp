#include "gq/lloyd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gq/errors.hpp"
#include "gq/moments.hpp"

namespace gq {

namespace {

std::vector<double> midpoints(const std::vector<double>& codepoints) {
    std::vector<double> b;
    b.reserve(codepoints.size());
    for (std::size_t i = 0; i + 1 < codepoints.size(); ++i) b.push_back(0.5 * (codepoints[i] + codepoints[i + 1]));
    return b;
}

Quantizer voronoi_quantizer(const DensityModel& model, const Order& order, const std::vector<double>& codepoints,
                            const SolverConfig& cfg) {
    auto boundaries = midpoints(codepoints);
    const std::size_t n = codepoints.size();
    std::vector<double> moments(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = (i == 0) ? model.support_lo() : boundaries[i - 1];
        const double hi = (i + 1 == n) ? model.support_hi() : boundaries[i];
        moments[i] = partial_moment(model, lo, hi, codepoints[i], order, cfg);
    }
    return Quantizer(order, std::move(boundaries), codepoints, std::move(moments), model.support_lo(),
                     model.support_hi(), Method::Lloyd, false);
}

} // namespace

LloydState lloyd_step(const DensityModel& model, const LloydState& state, const Order& order,
                      const SolverConfig& cfg) {
    const auto& c = state.codepoints;
    const std::size_t n = c.size();
    if (n == 0) throw Error(ErrorCode::InvalidParameter, "lloyd_step: empty codebook");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(c[i] > c[i - 1])) throw Error(ErrorCode::InvalidParameter, "lloyd_step: codepoints must increase");
    }
    const auto b = midpoints(c);

    LloydState next;
    next.codepoints.resize(n);
    next.iteration = state.iteration + 1;
    next.last_move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = (i == 0) ? model.support_lo() : b[i - 1];
        const double hi = (i + 1 == n) ? model.support_hi() : b[i];
        if (!(model.mass(lo, hi) > 0.0)) {
            throw DegenerateCell("lloyd_step: cell " + std::to_string(i) + " has no mass", i);
        }
        next.codepoints[i] = one_point_optimal(model, lo, hi, order, cfg);
        next.last_move = std::max(next.last_move, std::abs(next.codepoints[i] - c[i]));
    }
    return next;
}

LloydResult run_lloyd(const DensityModel& model, int n, const Order& order, const LloydInit& init,
                      const SolverConfig& cfg, bool track_distortion) {
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "run_lloyd: n must be >= 1");
    cfg.validate();
    check_order(order, cfg);

    LloydState state;
    switch (init.kind) {
    case LloydInit::Kind::QuantileGrid:
        for (int i = 1; i <= n; ++i) state.codepoints.push_back(model.quantile((2.0 * i - 1.0) / (2.0 * n)));
        break;
    case LloydInit::Kind::GershoSeed:
        state.codepoints = build_gersho(model, n, order, cfg).quantizer.codepoints;
        break;
    case LloydInit::Kind::Explicit:
        if (static_cast<int>(init.points.size()) != n) {
            throw Error(ErrorCode::InvalidParameter, "run_lloyd: explicit start must have n codepoints");
        }
        state.codepoints = init.points;
        break;
    }

    LloydResult result{voronoi_quantizer(model, order, state.codepoints, cfg), 0, false, {}};
    if (track_distortion) result.distortion_history.push_back(result.quantizer.distortion());

    while (state.iteration < cfg.max_lloyd_iter) {
        state = lloyd_step(model, state, order, cfg);
        double scale = 1.0;
        for (double x : state.codepoints) scale = std::max(scale, std::abs(x));
        if (track_distortion) {
            result.distortion_history.push_back(voronoi_quantizer(model, order, state.codepoints, cfg).distortion());
        }
        if (state.last_move < cfg.root_tol * scale) {
            result.converged = true;
            break;
        }
    }
    result.quantizer = voronoi_quantizer(model, order, state.codepoints, cfg);
    result.iterations = state.iteration;
    return result;
}

} // namespace gq
