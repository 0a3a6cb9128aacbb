#pragma once

#include <limits>
#include <vector>

#include "gq/config.hpp"
#include "gq/distribution.hpp"
#include "gq/gersho.hpp"

namespace gq {

struct LloydState {
    std::vector<double> codepoints;
    int iteration = 0;
    double last_move = std::numeric_limits<double>::infinity();
};

/// One Lloyd-Max update: midpoint (nearest-neighbour) cells, then each
/// codepoint moved to the optimal point of its cell. Throws DegenerateCell
/// with the index of the first cell without mass.
LloydState lloyd_step(const DensityModel& model, const LloydState& state, const Order& order,
                      const SolverConfig& cfg = {});

struct LloydInit {
    enum class Kind { QuantileGrid, GershoSeed, Explicit };

    Kind kind = Kind::QuantileGrid;
    std::vector<double> points;

    static LloydInit quantile_grid() { return {}; }
    static LloydInit gersho_seed() { return {Kind::GershoSeed, {}}; }
    static LloydInit explicit_points(std::vector<double> pts) { return {Kind::Explicit, std::move(pts)}; }
};

struct LloydResult {
    Quantizer quantizer;
    int iterations = 0;
    bool converged = false;
    std::vector<double> distortion_history;
};

/// Iterates lloyd_step until the largest codepoint move drops below
/// cfg.root_tol * max(1, |codepoints|) or cfg.max_lloyd_iter steps.
LloydResult run_lloyd(const DensityModel& model, int n, const Order& order, const LloydInit& init = {},
                      const SolverConfig& cfg = {}, bool track_distortion = false);

} // namespace gq
