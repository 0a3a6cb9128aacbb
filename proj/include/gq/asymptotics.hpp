#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gq/config.hpp"
#include "gq/distribution.hpp"
#include "gq/gersho.hpp"

namespace gq {

struct Interval {
    double lo, hi;
};

/// C0 = Q(r) (int h^(1/(1+r)))^(1+r). Throws InfiniteZadorConstant when the
/// integral diverges.
double zador_constant(const DensityModel& model, const Order& order, const SolverConfig& cfg = {});

enum class TableMethod { Gersho, Lloyd };

struct ConvergenceRow {
    int n = 0;
    double distortion = 0.0;
    double scaled = 0.0; // n^r * distortion
    double ratio = 0.0;  // scaled / C0, NaN when C0 is infinite
    double rate = 0.0;   // |C0 - scaled| * n / log(n), NaN for n = 1
    bool failed = false;
    std::string error;
    double seconds = 0.0;
};

struct ConvergenceTable {
    std::optional<double> zador; // empty when C0 is infinite
    std::vector<ConvergenceRow> rows;
    std::vector<std::optional<Quantizer>> quantizers; // parallel to rows
};

/// One row per level. Failed constructions are recorded in the row rather
/// than aborting; rows keep the order of `levels` regardless of `jobs`.
ConvergenceTable convergence_table(const DensityModel& model, const Order& order, const std::vector<int>& levels,
                                   TableMethod method, const SolverConfig& cfg = {}, int jobs = 1);

/// Levels 1, 2, 4, ..., 2^k.
std::vector<int> dyadic_levels(int k);

struct Census {
    int n1 = 0; // cells contained in I
    int n2 = 0; // cells disjoint from the interior of I
};

/// Cell counts relative to a compact interval. Comparisons allow an absolute
/// slack of `slack * max(1, |u|, |v|)` so boundaries that land on u or v up
/// to rounding count as touching.
Census cell_census(const Quantizer& q, const Interval& I, double slack = 1e-9);

struct DiagnosticsRow {
    int n = 0;
    double point_density = 0.0;
    double error_density = 0.0;
    double mass_deviation = 0.0;
    double g4_deviation = 0.0;
    bool zador_finite = true;
};

/// Point, error and mass densities and the (G4) deviation on a compact
/// interval inside the support. `zador` may be supplied to skip recomputing C0.
DiagnosticsRow diagnostics(const DensityModel& model, const Quantizer& q, const Order& order, const Interval& I,
                           const SolverConfig& cfg = {}, std::optional<double> zador = std::nullopt);

/// Hull of the interior (bounded) cells of the level-8 Gersho quantizer.
Interval default_diagnostic_interval(const DensityModel& model, const Order& order, const SolverConfig& cfg = {});

/// Uniform(0,1) fixture: first cell [0, eps/n), then n - 1 equal cells, all
/// codepoints at cell centroids. Asymptotically optimal but never (G4).
Quantizer counterexample_quantizer(int n, double eps, const Order& order = Order(2.0));

} // namespace gq
