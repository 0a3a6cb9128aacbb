#pragma once

#include "gq/config.hpp"
#include "gq/distribution.hpp"
#include "gq/quadrature.hpp"

namespace gq {

quad::Options quad_options(const SolverConfig& cfg);

/// Integral of |x - c|^r h(x) over [a, b]; the domain is split at c and at the
/// model's breakpoints so no panel straddles a kink.
double partial_moment(const DensityModel& model, double a, double b, double c, const Order& order,
                      const SolverConfig& cfg = {});

/// The unique minimizer over c of partial_moment(a, b, c). For r = 2 this is
/// the conditional mean; otherwise the first-order condition is solved by
/// bracketed root finding on its (increasing) derivative.
double one_point_optimal(const DensityModel& model, double a, double b, const Order& order,
                         const SolverConfig& cfg = {});

/// Optimally centred r-th moment of [a, b]; zero for cells without mass.
double cell_moment(const DensityModel& model, double a, double b, const Order& order,
                   const SolverConfig& cfg = {});

struct CellSolution {
    double center = 0.0;
    double moment = 0.0;
};

/// one_point_optimal and cell_moment in one pass. Throws EmptyCell without mass.
CellSolution solve_cell(const DensityModel& model, double a, double b, const Order& order,
                        const SolverConfig& cfg = {});

} // namespace gq
