#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gq/config.hpp"
#include "gq/distribution.hpp"

namespace gq {

enum class Method { OuterBisection, Doubling, Lloyd, Counterexample };

const char* to_string(Method m) noexcept;
Method method_from_string(const std::string& s);

/// Scalar quantizer with interval cells. Cell i is [b_{i-1}, b_i) with
/// b_0 = support_lo and b_n = support_hi.
struct Quantizer {
    Quantizer(Order order, std::vector<double> boundaries, std::vector<double> codepoints,
              std::vector<double> cell_moments, double support_lo = -std::numeric_limits<double>::infinity(),
              double support_hi = std::numeric_limits<double>::infinity(), Method method = Method::OuterBisection,
              bool unique = true);

    Order order;
    std::vector<double> boundaries;
    std::vector<double> codepoints;
    std::vector<double> cell_moments;
    double support_lo;
    double support_hi;
    Method method;
    bool unique;

    std::size_t level() const noexcept { return codepoints.size(); }
    std::pair<double, double> cell(std::size_t i) const;
    /// Sum of the stored per-cell moments.
    double distortion() const;
};

struct ConstructionReport {
    double distortion = 0.0;
    double per_cell_spread = 0.0;
    int outer_iterations = 0;
    /// OuterBisection: relative residual 1 - tail/m per outer evaluation.
    /// Doubling: per_cell_spread after each doubling.
    std::vector<double> residual_history;
    Method method = Method::OuterBisection;
    bool unique = true;
};

struct BuildResult {
    Quantizer quantizer;
    ConstructionReport report;
};

/// max_i |m_i - mean| / mean; zero for fewer than two cells.
double per_cell_spread(std::span<const double> moments);

/// Smallest b with cell_moment(a, b) = target.
double extend_cell(const DensityModel& model, const Order& order, double a, double target,
                   const SolverConfig& cfg = {});

/// The unique n-level quantizer with equal per-cell moments (interval support).
/// Outer bracketed solve on the per-cell moment m: n - 1 greedy extend_cell
/// steps from the left edge, then compare the remaining tail moment with m.
BuildResult build_gersho(const DensityModel& model, int n, const Order& order, const SolverConfig& cfg = {});

/// s in (a, b) with cell_moment(a, s) = cell_moment(s, b).
double split_cell(const DensityModel& model, const Order& order, double a, double b, const SolverConfig& cfg = {});

/// Level 2^k quantizer by repeatedly splitting every cell into two cells of
/// equal moment. Global equality of the moments is measured, not enforced.
BuildResult build_by_doubling(const DensityModel& model, int k, const Order& order, const SolverConfig& cfg = {});

struct Verification {
    bool g1 = false; // level count, every cell carries mass
    bool g2 = false; // interval cells: finite increasing boundaries and codepoints
    bool g3 = false; // codepoints optimal for their cells
    bool g4 = false; // equal per-cell moments
    bool voronoi = false; // informational: boundaries are codepoint midpoints
    std::vector<double> cell_moments;
    double distortion = 0.0;
    double per_cell_spread = 0.0;
    double max_center_offset = 0.0;
    std::string note;

    bool all() const noexcept { return g1 && g2 && g3 && g4; }
};

/// Checks (G1)-(G4) with relative tolerance `tol`. Never throws for a
/// structurally odd quantizer; failures show up in the flags and `note`.
Verification verify_quantizer(const DensityModel& model, const Quantizer& q, const Order& order,
                              double tol = 1e-6, const SolverConfig& cfg = {});

/// Sum over cells of partial_moment(cell, codepoint).
double distortion(const DensityModel& model, const Quantizer& q, const Order& order, const SolverConfig& cfg = {});

/// Rebuilds codepoints and moments for fixed boundaries (each codepoint optimal for its cell).
Quantizer quantizer_from_boundaries(const DensityModel& model, const Order& order, std::vector<double> boundaries,
                                   Method method, const SolverConfig& cfg);

} // namespace gq
