#pragma once

#include <string>

namespace gq {

/// Norm exponent of the distortion |x - q(x)|^r. Always strictly greater than one.
class Order {
public:
    explicit Order(double r);

    double value() const noexcept { return r_; }
    bool is_quadratic() const noexcept { return r_ == 2.0; }

    /// Q(r) = 2^-r / (1 + r), the normalized r-th moment of the unit uniform cell.
    double uniform_cell_constant() const noexcept;

    friend bool operator==(const Order&, const Order&) = default;

private:
    double r_;
};

struct SolverConfig {
    double quad_rel_tol = 1e-10;
    double quad_abs_tol = 1e-13;
    int max_quad_depth = 60;
    int max_quad_panels = 2000;

    // Bracket width in x-units (scaled by max(1, |x|)) and relative residual
    // in moment units; a root solve stops at whichever is reached first.
    double root_tol = 1e-12;
    double root_tol_moment = 1e-11;
    int max_root_iter = 200;

    int max_lloyd_iter = 10000;

    // Smallest exponent accepted by the construction entry points.
    double min_order = 1.1;

    /// Throws InvalidParameter when a tolerance is not positive or a cap is < 1.
    void validate() const;

    /// Applies a single override by key name; unknown keys throw InvalidParameter.
    void set(const std::string& key, double value);

private:
    void assign(const std::string& key, double value);
};

/// Rejects exponents below cfg.min_order.
void check_order(const Order& order, const SolverConfig& cfg);

} // namespace gq
