#include "gq/config.hpp"

#include <cmath>

#include "gq/errors.hpp"

namespace gq {

Order::Order(double r) : r_(r) {
    if (!(r > 1.0) || !std::isfinite(r)) {
        throw Error(ErrorCode::InvalidParameter, "order r must be a finite real > 1");
    }
}

double Order::uniform_cell_constant() const noexcept { return std::pow(2.0, -r_) / (1.0 + r_); }

void SolverConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be a positive finite real");
        }
    };
    positive(quad_rel_tol, "quad_rel_tol");
    positive(quad_abs_tol, "quad_abs_tol");
    positive(root_tol, "root_tol");
    positive(root_tol_moment, "root_tol_moment");
    if (max_quad_depth < 1 || max_quad_panels < 1 || max_root_iter < 1 || max_lloyd_iter < 1) {
        throw Error(ErrorCode::InvalidParameter, "iteration caps must be >= 1");
    }
    if (!(min_order > 1.0)) throw Error(ErrorCode::InvalidParameter, "min_order must be > 1");
}

void SolverConfig::set(const std::string& key, double value) {
    SolverConfig next = *this;
    next.assign(key, value);
    next.validate();
    *this = next;
}

void SolverConfig::assign(const std::string& key, double value) {
    auto as_int = [&](int& slot) {
        if (value != std::floor(value) || value < 1 || value > 1e9) {
            throw Error(ErrorCode::InvalidParameter, key + " must be a positive integer");
        }
        slot = static_cast<int>(value);
    };
    if (key == "quad_rel_tol") quad_rel_tol = value;
    else if (key == "quad_abs_tol") quad_abs_tol = value;
    else if (key == "max_quad_depth") as_int(max_quad_depth);
    else if (key == "max_quad_panels") as_int(max_quad_panels);
    else if (key == "root_tol") root_tol = value;
    else if (key == "root_tol_moment") root_tol_moment = value;
    else if (key == "max_root_iter") as_int(max_root_iter);
    else if (key == "max_lloyd_iter") as_int(max_lloyd_iter);
    else if (key == "min_order") min_order = value;
    else throw Error(ErrorCode::InvalidParameter, "unknown solver config key '" + key + "'");
}

void check_order(const Order& order, const SolverConfig& cfg) {
    if (order.value() < cfg.min_order) {
        throw Error(ErrorCode::InvalidParameter,
                    "order r = " + std::to_string(order.value()) + " is below the configured minimum " +
                        std::to_string(cfg.min_order));
    }
}

} // namespace gq
