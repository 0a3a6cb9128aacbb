#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gq/distribution.hpp"
#include "gq/errors.hpp"
#include "gq/gersho.hpp"
#include "gq/lloyd.hpp"
#include "gq/moments.hpp"

using gq::DensityModel;
using gq::Order;

namespace {
const Order r2(2.0);
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
} // namespace

TEST_CASE("uniform midpoint grid is a fixed point") {
    const auto u = DensityModel::uniform(0, 1);
    gq::LloydState s;
    for (int i = 1; i <= 8; ++i) s.codepoints.push_back((2.0 * i - 1) / 16);
    const auto next = gq::lloyd_step(u, s, r2);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(next.codepoints[i] - s.codepoints[i]) < 1e-14);
    CHECK(next.last_move < 1e-14);
    CHECK(next.iteration == 1);
}

TEST_CASE("single level jumps to the optimal point") {
    const auto e = DensityModel::exponential(1);
    gq::LloydState s{{7.0}};
    const auto next = gq::lloyd_step(e, s, r2);
    CHECK(next.codepoints[0] == doctest::Approx(1.0).epsilon(1e-12));
    const auto res = gq::run_lloyd(e, 1, r2);
    CHECK(res.quantizer.codepoints[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rel(res.quantizer.distortion(), 1.0) < 1e-10);
}

TEST_CASE("gaussian two-level problem") {
    const auto g = DensityModel::gaussian(0, 1);
    const auto res = gq::run_lloyd(g, 2, r2, gq::LloydInit::explicit_points({-1.0, 1.0}));
    CHECK(res.converged);
    CHECK(std::abs(res.quantizer.codepoints[1] - std::sqrt(2 / std::numbers::pi)) < 1e-9);
    CHECK(std::abs(res.quantizer.distortion() - (1 - 2 / std::numbers::pi)) < 1e-9);
    const auto grid = gq::run_lloyd(g, 2, r2);
    CHECK(std::abs(grid.quantizer.distortion() - (1 - 2 / std::numbers::pi)) < 1e-9);
}

TEST_CASE("uniform optimum") {
    const auto res = gq::run_lloyd(DensityModel::uniform(0, 1), 8, r2);
    CHECK(rel(res.quantizer.distortion(), 1.0 / (12 * 64)) < 1e-10);
    const auto g = gq::build_gersho(DensityModel::uniform(0, 1), 8, r2).quantizer;
    for (int i = 0; i < 7; ++i) CHECK(std::abs(res.quantizer.boundaries[i] - g.boundaries[i]) < 1e-10);
    CHECK(res.quantizer.method == gq::Method::Lloyd);
}

TEST_CASE("monotone descent") {
    for (const auto& m : {DensityModel::gaussian(0, 1), DensityModel::laplace(0, 1), DensityModel::exponential(1),
                          DensityModel::tabulated({{0, 0}, {1, 2}, {2, 1}, {4, 0}})}) {
        gq::SolverConfig cfg;
        cfg.max_lloyd_iter = 200;
        const auto res = gq::run_lloyd(m, 12, r2, {}, cfg, true);
        REQUIRE(res.distortion_history.size() >= 2);
        for (std::size_t i = 1; i < res.distortion_history.size(); ++i) {
            CHECK(res.distortion_history[i] <= res.distortion_history[i - 1] + 1e-10);
        }
    }
}

TEST_CASE("fixed point consistency") {
    const auto m = DensityModel::laplace(0, 1);
    const auto res = gq::run_lloyd(m, 6, Order(3.0));
    REQUIRE(res.converged);
    const auto& q = res.quantizer;
    for (std::size_t i = 0; i + 1 < q.level(); ++i) {
        CHECK(std::abs(q.boundaries[i] - 0.5 * (q.codepoints[i] + q.codepoints[i + 1])) < 1e-10);
    }
    for (std::size_t i = 0; i < q.level(); ++i) {
        const auto [lo, hi] = q.cell(i);
        CHECK(std::abs(q.codepoints[i] - gq::one_point_optimal(m, lo, hi, Order(3.0))) < 1e-9);
    }
    CHECK(gq::verify_quantizer(m, q, Order(3.0)).voronoi);
}

TEST_CASE("gersho distortion is no better than the optimum") {
    for (const auto& m : {DensityModel::gaussian(0, 1), DensityModel::laplace(0, 1), DensityModel::exponential(1)}) {
        for (int n : {3, 8}) {
            const double lloyd = gq::run_lloyd(m, n, r2).quantizer.distortion();
            const double gersho = gq::build_gersho(m, n, r2).quantizer.distortion();
            CHECK(gersho >= lloyd - 1e-10);
        }
    }
}

TEST_CASE("gersho seed starts close") {
    const auto m = DensityModel::gaussian(0, 1);
    const auto seeded = gq::run_lloyd(m, 10, r2, gq::LloydInit::gersho_seed());
    const auto grid = gq::run_lloyd(m, 10, r2);
    CHECK(rel(seeded.quantizer.distortion(), grid.quantizer.distortion()) < 1e-8);
}

TEST_CASE("degenerate cells") {
    const auto u = DensityModel::uniform(0, 1);
    gq::LloydState s{{0.2, 3.0, 4.0}};
    try {
        gq::lloyd_step(u, s, r2);
        FAIL("expected DegenerateCell");
    } catch (const gq::DegenerateCell& e) {
        CHECK(e.code() == gq::ErrorCode::DegenerateCell);
        CHECK(e.index() == 1);
    }
    CHECK_THROWS_AS(gq::run_lloyd(u, 3, r2, gq::LloydInit::explicit_points({0.5, 0.2, 0.9})), gq::Error);
    CHECK_THROWS_AS(gq::run_lloyd(u, 3, r2, gq::LloydInit::explicit_points({0.5})), gq::Error);
}

TEST_CASE("iteration cap flags non-convergence") {
    gq::SolverConfig cfg;
    cfg.max_lloyd_iter = 3;
    const auto res = gq::run_lloyd(DensityModel::gaussian(0, 1), 16, r2, {}, cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 3);
}
