#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gq/asymptotics.hpp"
#include "gq/distribution.hpp"
#include "gq/errors.hpp"
#include "gq/gersho.hpp"
#include "oracles.hpp"

using gq::DensityModel;
using gq::Order;

namespace {
const Order r2(2.0);
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
} // namespace

TEST_CASE("zador constants") {
    CHECK(rel(gq::zador_constant(DensityModel::uniform(0, 1), r2), oracle::zador_uniform) < 1e-8);
    CHECK(rel(gq::zador_constant(DensityModel::laplace(0, 1), r2), oracle::zador_laplace) < 1e-8);
    CHECK(rel(gq::zador_constant(DensityModel::gaussian(0, 1), r2), oracle::zador_gaussian) < 1e-8);
    CHECK(rel(gq::zador_constant(DensityModel::exponential(1), r2), oracle::zador_exponential) < 1e-8);
    // Scaling: C0 scales like sigma^r.
    CHECK(rel(gq::zador_constant(DensityModel::gaussian(3, 2), r2), 4 * oracle::zador_gaussian) < 1e-8);
    // Uniform on [0, L] at order r: Q(r) L^r.
    CHECK(rel(gq::zador_constant(DensityModel::uniform(0, 3), Order(3.0)), oracle::q_const(3.0) * 27) < 1e-8);
    // Pareto(p, 1), r = 2: (1/12) (p - 1) (3 / (p - 3))^3.
    CHECK(rel(gq::zador_constant(DensityModel::power_tail(4, 1), r2), 6.75) < 1e-10);
    try {
        gq::zador_constant(DensityModel::power_tail(3, 1), r2);
        FAIL("expected InfiniteZadorConstant");
    } catch (const gq::Error& e) {
        CHECK(e.code() == gq::ErrorCode::InfiniteZadorConstant);
    }
}

TEST_CASE("convergence table examples") {
    const auto t = gq::convergence_table(DensityModel::uniform(0, 1), r2, {1, 2, 4, 8}, gq::TableMethod::Gersho);
    REQUIRE(t.zador.has_value());
    for (const auto& row : t.rows) {
        CHECK_FALSE(row.failed);
        CHECK(std::abs(row.ratio - 1.0) < 1e-8);
        CHECK(row.scaled == std::pow(row.n, 2.0) * row.distortion);
    }
    const auto g = gq::convergence_table(DensityModel::gaussian(0, 1), r2, {1}, gq::TableMethod::Gersho);
    CHECK(rel(g.rows[0].scaled, 1.0) < 1e-10);
    CHECK(g.rows[0].ratio == doctest::Approx(0.3676).epsilon(1e-4));
    CHECK(std::isnan(g.rows[0].rate));
}

TEST_CASE("convergence table keeps level order under parallel jobs") {
    const std::vector<int> levels{16, 1, 64, 4, 32, 2};
    const auto serial = gq::convergence_table(DensityModel::laplace(0, 1), r2, levels, gq::TableMethod::Gersho, {}, 1);
    const auto parallel = gq::convergence_table(DensityModel::laplace(0, 1), r2, levels, gq::TableMethod::Gersho, {}, 4);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        CHECK(serial.rows[i].n == levels[i]);
        CHECK(parallel.rows[i].n == levels[i]);
        CHECK(serial.rows[i].distortion == parallel.rows[i].distortion);
    }
}

TEST_CASE("failed rows do not abort the table") {
    const auto t = gq::convergence_table(DensityModel::power_tail(2.5, 1), r2, {1, 2}, gq::TableMethod::Gersho);
    CHECK_FALSE(t.zador.has_value());
    for (const auto& row : t.rows) {
        CHECK(row.failed);
        CHECK_FALSE(row.error.empty());
        CHECK(std::isnan(row.scaled));
    }
    CHECK_THROWS_AS(gq::convergence_table(DensityModel::uniform(0, 1), r2, {}, gq::TableMethod::Gersho), gq::Error);
    CHECK_THROWS_AS(gq::convergence_table(DensityModel::uniform(0, 1), r2, {0}, gq::TableMethod::Gersho), gq::Error);
}

TEST_CASE("lloyd tables") {
    const auto t = gq::convergence_table(DensityModel::exponential(1), r2, {1, 4}, gq::TableMethod::Lloyd);
    CHECK(rel(t.rows[0].distortion, 1.0) < 1e-10);
    const auto g = gq::convergence_table(DensityModel::exponential(1), r2, {4}, gq::TableMethod::Gersho);
    CHECK(t.rows[1].distortion <= g.rows[0].distortion + 1e-12);
}

TEST_CASE("dyadic levels") {
    CHECK(gq::dyadic_levels(0) == std::vector<int>{1});
    CHECK(gq::dyadic_levels(3) == std::vector<int>{1, 2, 4, 8});
    CHECK_THROWS_AS(gq::dyadic_levels(-1), gq::Error);
}

TEST_CASE("cell census") {
    const auto u = DensityModel::uniform(0, 1);
    const auto q = gq::build_gersho(u, 8, r2).quantizer;
    auto c = gq::cell_census(q, {0.0, 0.5});
    CHECK(c.n1 == 4);
    CHECK(c.n2 == 4);
    c = gq::cell_census(q, {-1e3, 1e3});
    CHECK(c.n1 == 8);
    CHECK(c.n2 == 0);
    c = gq::cell_census(q, {0.3, 0.3});
    CHECK(c.n1 == 0);
    // A straddled interval: cells [0.25, 0.375) and [0.375, 0.5) straddle/contain.
    c = gq::cell_census(q, {0.3, 0.6});
    CHECK(c.n1 == 1);
    CHECK(c.n1 + c.n2 + 2 == 8);
}

TEST_CASE("census monotonicity on the gaussian") {
    const auto g = DensityModel::gaussian(0, 1);
    const auto I = gq::default_diagnostic_interval(g, r2);
    int prev = -1;
    for (int n = 4; n <= 64; ++n) {
        const auto c = gq::cell_census(gq::build_gersho(g, n, r2).quantizer, I);
        CHECK(c.n2 >= prev);
        prev = c.n2;
    }
}

TEST_CASE("diagnostics on the uniform") {
    const auto u = DensityModel::uniform(0, 1);
    for (int n : {2, 8, 32}) {
        const auto q = gq::build_gersho(u, n, r2).quantizer;
        const auto d = gq::diagnostics(u, q, r2, {0.0, 0.5});
        CHECK(d.point_density == doctest::Approx(0.5));
        CHECK(d.error_density == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(d.mass_deviation < 1e-9);
        CHECK(d.g4_deviation < 1e-9);
    }
    CHECK_THROWS_AS(gq::diagnostics(u, gq::build_gersho(u, 2, r2).quantizer, r2, {0, INFINITY}), gq::Error);
    CHECK_THROWS_AS(gq::diagnostics(u, gq::build_gersho(u, 2, r2).quantizer, r2, {2, 3}), gq::Error);
}

TEST_CASE("diagnostics on the gaussian") {
    const auto g = DensityModel::gaussian(0, 1);
    // h^(1/3) is proportional to the N(0, 3) density, so the point density tends to P(|X| < 1), X ~ N(0, 3).
    const double limit = std::erf(1.0 / std::sqrt(6.0));
    const auto q = gq::build_gersho(g, 256, r2).quantizer;
    const auto d = gq::diagnostics(g, q, r2, {-1.0, 1.0});
    CHECK(std::abs(d.point_density - limit) < 0.02);
    // Exact G4 makes the deviation |n^r D - C0|.
    CHECK(rel(d.g4_deviation, std::abs(256.0 * 256.0 * q.distortion() - oracle::zador_gaussian)) < 1e-6);
    CHECK(d.error_density > 0.0);
    CHECK(d.error_density < 1.0);
}

TEST_CASE("counterexample fixture") {
    const auto q2 = gq::counterexample_quantizer(2, 0.5);
    CHECK(std::abs(q2.distortion() - 0.0364583333333333) < 1e-10);
    CHECK(std::abs(4 * q2.distortion() - 0.1458333333333333) < 1e-10);
    REQUIRE(q2.boundaries.size() == 1);
    CHECK(q2.boundaries[0] == 0.25);
    // Closed form: n^r D = Q(r) (eps^(1+r) / n + (n - 1) / n (1 + (1 - eps) / (n - 1))^(1+r)).
    for (int n : {2, 10, 100}) {
        const double eps = 0.5;
        const double closed = (std::pow(eps, 3) / n + (n - 1.0) / n * std::pow(1 + (1 - eps) / (n - 1), 3)) / 12;
        CHECK(rel(n * n * gq::counterexample_quantizer(n, eps).distortion(), closed) < 1e-12);
    }
    const auto big = gq::counterexample_quantizer(1024, 0.5);
    CHECK(std::abs(1024.0 * 1024.0 * big.distortion() * 12 - 1) < 0.01);
    CHECK_THROWS_AS(gq::counterexample_quantizer(1, 0.5), gq::Error);
    CHECK_THROWS_AS(gq::counterexample_quantizer(4, 1.0), gq::Error);
    CHECK_THROWS_AS(gq::counterexample_quantizer(4, 0.0), gq::Error);
}
