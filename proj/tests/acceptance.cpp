// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gq/asymptotics.hpp"
#include "gq/distribution.hpp"
#include "gq/errors.hpp"
#include "gq/gersho.hpp"
#include "gq/io.hpp"
#include "gq/lloyd.hpp"
#include "gq/moments.hpp"
#include "oracles.hpp"

using gq::DensityModel;
using gq::Order;

namespace {

const Order r2(2.0);

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

char buf[512];
template <class... A>
std::string fmt(const char* f, A... a) {
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

Outcome uniform_exact() {
    Outcome o;
    const auto u = DensityModel::uniform(0, 1);
    const auto t0 = std::chrono::steady_clock::now();
    double worst_d = 0, worst_b = 0;
    for (int n = 1; n <= 64; ++n) {
        const auto q = gq::build_gersho(u, n, r2).quantizer;
        worst_d = std::max(worst_d, rel(q.distortion(), 1.0 / (12.0 * n * n)));
        for (int i = 0; i + 1 < n; ++i) worst_b = std::max(worst_b, std::abs(q.boundaries[i] - (i + 1.0) / n));
    }
    const double s = seconds_since(t0);
    if (worst_d > 1e-8) o.fail(fmt("distortion rel err %.3g", worst_d));
    if (worst_b > 1e-10) o.fail(fmt("boundary err %.3g", worst_b));
    if (s > 5) o.fail(fmt("took %.2f s", s));
    if (o.ok) o.detail = fmt("max rel D err %.2g, max boundary err %.2g, %.2f s", worst_d, worst_b, s);
    return o;
}

Outcome zador_values() {
    Outcome o;
    const std::pair<DensityModel, double> cases[] = {
        {DensityModel::uniform(0, 1), oracle::zador_uniform},
        {DensityModel::laplace(0, 1), oracle::zador_laplace},
        {DensityModel::gaussian(0, 1), oracle::zador_gaussian},
        {DensityModel::exponential(1), oracle::zador_exponential},
    };
    double worst = 0;
    for (const auto& [m, want] : cases) {
        const double e = rel(gq::zador_constant(m, r2), want);
        worst = std::max(worst, e);
        if (e > 1e-8) o.fail(m.describe() + fmt(" rel err %.3g", e));
    }
    if (o.ok) o.detail = fmt("max rel err %.2g", worst);
    return o;
}

Outcome convergence_ratios() {
    Outcome o;
    std::string summary;
    for (const auto& m : {DensityModel::gaussian(0, 1), DensityModel::laplace(0, 1), DensityModel::exponential(1)}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto t = gq::convergence_table(m, r2, {64, 1024}, gq::TableMethod::Gersho);
        const double s = seconds_since(t0);
        if (t.rows[0].failed || t.rows[1].failed) {
            o.fail(m.describe() + " construction failed");
            continue;
        }
        const double r64 = t.rows[0].ratio, r1024 = t.rows[1].ratio;
        if (std::abs(r1024 - 1) > 0.05) o.fail(m.describe() + fmt(" ratio %.5f at n=1024", r1024));
        if (!(std::abs(r1024 - 1) < std::abs(r64 - 1))) o.fail(m.describe() + " ratio not closer to 1 at n=1024");
        if (s > 120) o.fail(m.describe() + fmt(" took %.1f s", s));
        summary += fmt("%s %.5f->%.5f (%.2fs) ", m.describe().c_str(), r64, r1024, s);
    }
    if (o.ok) o.detail = summary;
    return o;
}

Outcome gaussian_two_level() {
    Outcome o;
    const auto q = gq::build_gersho(DensityModel::gaussian(0, 1), 2, r2).quantizer;
    const double c = std::sqrt(2 / std::numbers::pi), d = 1 - 2 / std::numbers::pi;
    const double ec = std::max(std::abs(q.codepoints[0] + c), std::abs(q.codepoints[1] - c));
    const double ed = std::abs(q.distortion() - d);
    if (ec > 1e-7) o.fail(fmt("codepoint err %.3g", ec));
    if (ed > 1e-7) o.fail(fmt("distortion err %.3g", ed));
    if (o.ok) o.detail = fmt("codepoint err %.2g, distortion err %.2g", ec, ed);
    return o;
}

Outcome monotone_sequences() {
    Outcome o;
    for (const auto& m : {DensityModel::gaussian(0, 1), DensityModel::exponential(1)}) {
        const auto I = gq::default_diagnostic_interval(m, r2);
        double prev_per_cell = INFINITY;
        int prev_n2 = -1;
        for (int n = 1; n <= 64; ++n) {
            const auto q = gq::build_gersho(m, n, r2).quantizer;
            const double per_cell = q.distortion() / n;
            if (per_cell > prev_per_cell + 1e-9) o.fail(m.describe() + fmt(" D_n/n increases at n=%d", n));
            const int n2 = gq::cell_census(q, I).n2;
            if (n2 < prev_n2) o.fail(m.describe() + fmt(" n2 decreases at n=%d", n));
            prev_per_cell = per_cell;
            prev_n2 = n2;
        }
    }
    if (o.ok) o.detail = "gaussian and exponential, n = 1..64";
    return o;
}

Outcome doubling_agreement() {
    Outcome o;
    int agreeing = 0, rejected = 0;
    for (const auto& m : {DensityModel::uniform(0, 1), DensityModel::gaussian(0, 1), DensityModel::laplace(0, 1),
                          DensityModel::exponential(1)}) {
        for (int k = 0; k <= 6; ++k) {
            const auto d = gq::build_by_doubling(m, k, r2).quantizer;
            if (!gq::verify_quantizer(m, d, r2, 1e-6).all()) {
                ++rejected;
                continue;
            }
            const auto g = gq::build_gersho(m, 1 << k, r2).quantizer;
            const double e = rel(d.distortion(), g.distortion());
            if (e > 1e-6) o.fail(m.describe() + fmt(" k=%d rel diff %.3g", k, e));
            ++agreeing;
        }
    }
    if (o.ok) o.detail = fmt("%d Gersho doubling runs agree, %d rejected by verify", agreeing, rejected);
    return o;
}

Outcome counterexample() {
    Outcome o;
    const auto u = DensityModel::uniform(0, 1);
    const auto big = gq::counterexample_quantizer(1024, 0.5);
    const double ratio = 1024.0 * 1024.0 * big.distortion() / oracle::q_const(2.0);
    if (ratio < 0.99 || ratio > 1.01) o.fail(fmt("ratio %.6f at n=1024", ratio));
    for (int n = 2; n <= 1024; n *= 2) {
        if (gq::verify_quantizer(u, gq::counterexample_quantizer(n, 0.5), r2, 1e-6).g4) {
            o.fail(fmt("G4 holds at n=%d", n));
        }
    }
    const double d2 = gq::counterexample_quantizer(2, 0.5).distortion();
    if (std::abs(d2 - 0.0364583333333333) > 1e-10) o.fail(fmt("n=2 D = %.12g", d2));
    if (o.ok) o.detail = fmt("ratio %.6f at n=1024, n=2 D = %.10f", ratio, d2);
    return o;
}

Outcome properties() {
    Outcome o;
    std::mt19937_64 rng(20261018);
    std::uniform_real_distribution<double> p(0.005, 0.995);
    const std::vector<DensityModel> models{DensityModel::uniform(0, 1), DensityModel::gaussian(0, 1),
                                           DensityModel::laplace(0, 1), DensityModel::exponential(1),
                                           DensityModel::power_tail(4.5, 1),
                                           DensityModel::tabulated({{0, 0}, {1, 2}, {2, 1}, {4, 0}})};
    int checked = 0;
    for (const auto& m : models) {
        for (int i = 0; i < 200; ++i) {
            double x[3] = {m.quantile(p(rng)), m.quantile(p(rng)), m.quantile(p(rng))};
            std::sort(x, x + 3);
            if (!(x[0] < x[1]) || !(x[1] < x[2])) continue;
            const double m1 = gq::cell_moment(m, x[0], x[1], r2), m2 = gq::cell_moment(m, x[0], x[2], r2);
            if (m2 < m1) o.fail(m.describe() + fmt(" cell moment decreases on [%g,%g,%g]", x[0], x[1], x[2]));
            const double c = gq::one_point_optimal(m, x[0], x[2], r2);
            if (c < x[0] || c > x[2]) o.fail(m.describe() + fmt(" center %g outside [%g,%g]", c, x[0], x[2]));
            ++checked;
        }
        gq::SolverConfig cfg;
        cfg.max_lloyd_iter = 100;
        const auto l = gq::run_lloyd(m, 10, r2, {}, cfg, true);
        for (std::size_t i = 1; i < l.distortion_history.size(); ++i) {
            if (l.distortion_history[i] > l.distortion_history[i - 1] + 1e-10) {
                o.fail(m.describe() + fmt(" lloyd distortion rises at step %zu", i));
            }
        }
        const auto a = gq::io::quantizer_to_json(gq::build_gersho(m, 17, Order(2.5)).quantizer);
        const auto b = gq::io::quantizer_to_json(gq::build_gersho(m, 17, Order(2.5)).quantizer);
        if (a != b) o.fail(m.describe() + " rerun differs");
    }
    if (o.ok) o.detail = fmt("%d brackets over %zu families", checked, models.size());
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"uniform closed form, n = 1..64", uniform_exact},
        {"zador constants", zador_values},
        {"convergence ratio at n = 1024", convergence_ratios},
        {"gaussian two-level quantizer", gaussian_two_level},
        {"D_n/n and census monotone", monotone_sequences},
        {"doubling agrees with gersho when valid", doubling_agreement},
        {"counterexample fixture", counterexample},
        {"property suite", properties},
    };
    int failures = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        if (!o.ok) ++failures;
        std::printf("[%s] %d %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
