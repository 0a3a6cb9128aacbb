#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gq {

struct Uniform {
    double lo, hi;
};

struct Gaussian {
    double mean, stddev;
};

struct Laplace {
    double loc, scale;
};

struct Exponential {
    double rate;
};

/// Pareto density (exponent - 1) / cutoff * (x / cutoff)^-exponent on [cutoff, inf).
struct PowerTail {
    double exponent, cutoff;
};

/// Piecewise-linear density through sorted knots, renormalized to unit mass.
class Tabulated {
public:
    explicit Tabulated(std::vector<std::pair<double, double>> knots);

    const std::vector<double>& xs() const noexcept { return data_->x; }
    const std::vector<double>& hs() const noexcept { return data_->h; }

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;
    double lo() const noexcept { return data_->lo; }
    double hi() const noexcept { return data_->hi; }
    bool interval_support() const noexcept { return data_->interval; }

private:
    struct Data {
        std::vector<double> x, h;
        std::vector<double> cumulative; // mass left of each knot
        double lo = 0.0, hi = 0.0;
        bool interval = true;
    };
    std::shared_ptr<const Data> data_;
};

/// Immutable non-atomic scalar distribution given by a Lebesgue density.
class DensityModel {
public:
    using Family = std::variant<Uniform, Gaussian, Laplace, Exponential, PowerTail, Tabulated>;

    static DensityModel uniform(double lo, double hi);
    static DensityModel gaussian(double mean, double stddev);
    static DensityModel laplace(double loc, double scale);
    static DensityModel exponential(double rate);
    static DensityModel power_tail(double exponent, double cutoff);
    static DensityModel tabulated(std::vector<std::pair<double, double>> knots);

    const Family& family() const noexcept { return family_; }

    double pdf(double x) const;
    double cdf(double x) const;
    /// Upper tail 1 - F(x), evaluated without cancellation where the family allows.
    double sf(double x) const;
    /// mu([a, b]); endpoints may be infinite. Throws InvalidInterval when a > b.
    double mass(double a, double b) const;
    double quantile(double p) const;

    double support_lo() const noexcept { return lo_; }
    double support_hi() const noexcept { return hi_; }

    /// Characteristic length used to scale tail substitutions and searches.
    double scale() const noexcept { return scale_; }
    /// Interior reference point (median-like) for splitting doubly infinite ranges.
    double center() const noexcept { return center_; }
    /// Finite points where the density is not smooth (support ends, kinks, knots).
    const std::vector<double>& breakpoints() const noexcept { return *breaks_; }

    bool interval_support() const noexcept;
    /// Whether the integral of h^(1/(1+r)) is finite for this family.
    bool zador_finite(double r) const;
    /// p when h(x) decays like x^-p at the unbounded end, infinity for light tails.
    double tail_decay() const noexcept;

    /// Model spec string in the `family:p1,p2` grammar.
    std::string describe() const;

private:
    explicit DensityModel(Family f);
    friend DensityModel load_tabulated_csv(const std::filesystem::path& path);

    Family family_;
    std::string label_;
    double lo_, hi_, scale_, center_;
    std::shared_ptr<const std::vector<double>> breaks_;
};

struct UnimodalityReport {
    bool pass = true;
    /// Smallest level whose grid superlevel set is not a single interval.
    std::optional<double> split_level;
};

/// Grid heuristic: superlevel sets {h >= l} for small l must be single intervals.
/// Infinite supports are truncated to the 1e-9 / 1 - 1e-9 quantiles.
UnimodalityReport is_weakly_unimodal(const DensityModel& model, int grid_size);

/// Reads a `x,h` CSV (header required, >= 4 rows, x strictly increasing).
DensityModel load_tabulated_csv(const std::filesystem::path& path);

/// Parses `uniform:lo,hi`, `gauss:mean,sd`, `laplace:loc,scale`, `exp:rate`,
/// `powertail:exponent,cutoff` or `tabulated:<csv path>`.
DensityModel parse_model_spec(const std::string& spec);

} // namespace gq
