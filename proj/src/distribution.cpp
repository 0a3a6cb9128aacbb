#include "gq/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "gq/errors.hpp"

namespace gq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_real(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw Error(ErrorCode::ParseError, "cannot parse number '" + text + "' in " + context);
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

std::string fmt_param(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

// ---------------------------------------------------------------- Tabulated

Tabulated::Tabulated(std::vector<std::pair<double, double>> knots) {
    require(knots.size() >= 2, "tabulated density needs at least two knots");
    auto d = std::make_shared<Data>();
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto [x, h] = knots[i];
        require(std::isfinite(x), "tabulated knot x must be finite");
        require(std::isfinite(h) && h >= 0.0, "tabulated density values must be finite and nonnegative");
        if (i > 0) require(x > knots[i - 1].first, "tabulated knots must be strictly increasing in x");
        d->x.push_back(x);
        d->h.push_back(h);
    }

    const std::size_t n = d->x.size();
    d->cumulative.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        d->cumulative[i] = d->cumulative[i - 1] + 0.5 * (d->h[i - 1] + d->h[i]) * (d->x[i] - d->x[i - 1]);
    }
    const double total = d->cumulative.back();
    require(total > 0.0, "tabulated density has zero total mass");
    for (auto& h : d->h) h /= total;
    for (auto& c : d->cumulative) c /= total;
    d->cumulative.back() = 1.0;

    // Trim zero-mass segments at both ends; any zero-mass segment left in
    // between splits the support.
    std::size_t first = 0;
    while (first + 1 < n && d->cumulative[first + 1] == 0.0) ++first;
    std::size_t last = n - 1;
    while (last > 0 && d->cumulative[last - 1] == 1.0) --last;
    d->lo = d->x[first];
    d->hi = d->x[last];
    for (std::size_t i = first; i < last; ++i) {
        if (d->h[i] == 0.0 && d->h[i + 1] == 0.0) d->interval = false;
    }
    data_ = std::move(d);
}

double Tabulated::pdf(double x) const {
    const auto& xs = data_->x;
    const auto& hs = data_->h;
    if (!(x >= xs.front() && x <= xs.back())) return 0.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return hs.back();
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return hs[i] + t * (hs[i + 1] - hs[i]);
}

double Tabulated::cdf(double x) const {
    const auto& xs = data_->x;
    const auto& hs = data_->h;
    if (x <= xs.front()) return 0.0;
    if (x >= xs.back()) return 1.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double dx = x - xs[i];
    const double slope = (hs[i + 1] - hs[i]) / (xs[i + 1] - xs[i]);
    return std::min(1.0, data_->cumulative[i] + hs[i] * dx + 0.5 * slope * dx * dx);
}

double Tabulated::quantile(double p) const {
    if (p <= 0.0) return data_->lo;
    if (p >= 1.0) return data_->hi;
    const auto& xs = data_->x;
    const auto& hs = data_->h;
    const auto& cum = data_->cumulative;
    auto it = std::upper_bound(cum.begin(), cum.end(), p);
    std::size_t i = static_cast<std::size_t>(it - cum.begin());
    i = std::clamp<std::size_t>(i, 1, xs.size() - 1) - 1;
    const double need = p - cum[i];
    const double slope = (hs[i + 1] - hs[i]) / (xs[i + 1] - xs[i]);
    // Stable root of h0 t + slope t^2 / 2 = need.
    const double disc = std::max(0.0, hs[i] * hs[i] + 2.0 * slope * need);
    const double denom = hs[i] + std::sqrt(disc);
    const double t = denom > 0.0 ? 2.0 * need / denom : 0.0;
    return std::clamp(xs[i] + t, xs[i], xs[i + 1]);
}

// ------------------------------------------------------------- DensityModel

DensityModel::DensityModel(Family f) : family_(std::move(f)) {
    std::vector<double> breaks;
    std::visit(overloaded{
                   [&](const Uniform& u) {
                       lo_ = u.lo;
                       hi_ = u.hi;
                       scale_ = u.hi - u.lo;
                       center_ = 0.5 * (u.lo + u.hi);
                       breaks = {u.lo, u.hi};
                   },
                   [&](const Gaussian& g) {
                       lo_ = -kInf;
                       hi_ = kInf;
                       scale_ = g.stddev;
                       center_ = g.mean;
                   },
                   [&](const Laplace& l) {
                       lo_ = -kInf;
                       hi_ = kInf;
                       scale_ = l.scale;
                       center_ = l.loc;
                       breaks = {l.loc};
                   },
                   [&](const Exponential& e) {
                       lo_ = 0.0;
                       hi_ = kInf;
                       scale_ = 1.0 / e.rate;
                       center_ = std::numbers::ln2 / e.rate;
                       breaks = {0.0};
                   },
                   [&](const PowerTail& p) {
                       lo_ = p.cutoff;
                       hi_ = kInf;
                       scale_ = p.cutoff;
                       center_ = p.cutoff * std::pow(2.0, 1.0 / (p.exponent - 1.0));
                       breaks = {p.cutoff};
                   },
                   [&](const Tabulated& t) {
                       lo_ = t.lo();
                       hi_ = t.hi();
                       scale_ = t.hi() - t.lo();
                       center_ = t.quantile(0.5);
                       for (double x : t.xs()) {
                           if (x >= lo_ && x <= hi_) breaks.push_back(x);
                       }
                   },
               },
               family_);
    breaks_ = std::make_shared<const std::vector<double>>(std::move(breaks));
}

DensityModel DensityModel::uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform requires finite lo < hi");
    return DensityModel(Uniform{lo, hi});
}

DensityModel DensityModel::gaussian(double mean, double stddev) {
    require(std::isfinite(mean) && std::isfinite(stddev) && stddev > 0.0,
            "gaussian requires finite mean and stddev > 0");
    return DensityModel(Gaussian{mean, stddev});
}

DensityModel DensityModel::laplace(double loc, double scale) {
    require(std::isfinite(loc) && std::isfinite(scale) && scale > 0.0,
            "laplace requires finite loc and scale > 0");
    return DensityModel(Laplace{loc, scale});
}

DensityModel DensityModel::exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0, "exponential requires rate > 0");
    return DensityModel(Exponential{rate});
}

DensityModel DensityModel::power_tail(double exponent, double cutoff) {
    require(std::isfinite(exponent) && exponent > 1.0, "power tail requires exponent > 1");
    require(std::isfinite(cutoff) && cutoff > 0.0, "power tail requires cutoff > 0");
    return DensityModel(PowerTail{exponent, cutoff});
}

DensityModel DensityModel::tabulated(std::vector<std::pair<double, double>> knots) {
    return DensityModel(Tabulated(std::move(knots)));
}

double DensityModel::pdf(double x) const {
    if (std::isnan(x) || x < lo_ || x > hi_) return 0.0;
    return std::visit(overloaded{
                          [&](const Uniform& u) { return 1.0 / (u.hi - u.lo); },
                          [&](const Gaussian& g) {
                              const double z = (x - g.mean) / g.stddev;
                              return std::exp(-0.5 * z * z) * std::numbers::inv_sqrtpi /
                                     (std::numbers::sqrt2 * g.stddev);
                          },
                          [&](const Laplace& l) {
                              return std::exp(-std::abs(x - l.loc) / l.scale) / (2.0 * l.scale);
                          },
                          [&](const Exponential& e) { return e.rate * std::exp(-e.rate * x); },
                          [&](const PowerTail& p) {
                              return (p.exponent - 1.0) / p.cutoff * std::pow(x / p.cutoff, -p.exponent);
                          },
                          [&](const Tabulated& t) { return t.pdf(x); },
                      },
                      family_);
}

double DensityModel::cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    return std::visit(overloaded{
                          [&](const Uniform& u) { return (x - u.lo) / (u.hi - u.lo); },
                          [&](const Gaussian& g) {
                              return 0.5 * std::erfc(-(x - g.mean) / (g.stddev * std::numbers::sqrt2));
                          },
                          [&](const Laplace& l) {
                              const double z = (x - l.loc) / l.scale;
                              return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
                          },
                          [&](const Exponential& e) { return -std::expm1(-e.rate * x); },
                          [&](const PowerTail& p) {
                              return -std::expm1((1.0 - p.exponent) * std::log(x / p.cutoff));
                          },
                          [&](const Tabulated& t) { return t.cdf(x); },
                      },
                      family_);
}

double DensityModel::sf(double x) const {
    if (x <= lo_) return 1.0;
    if (x >= hi_) return 0.0;
    return std::visit(overloaded{
                          [&](const Uniform& u) { return (u.hi - x) / (u.hi - u.lo); },
                          [&](const Gaussian& g) {
                              return 0.5 * std::erfc((x - g.mean) / (g.stddev * std::numbers::sqrt2));
                          },
                          [&](const Laplace& l) {
                              const double z = (x - l.loc) / l.scale;
                              return z > 0.0 ? 0.5 * std::exp(-z) : 1.0 - 0.5 * std::exp(z);
                          },
                          [&](const Exponential& e) { return std::exp(-e.rate * x); },
                          [&](const PowerTail& p) { return std::pow(x / p.cutoff, 1.0 - p.exponent); },
                          [&](const Tabulated& t) { return 1.0 - t.cdf(x); },
                      },
                      family_);
}

double DensityModel::mass(double a, double b) const {
    if (std::isnan(a) || std::isnan(b) || a > b) {
        throw Error(ErrorCode::InvalidInterval, "mass: interval [" + fmt_param(a) + ", " + fmt_param(b) +
                                                    "] has a > b");
    }
    if (a == b) return 0.0;
    const double m = (a >= center_) ? sf(a) - sf(b) : cdf(b) - cdf(a);
    return std::clamp(m, 0.0, 1.0);
}

double DensityModel::quantile(double p) const {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        throw Error(ErrorCode::InvalidParameter, "quantile probability must lie in [0, 1]");
    }
    if (p == 0.0) return lo_;
    if (p == 1.0) return hi_;
    return std::visit(overloaded{
                          [&](const Uniform& u) { return u.lo + p * (u.hi - u.lo); },
                          [&](const Gaussian& g) {
                              return g.mean - g.stddev * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
                          },
                          [&](const Laplace& l) {
                              return p < 0.5 ? l.loc + l.scale * std::log(2.0 * p)
                                             : l.loc - l.scale * std::log(2.0 * (1.0 - p));
                          },
                          [&](const Exponential& e) { return -std::log1p(-p) / e.rate; },
                          [&](const PowerTail& t) { return t.cutoff * std::pow(1.0 - p, -1.0 / (t.exponent - 1.0)); },
                          [&](const Tabulated& t) { return t.quantile(p); },
                      },
                      family_);
}

bool DensityModel::interval_support() const noexcept {
    if (const auto* t = std::get_if<Tabulated>(&family_)) return t->interval_support();
    return true;
}

bool DensityModel::zador_finite(double r) const {
    if (const auto* p = std::get_if<PowerTail>(&family_)) return p->exponent > 1.0 + r;
    return true;
}

double DensityModel::tail_decay() const noexcept {
    if (const auto* p = std::get_if<PowerTail>(&family_)) return p->exponent;
    return kInf;
}

std::string DensityModel::describe() const {
    if (!label_.empty()) return label_;
    return std::visit(overloaded{
                          [](const Uniform& u) { return "uniform:" + fmt_param(u.lo) + "," + fmt_param(u.hi); },
                          [](const Gaussian& g) { return "gauss:" + fmt_param(g.mean) + "," + fmt_param(g.stddev); },
                          [](const Laplace& l) { return "laplace:" + fmt_param(l.loc) + "," + fmt_param(l.scale); },
                          [](const Exponential& e) { return "exp:" + fmt_param(e.rate); },
                          [](const PowerTail& p) {
                              return "powertail:" + fmt_param(p.exponent) + "," + fmt_param(p.cutoff);
                          },
                          [](const Tabulated& t) { return "tabulated:<" + std::to_string(t.xs().size()) + " knots>"; },
                      },
                      family_);
}

// -------------------------------------------------------------- diagnostics

UnimodalityReport is_weakly_unimodal(const DensityModel& model, int grid_size) {
    const int g = std::max(grid_size, 16);
    const double lo = std::isfinite(model.support_lo()) ? model.support_lo() : model.quantile(1e-9);
    const double hi = std::isfinite(model.support_hi()) ? model.support_hi() : model.quantile(1.0 - 1e-9);

    std::vector<double> values(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        const double x = (i == g - 1) ? hi : lo + (hi - lo) * static_cast<double>(i) / (g - 1);
        values[static_cast<std::size_t>(i)] = model.pdf(x);
    }
    std::vector<double> levels;
    for (double v : values) {
        if (v > 0.0) levels.push_back(v);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    UnimodalityReport report;
    if (levels.empty()) {
        report.pass = false;
        return report;
    }
    for (double level : levels) {
        std::size_t first = values.size(), last = 0, count = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] >= level) {
                first = std::min(first, i);
                last = i;
                ++count;
            }
        }
        if (count != last - first + 1) {
            report.split_level = level;
            break;
        }
    }
    // Only the smallest positive level decides: below it the grid set is fixed.
    report.pass = !(report.split_level && *report.split_level == levels.front());
    return report;
}

DensityModel load_tabulated_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open tabulated density file '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,h") {
        throw Error(ErrorCode::ParseError, "tabulated CSV must start with header 'x,h'");
    }
    std::vector<std::pair<double, double>> knots;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cols = split(line, ',');
        const std::string ctx = path.filename().string() + " row " + std::to_string(row);
        if (cols.size() != 2) throw Error(ErrorCode::ParseError, "expected two columns in " + ctx);
        const double x = parse_real(cols[0], ctx);
        const double h = parse_real(cols[1], ctx);
        if (std::isnan(x) || std::isnan(h)) throw Error(ErrorCode::ParseError, "NaN value in " + ctx);
        if (h < 0.0) throw Error(ErrorCode::ParseError, "negative density in " + ctx);
        if (!knots.empty() && !(x > knots.back().first)) {
            throw Error(ErrorCode::ParseError, "x not strictly increasing in " + ctx);
        }
        knots.emplace_back(x, h);
    }
    if (knots.size() < 4) throw Error(ErrorCode::ParseError, "tabulated CSV needs at least 4 rows");
    try {
        DensityModel model(Tabulated(std::move(knots)));
        model.label_ = "tabulated:" + path.string();
        return model;
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

DensityModel parse_model_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw Error(ErrorCode::ParseError, "model spec '" + spec + "' must look like family:params");
    }
    std::string family = trim(spec.substr(0, colon));
    std::transform(family.begin(), family.end(), family.begin(), [](unsigned char c) { return std::tolower(c); });
    const std::string rest = spec.substr(colon + 1);

    if (family == "tabulated") return load_tabulated_csv(trim(rest));

    std::vector<double> p;
    for (const auto& part : split(rest, ',')) p.push_back(parse_real(part, "model spec '" + spec + "'"));
    auto need = [&](std::size_t k) {
        if (p.size() != k) {
            throw Error(ErrorCode::ParseError,
                        "model '" + family + "' takes " + std::to_string(k) + " parameter(s)");
        }
    };
    if (family == "uniform") {
        need(2);
        return DensityModel::uniform(p[0], p[1]);
    }
    if (family == "gauss" || family == "gaussian" || family == "normal") {
        need(2);
        return DensityModel::gaussian(p[0], p[1]);
    }
    if (family == "laplace") {
        need(2);
        return DensityModel::laplace(p[0], p[1]);
    }
    if (family == "exp" || family == "exponential") {
        need(1);
        return DensityModel::exponential(p[0]);
    }
    if (family == "powertail" || family == "pareto") {
        need(2);
        return DensityModel::power_tail(p[0], p[1]);
    }
    throw Error(ErrorCode::ParseError, "unknown distribution family '" + family + "'");
}

} // namespace gq
