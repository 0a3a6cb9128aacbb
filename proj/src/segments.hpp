#pragma once

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "gq/distribution.hpp"

namespace gq::detail {

using Segment = std::pair<double, double>;

// [a, b] clipped to the support and cut at breakpoints and at `cut` (if inside).
inline std::vector<Segment> segments(const DensityModel& model, double a, double b,
                                     double cut = std::numeric_limits<double>::quiet_NaN()) {
    const double lo = std::max(a, model.support_lo());
    const double hi = std::min(b, model.support_hi());
    std::vector<Segment> out;
    if (!(hi > lo)) return out;

    std::vector<double> points{lo};
    for (double x : model.breakpoints()) {
        if (x > lo && x < hi) points.push_back(x);
    }
    if (cut > lo && cut < hi) points.push_back(cut);
    std::sort(points.begin(), points.end());
    points.push_back(hi);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1] > points[i]) out.emplace_back(points[i], points[i + 1]);
    }
    return out;
}

} // namespace gq::detail
