#pragma once

// Growth analytics: log-log exponent fitting, exponential detection, and the
// Bass-Guivarc'h exponent of a nilpotent rank profile.

#include <cmath>
#include <optional>
#include <vector>

#include "growthlab/common.hpp"
#include "growthlab/explorer.hpp"

namespace growthlab {

enum class GrowthClass { Polynomial, Exponential, Inconclusive };

inline const char* growth_class_name(GrowthClass c) {
    switch (c) {
        case GrowthClass::Polynomial: return "polynomial";
        case GrowthClass::Exponential: return "exponential";
        default: return "inconclusive";
    }
}

struct ExpDetect {
    GrowthClass cls = GrowthClass::Inconclusive;
    double rate = 1.0;  // geometric mean of the tail ratios
};

// Exponential iff the tail ratios s(n)/s(n-1) stay >= 1+eps on the last half
// of the table AND do not decay the way a polynomial forces them to
// (for s ~ n^d the ratio-minus-one falls off like 1/n; an exponential keeps
// it flat). The decay test compares geometric means of the leading and
// trailing thirds of the tail against the sqrt of the polynomial prediction.
inline ExpDetect detect_exponential(const GrowthTable& t, double eps = 0.02) {
    int R = t.max_radius();
    if (R + 1 < 8) throw SpecError("detect_exponential needs a table of length >= 8", t.spec);
    int lo = std::max(1, (R + 1) / 2);
    std::vector<double> ratio;
    std::vector<double> at;
    for (int n = lo; n <= R; ++n) {
        if (t.sizes[n - 1] <= 0) throw SpecError("table sizes must be positive", t.spec);
        ratio.push_back(static_cast<double>(t.sizes[n]) / static_cast<double>(t.sizes[n - 1]));
        at.push_back(static_cast<double>(n));
    }
    double log_rate = 0;
    for (double r : ratio) log_rate += std::log(r);
    ExpDetect out;
    out.rate = std::exp(log_rate / static_cast<double>(ratio.size()));

    bool grows = true;
    for (double r : ratio)
        if (r < 1.0 + eps) grows = false;

    size_t third = std::max<size_t>(2, ratio.size() / 3);
    third = std::min(third, ratio.size());
    auto geomean = [](const std::vector<double>& v, size_t from, size_t count) {
        double s = 0;
        for (size_t i = from; i < from + count; ++i) s += std::log(v[i]);
        return std::exp(s / static_cast<double>(count));
    };
    auto mean = [](const std::vector<double>& v, size_t from, size_t count) {
        double s = 0;
        for (size_t i = from; i < from + count; ++i) s += v[i];
        return s / static_cast<double>(count);
    };
    double ra = geomean(ratio, 0, third), na = mean(at, 0, third);
    double rb = geomean(ratio, ratio.size() - third, third), nb = mean(at, ratio.size() - third, third);
    bool steady = ra > 1.0 && rb > 1.0 && (rb - 1.0) >= (ra - 1.0) * std::sqrt(na / nb);

    out.cls = (grows && steady) ? GrowthClass::Exponential : GrowthClass::Polynomial;
    return out;
}

struct ExponentFit {
    double estimate = 0;
    int n1 = 0, n2 = 0;
    double residual = 0;  // RMS of log-space residuals
    GrowthClass cls = GrowthClass::Inconclusive;
    double rate = 1.0;  // growth ratio when exponential
};

// Least-squares slope of log size against log n over [n1, n2], sampled on a
// log-spaced subgrid of at most 32 radii. Default window is [R/4, R].
inline ExponentFit fit_exponent(const GrowthTable& t, std::optional<std::pair<int, int>> window = {}) {
    int R = t.max_radius();
    int n1 = window ? window->first : std::max(1, R / 4);
    int n2 = window ? window->second : R;
    if (n1 < 1 || n2 > R || n1 >= n2)
        throw SpecError("fit window outside table range",
                        "[" + std::to_string(n1) + "," + std::to_string(n2) + "]");

    std::vector<int> grid;
    const int kMaxPts = 32;
    double lr = std::log(static_cast<double>(n2) / n1);
    for (int i = 0; i < kMaxPts; ++i) {
        int n = static_cast<int>(std::lround(n1 * std::exp(lr * i / (kMaxPts - 1))));
        n = std::min(std::max(n, n1), n2);
        if (grid.empty() || grid.back() != n) grid.push_back(n);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n : grid) {
        if (t.sizes[n] <= 0) throw SpecError("table sizes must be positive", t.spec);
        double x = std::log(static_cast<double>(n));
        double y = std::log(static_cast<double>(t.sizes[n]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double m = static_cast<double>(grid.size());
    double denom = m * sxx - sx * sx;
    ExponentFit fit;
    fit.n1 = n1;
    fit.n2 = n2;
    fit.estimate = (m * sxy - sx * sy) / denom;
    double intercept = (sy - fit.estimate * sx) / m;
    double ss = 0;
    for (int n : grid) {
        double x = std::log(static_cast<double>(n));
        double y = std::log(static_cast<double>(t.sizes[n]));
        double e = y - (intercept + fit.estimate * x);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / m);

    if (R + 1 >= 8) {
        ExpDetect d = detect_exponential(t);
        fit.cls = d.cls;
        fit.rate = d.rate;
    }
    return fit;
}

// Bass-Guivarc'h exponent: alpha = sum_i i * r_i for the rank profile
// (r_1, r_2, ...), r_i = dim_Q(gamma_i/gamma_{i+1} (x) Q).
inline int64_t bass_guivarch(const std::vector<int64_t>& ranks) {
    int64_t alpha = 0;
    for (size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] < 0) throw SpecError("rank profile entries must be nonnegative");
        alpha += static_cast<int64_t>(i + 1) * ranks[i];
    }
    return alpha;
}

}  // namespace growthlab
