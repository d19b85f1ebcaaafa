#pragma once
// Small numeric helpers shared by the harness, the metrics layer and tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace wcb {

// Compensated accumulator. Money conservation is checked to 1e-6 absolute
// over ~1e5 payments of ~1e2 magnitude, which plain doubles only meet
// marginally; Kahan keeps the bookkeeping error orders of magnitude below
// the tolerance.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    KahanSum k;
    for (double x : xs) k.add(x);
    return k.value() / double(xs.size());
}

// Linear-interpolation quantile (the common "R-7" rule) on sorted data.
// For an even-sized pool the median is the average of the two central values.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    const double h = p * double(sorted.size() - 1);
    const std::size_t lo = std::size_t(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - double(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double median_sorted(std::span<const double> sorted) {
    return quantile_sorted(sorted, 0.5);
}

inline double iqr_sorted(std::span<const double> sorted) {
    return quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
}

struct SummaryStats {
    double mean = 0.0;
    double median = 0.0;
    double iqr = 0.0;
    std::size_t count = 0;
};

inline SummaryStats summarize(std::vector<double> xs) {
    SummaryStats s;
    s.count = xs.size();
    if (xs.empty()) return s;
    s.mean = mean(xs);
    std::sort(xs.begin(), xs.end());
    s.median = median_sorted(xs);
    s.iqr = iqr_sorted(xs);
    return s;
}

inline bool approx_eq(double a, double b, double abs_tol = 1e-9) {
    return std::fabs(a - b) <= abs_tol;
}

} // namespace wcb
