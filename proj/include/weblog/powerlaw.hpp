#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "weblog/core.hpp"

namespace weblog {

/// Logarithmically binned histogram with edges x_min * b^i.
struct LogBinnedHistogram {
    std::vector<double> edges;    // size bins+1, strictly increasing
    std::vector<double> counts;   // per bin
    std::vector<double> density;  // count / (width * total)
    std::size_t total = 0;
    std::size_t rejected = 0;  // values < x_min (non-positive included)

    double center(std::size_t i) const;  // geometric mean of edges
};

struct PowerLawFit {
    double slope = 0;
    double intercept = 0;  // in log10 space
    double stderr_slope = 0;
    double x_lo = 0, x_hi = 0;
    std::size_t n_bins = 0;
};

/// Complementary cumulative distribution: C(x) = fraction of samples >= x.
struct CumulativeDistribution {
    std::vector<double> x;  // sorted distinct values
    std::vector<double> c;  // non-increasing, c.front() == 1
};

LogBinnedHistogram log_bin(std::span<const double> values, double b = 1.3, double x_min = 1.0);

/// Same binning over (value, multiplicity) pairs; avoids materializing huge
/// sample vectors.
LogBinnedHistogram log_bin_counts(std::span<const std::pair<double, double>> value_count,
                                  double b = 1.3, double x_min = 1.0);

/// Unweighted least squares on (log center, log density) over [x_lo, x_hi];
/// empty bins skipped. Requires >= 4 nonzero bins in range.
PowerLawFit fit_slope(const LogBinnedHistogram& hist, double x_lo, double x_hi);

/// Default trimmed range [x_min*b^2, x_max/b^2].
PowerLawFit fit_slope(const LogBinnedHistogram& hist);

/// Hill-type maximum-likelihood exponent over the same range, reported as a
/// cross-check alongside the least-squares value. Returns the density
/// exponent (negative), continuous-law estimator.
PowerLawFit fit_mle(std::span<const double> values, double x_lo, double x_hi);

CumulativeDistribution cumulative(std::span<const double> values);

/// Least squares on (log x, log C) over [x_lo, x_hi]; slope ~ 1 - gamma.
PowerLawFit fit_cumulative_slope(const CumulativeDistribution& cdf, double x_lo, double x_hi);

/// Straight-line fit y = A*x + B with standard errors and a curvature
/// statistic: the t-value of the quadratic coefficient when a parabola is
/// fit to the same points. Large values flag departure from linearity.
struct LinearFit {
    double a = 0, b = 0;
    double stderr_a = 0, stderr_b = 0;
    double curvature_t = 0;
    std::size_t n = 0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

}  // namespace weblog
