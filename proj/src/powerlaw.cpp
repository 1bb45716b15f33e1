#include "weblog/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace weblog {

double LogBinnedHistogram::center(std::size_t i) const {
    return std::sqrt(edges[i] * edges[i + 1]);
}

LogBinnedHistogram log_bin_counts(std::span<const std::pair<double, double>> value_count,
                                  double b, double x_min) {
    if (b <= 1.0) throw DataError("log_bin: growth factor must exceed 1");
    if (x_min <= 0.0) throw DataError("log_bin: x_min must be positive");

    LogBinnedHistogram h;
    double x_max = 0;
    for (auto [v, c] : value_count)
        if (v >= x_min) x_max = std::max(x_max, v);
    if (x_max == 0) {
        for (auto [v, c] : value_count) h.rejected += std::size_t(c);
        return h;
    }

    const double logb = std::log(b);
    auto bin_of = [&](double v) { return std::size_t(std::log(v / x_min) / logb); };
    std::size_t nbins = bin_of(x_max) + 1;
    // Guard against x_max landing exactly on an edge due to rounding.
    while (x_min * std::pow(b, double(nbins)) <= x_max) ++nbins;

    h.edges.resize(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i) h.edges[i] = x_min * std::pow(b, double(i));
    h.counts.assign(nbins, 0.0);

    for (auto [v, c] : value_count) {
        if (v < x_min) {
            h.rejected += std::size_t(c);
            continue;
        }
        std::size_t i = bin_of(v);
        if (i >= nbins) i = nbins - 1;
        // bins are [e_i, e_{i+1}); fix rounding at edges
        while (i > 0 && v < h.edges[i]) --i;
        while (i + 1 < nbins && v >= h.edges[i + 1]) ++i;
        h.counts[i] += c;
        h.total += std::size_t(c);
    }

    h.density.resize(nbins);
    for (std::size_t i = 0; i < nbins; ++i) {
        double width = h.edges[i + 1] - h.edges[i];
        h.density[i] = h.total ? h.counts[i] / (width * double(h.total)) : 0.0;
    }
    return h;
}

LogBinnedHistogram log_bin(std::span<const double> values, double b, double x_min) {
    std::vector<std::pair<double, double>> vc;
    vc.reserve(values.size());
    for (double v : values) vc.emplace_back(v, 1.0);
    return log_bin_counts(vc, b, x_min);
}

namespace {

// Ordinary least squares y = slope*x + intercept with slope stderr.
struct Ols {
    double slope, intercept, stderr_slope;
    std::size_t n;
};

Ols ols(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (slope * x[i] + intercept);
        ss_res += r * r;
    }
    double se = n > 2 ? std::sqrt(ss_res / (double(n) - 2.0) / sxx) : 0.0;
    return {slope, intercept, se, n};
}

}  // namespace

PowerLawFit fit_slope(const LogBinnedHistogram& hist, double x_lo, double x_hi) {
    if (x_lo >= x_hi) throw DataError("fit_slope: empty range");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i + 1 < hist.edges.size(); ++i) {
        double c = hist.center(i);
        if (c < x_lo || c > x_hi || hist.counts[i] == 0) continue;
        lx.push_back(std::log10(c));
        ly.push_back(std::log10(hist.density[i]));
    }
    if (lx.size() < 4) throw InsufficientData("fit_slope: fewer than 4 nonzero bins in range");
    Ols f = ols(lx, ly);
    return {f.slope, f.intercept, f.stderr_slope, x_lo, x_hi, f.n};
}

PowerLawFit fit_slope(const LogBinnedHistogram& hist) {
    if (hist.edges.size() < 2) throw InsufficientData("fit_slope: empty histogram");
    double b = hist.edges[1] / hist.edges[0];
    double x_lo = hist.edges.front() * b * b;
    double x_hi = hist.edges.back() / (b * b);
    return fit_slope(hist, x_lo, x_hi);
}

PowerLawFit fit_mle(std::span<const double> values, double x_lo, double x_hi) {
    double sum_log = 0;
    std::size_t n = 0;
    for (double v : values) {
        if (v < x_lo || v > x_hi) continue;
        sum_log += std::log(v / x_lo);
        ++n;
    }
    if (n < 4) throw InsufficientData("fit_mle: fewer than 4 samples in range");
    // Continuous Hill estimator: gamma = 1 + n / sum log(x/x_min).
    double gamma = 1.0 + double(n) / sum_log;
    PowerLawFit f;
    f.slope = -gamma;
    f.stderr_slope = (gamma - 1.0) / std::sqrt(double(n));
    f.x_lo = x_lo;
    f.x_hi = x_hi;
    f.n_bins = n;
    return f;
}

CumulativeDistribution cumulative(std::span<const double> values) {
    if (values.empty()) throw EmptyDataset();
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    CumulativeDistribution cdf;
    const double n = double(sorted.size());
    std::size_t i = 0;
    while (i < sorted.size()) {
        cdf.x.push_back(sorted[i]);
        cdf.c.push_back(double(sorted.size() - i) / n);
        double v = sorted[i];
        while (i < sorted.size() && sorted[i] == v) ++i;
    }
    return cdf;
}

PowerLawFit fit_cumulative_slope(const CumulativeDistribution& cdf, double x_lo, double x_hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < cdf.x.size(); ++i) {
        if (cdf.x[i] < x_lo || cdf.x[i] > x_hi || cdf.x[i] <= 0) continue;
        lx.push_back(std::log10(cdf.x[i]));
        ly.push_back(std::log10(cdf.c[i]));
    }
    if (lx.size() < 4) throw InsufficientData("fit_cumulative_slope: fewer than 4 points in range");
    Ols f = ols(lx, ly);
    return {f.slope, f.intercept, f.stderr_slope, x_lo, x_hi, f.n};
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) throw InsufficientData("fit_linear: need >= 3 points");
    Ols f = ols(x, y);
    LinearFit out;
    out.a = f.slope;
    out.b = f.intercept;
    out.stderr_a = f.stderr_slope;
    out.n = x.size();

    const std::size_t n = x.size();
    double mx = 0;
    for (double v : x) mx += v;
    mx /= double(n);
    double sxx = 0;
    for (double v : x) sxx += (v - mx) * (v - mx);
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
    }
    double sigma2 = n > 2 ? ss_res / (double(n) - 2.0) : 0.0;
    double sum_x2 = 0;
    for (double v : x) sum_x2 += v * v;
    out.stderr_b = std::sqrt(sigma2 * sum_x2 / (double(n) * sxx));

    // Quadratic refit y = c0 + c1 x + c2 x^2 via normal equations; the
    // curvature statistic is |c2| / se(c2).
    if (n >= 4) {
        double s0 = double(n), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
        double t0 = 0, t1 = 0, t2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double xi = x[i], x2i = xi * xi;
            s1 += xi;
            s2 += x2i;
            s3 += x2i * xi;
            s4 += x2i * x2i;
            t0 += y[i];
            t1 += y[i] * xi;
            t2 += y[i] * x2i;
        }
        // Solve the 3x3 system by Cramer's rule.
        auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                       double a31, double a32, double a33) {
            return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
                   a13 * (a21 * a32 - a22 * a31);
        };
        double d = det3(s0, s1, s2, s1, s2, s3, s2, s3, s4);
        if (std::abs(d) > 0) {
            double c0 = det3(t0, s1, s2, t1, s2, s3, t2, s3, s4) / d;
            double c1 = det3(s0, t0, s2, s1, t1, s3, s2, t2, s4) / d;
            double c2 = det3(s0, s1, t0, s1, s2, t1, s2, s3, t2) / d;
            double ssr = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double r = y[i] - (c0 + c1 * x[i] + c2 * x[i] * x[i]);
                ssr += r * r;
            }
            double s2hat = n > 3 ? ssr / (double(n) - 3.0) : 0.0;
            // var(c2) = s2hat * (inverse matrix)[2][2]; cofactor / det
            double inv22 = (s0 * s2 - s1 * s1) / d;
            double var_c2 = s2hat * inv22;
            if (var_c2 > 0) out.curvature_t = std::abs(c2) / std::sqrt(var_c2);
        }
    }
    return out;
}

}  // namespace weblog
