#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "weblog/powerlaw.hpp"
#include "weblog/synthgen.hpp"

using namespace weblog;

namespace {

// Histogram whose densities follow an exact power law; used to pin the fit.
LogBinnedHistogram analytic_hist(double exponent, double b, std::size_t bins) {
    LogBinnedHistogram h;
    double edge = 1.0;
    for (std::size_t i = 0; i <= bins; ++i) {
        h.edges.push_back(edge);
        edge *= b;
    }
    for (std::size_t i = 0; i < bins; ++i) {
        h.density.push_back(std::pow(h.center(i), exponent));
        h.counts.push_back(1);
        h.total += 1;
    }
    return h;
}

}  // namespace

TEST_CASE("log_bin basic shape") {
    std::vector<double> same(100, 1.0);
    auto h = log_bin(same, 1.3, 1.0);
    std::size_t nonzero = 0;
    double count_sum = 0;
    for (double c : h.counts) {
        if (c > 0) ++nonzero;
        count_sum += c;
    }
    CHECK(nonzero == 1);
    CHECK(count_sum == 100);
    CHECK(h.total == 100);
    CHECK(h.rejected == 0);
}

TEST_CASE("log_bin rejects sub-threshold values and conserves the rest") {
    std::vector<double> v{0.0, -3.0, 0.5, 1.0, 2.0, 10.0, 500.0};
    auto h = log_bin(v, 1.3, 1.0);
    CHECK(h.rejected == 3);
    CHECK(h.total == 4);
    double integral = 0;
    for (std::size_t i = 0; i < h.density.size(); ++i)
        integral += h.density[i] * (h.edges[i + 1] - h.edges[i]);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("log_bin_counts matches log_bin on expanded samples") {
    std::vector<std::pair<double, double>> wc{{1.0, 3}, {2.5, 7}, {40.0, 2}};
    std::vector<double> expanded;
    for (auto [v, c] : wc)
        for (int i = 0; i < int(c); ++i) expanded.push_back(v);
    auto a = log_bin_counts(wc, 1.3, 1.0);
    auto b = log_bin(expanded, 1.3, 1.0);
    CHECK(a.edges == b.edges);
    CHECK(a.counts == b.counts);
    CHECK(a.total == b.total);
}

TEST_CASE("fit_slope recovers exact exponents to machine precision") {
    auto h1 = analytic_hist(-1.0, 1.3, 40);
    auto f1 = fit_slope(h1, h1.edges.front(), h1.edges.back());
    CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(f1.stderr_slope < 1e-9);

    auto h2 = analytic_hist(-1.25, 1.3, 40);
    auto f2 = fit_slope(h2, h2.edges.front(), h2.edges.back());
    CHECK(f2.slope == doctest::Approx(-1.25).epsilon(1e-9));
}

TEST_CASE("fit_slope is invariant under density scaling") {
    auto h = analytic_hist(-1.7, 1.3, 30);
    auto base = fit_slope(h, h.edges.front(), h.edges.back());
    for (double& d : h.density) d *= 37.5;
    auto scaled = fit_slope(h, h.edges.front(), h.edges.back());
    CHECK(scaled.slope == doctest::Approx(base.slope).epsilon(1e-12));
    CHECK(scaled.intercept != doctest::Approx(base.intercept));
}

TEST_CASE("fit_slope needs four usable bins") {
    auto h = analytic_hist(-1.0, 1.3, 40);
    CHECK_THROWS_AS(fit_slope(h, 1.0, 1.9), InsufficientData);
}

TEST_CASE("sampled gamma = 2.2 law: density and cumulative slopes") {
    std::mt19937_64 eng(11);
    auto unit = [&] { return double((eng() >> 11)) * 0x1.0p-53; };
    std::vector<double> v(1000000);
    for (double& x : v) x = synthgen::power_law_sample(unit(), 2.2, 1.0, 1e5);

    auto h = log_bin(v, 1.3, 1.0);
    auto f = fit_slope(h);
    CHECK(f.slope == doctest::Approx(-2.2).epsilon(0.05));

    auto mle = fit_mle(v, 1.0, 1e5);
    CHECK(mle.slope == doctest::Approx(-2.2).epsilon(0.03));

    auto cdf = cumulative(v);
    auto cf = fit_cumulative_slope(cdf, 2.0, 1e4);
    CHECK(cf.slope == doctest::Approx(-1.2).epsilon(0.09));
}

TEST_CASE("cumulative pinned examples") {
    std::vector<double> v{1, 2, 2, 5};
    auto c = cumulative(v);
    REQUIRE(c.x == std::vector<double>{1, 2, 5});
    CHECK(c.c[0] == doctest::Approx(1.0));
    CHECK(c.c[1] == doctest::Approx(0.75));
    CHECK(c.c[2] == doctest::Approx(0.25));

    std::vector<double> same(9, 4.0);
    auto cs = cumulative(same);
    REQUIRE(cs.x.size() == 1);
    CHECK(cs.c[0] == doctest::Approx(1.0));
}

TEST_CASE("cumulative shape invariance under scaling") {
    std::vector<double> v{1, 3, 3, 8, 20};
    auto a = cumulative(v);
    for (double& x : v) x *= 2.5;
    auto b = cumulative(v);
    REQUIRE(a.x.size() == b.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        CHECK(b.x[i] == doctest::Approx(a.x[i] * 2.5));
        CHECK(b.c[i] == doctest::Approx(a.c[i]));
    }
}

TEST_CASE("fit_linear: exact line and curvature flagging") {
    std::vector<double> x, y_line, y_quad;
    for (int i = 1; i <= 40; ++i) {
        double xv = i;
        x.push_back(xv);
        y_line.push_back(0.1 * xv + 0.5);
        y_quad.push_back(10.0 * std::sqrt(xv));
    }
    auto lf = fit_linear(x, y_line);
    CHECK(lf.a == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(lf.b == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(lf.curvature_t < 2.0);

    auto qf = fit_linear(x, y_quad);
    CHECK(qf.curvature_t > 5.0);
}
