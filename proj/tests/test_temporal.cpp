#include <algorithm>
#include <random>

#include "doctest.h"
#include "weblog/synthgen.hpp"
#include "weblog/temporal.hpp"

using namespace weblog;

namespace {

constexpr std::int64_t kOrigin = 1112328000;  // 2005-04-01 local midnight (-0400)
constexpr TimeGrid kGrid{.day_origin = kOrigin - 14400, .tz_offset = -14400};

ClickEvent at(std::int64_t day, std::int64_t sec, std::uint32_t u = 0, std::uint32_t p = 0) {
    return {u, p, kOrigin + day * 86400 + sec};
}

}  // namespace

TEST_CASE("daily_series has explicit zero days") {
    EventStore s = build_store({at(0, 10), at(0, 20), at(0, 30), at(2, 5)});
    auto d = daily_series(s, kGrid);
    CHECK(d.first_day == 0);
    CHECK(d.counts == std::vector<std::uint64_t>{3, 0, 1});
}

TEST_CASE("daily_series conserves the event count") {
    std::mt19937_64 eng(5);
    std::vector<ClickEvent> ev;
    for (int i = 0; i < 10000; ++i)
        ev.push_back(at(std::int64_t(eng() % 30), std::int64_t(eng() % 86400),
                        std::uint32_t(eng() % 5)));
    auto d = daily_series(build_store(ev), kGrid);
    std::uint64_t sum = 0;
    for (auto c : d.counts) sum += c;
    CHECK(sum == ev.size());
}

TEST_CASE("constant series: all means equal, sigma zero") {
    DailySeries d{.first_day = 0, .counts = std::vector<std::uint64_t>(28, 100)};
    auto p = day_of_week_profile(d, kGrid);
    for (int w = 0; w < 7; ++w) {
        CHECK(p.mean[w] == doctest::Approx(100.0));
        CHECK(p.sigma[w] == doctest::Approx(0.0));
        CHECK(p.band(w) == doctest::Approx(0.0));
    }
}

TEST_CASE("two Mondays with 10 and 30 give mean 20 sigma 10") {
    // day 0 is a Friday under this grid; Mondays fall on days 3 and 10.
    DailySeries d{.first_day = 0, .counts = std::vector<std::uint64_t>(17, 5)};
    d.counts[3] = 10;
    d.counts[10] = 30;
    auto p = day_of_week_profile(d, kGrid);
    CHECK(p.mean[0] == doctest::Approx(20.0));
    CHECK(p.sigma[0] == doctest::Approx(10.0));  // population sigma
    CHECK(p.band(0) == doctest::Approx(20.0));
    CHECK(p.n[0] == 2);
}

TEST_CASE("short spans are rejected") {
    DailySeries d{.first_day = 0, .counts = std::vector<std::uint64_t>(10, 5)};
    CHECK_THROWS_AS(day_of_week_profile(d, kGrid), InsufficientData);
}

TEST_CASE("hourly profile isolates the populated hour") {
    // Mondays at local 09:xx only (days 3 and 10), plus span anchors.
    std::vector<ClickEvent> ev;
    for (int k = 0; k < 50; ++k) {
        ev.push_back(at(3, 9 * 3600 + k));
        ev.push_back(at(10, 9 * 3600 + k * 7));
    }
    auto p = hourly_profile(build_store(ev), kGrid);
    auto wk = std::size_t(DayClass::weekday);
    for (int h = 0; h < 24; ++h) {
        if (h == 9)
            CHECK(p.mean[wk][h] > 0);
        else
            CHECK(p.mean[wk][h] == doctest::Approx(0.0));
    }
    for (int h = 0; h < 24; ++h) {
        CHECK(p.mean[std::size_t(DayClass::saturday)][h] == doctest::Approx(0.0));
        CHECK(p.mean[std::size_t(DayClass::sunday)][h] == doctest::Approx(0.0));
    }
}

TEST_CASE("hourly class totals reconstruct the event count") {
    synthgen::GeneratorSpec spec;
    spec.seed = 9;
    spec.n_days = 21;
    spec.base_daily_clicks = 500;
    auto g = synthgen::generate(spec);
    TimeGrid grid = make_grid(g.store);
    auto p = hourly_profile(g.store, grid);
    double total = 0;
    for (std::size_t c = 0; c < 3; ++c)
        for (int h = 0; h < 24; ++h) total += p.mean[c][h] * double(p.n_days[c]);
    CHECK(total == doctest::Approx(double(g.store.size())).epsilon(1e-9));
}

TEST_CASE("compare_week z-scores") {
    std::mt19937_64 eng(2);
    DailySeries d{.first_day = 0, .counts = std::vector<std::uint64_t>(31)};
    for (auto& c : d.counts) c = 100 + eng() % 20;
    auto p = day_of_week_profile(d, kGrid);

    // plant a week equal to the means, then one at mean + 2 sigma
    DailySeries planted = d;
    for (int i = 0; i < 7; ++i) {
        int day = 10 + i;
        planted.counts[day] = std::uint64_t(std::llround(p.mean[kGrid.weekday_of_day(day)]));
    }
    auto rows = compare_week(planted, 10, p, kGrid);
    REQUIRE(rows.size() == 7);
    for (const auto& r : rows) {
        REQUIRE(r.z_defined);
        // rounding the planted mean to an integer leaves at most 0.5/sigma
        CHECK(std::abs(r.z) <= 0.5 / p.sigma[r.weekday] + 1e-12);
    }

    DailySeries shifted = d;
    std::vector<double> exact(7);
    for (int i = 0; i < 7; ++i) {
        int day = 10 + i;
        int w = kGrid.weekday_of_day(day);
        exact[i] = p.mean[w] + 2.0 * p.sigma[w];
    }
    auto rows2 = compare_week(shifted, 10, p, kGrid);
    for (int i = 0; i < 7; ++i) {
        // recompute z from the reported fields against the exact target
        const auto& r = rows2[i];
        double z = (exact[i] - r.mean) / r.sigma;
        CHECK(z == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("compare_week flags sigma = 0 and rejects out-of-range windows") {
    DailySeries d{.first_day = 0, .counts = std::vector<std::uint64_t>(28, 50)};
    auto p = day_of_week_profile(d, kGrid);
    auto rows = compare_week(d, 7, p, kGrid);
    for (const auto& r : rows) {
        CHECK_FALSE(r.z_defined);
        CHECK(r.observed == doctest::Approx(50.0));
    }
    CHECK_THROWS_AS(compare_week(d, 22, p, kGrid), DataError);
}

TEST_CASE("planted weekly rhythm peaks the autocorrelation at lag 7") {
    synthgen::GeneratorSpec spec;
    spec.seed = 4;
    spec.n_days = 70;
    spec.base_daily_clicks = 3000;
    spec.weekly_weights = {1.2, 1.3, 1.25, 1.2, 1.1, 0.5, 0.4};
    auto g = synthgen::generate(spec);
    TimeGrid grid = make_grid(g.store);
    auto acf = autocorrelation(daily_series(g.store, grid), 10);
    REQUIRE(acf.size() == 11);
    CHECK(acf[0] == doctest::Approx(1.0));
    for (int lag = 1; lag <= 10; ++lag)
        if (lag != 7) CHECK(acf[7] > acf[lag]);
}

TEST_CASE("profiles are order-independent") {
    std::mt19937_64 eng(8);
    std::vector<ClickEvent> ev;
    for (int i = 0; i < 4000; ++i)
        ev.push_back(at(std::int64_t(eng() % 20), std::int64_t(eng() % 86400),
                        std::uint32_t(eng() % 9), std::uint32_t(eng() % 30)));
    auto shuffled = ev;
    std::shuffle(shuffled.begin(), shuffled.end(), eng);
    auto a = daily_series(build_store(ev), kGrid);
    auto b = daily_series(build_store(shuffled), kGrid);
    CHECK(a.counts == b.counts);
}

TEST_CASE("day labels are civil dates") {
    CHECK(day_label(kGrid, 0) == "2005-04-01");
    CHECK(day_label(kGrid, 30) == "2005-05-01");
    CHECK(day_label(kGrid, 275) == "2006-01-01");
}
