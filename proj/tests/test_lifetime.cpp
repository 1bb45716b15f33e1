#include <algorithm>

#include "doctest.h"
#include "weblog/lifetime.hpp"
#include "weblog/synthgen.hpp"

using namespace weblog;

namespace {

constexpr std::int64_t kOrigin = 1112328000;
constexpr TimeGrid kGrid{.day_origin = kOrigin - 14400, .tz_offset = -14400};

ClickEvent at(std::int64_t day, std::uint32_t u, std::uint32_t p) {
    return {u, p, kOrigin + day * 86400 + 3600};
}

}  // namespace

TEST_CASE("first and last seen land on the click days") {
    // anchor urls keep day 0 and the final day occupied
    EventStore s = build_store({at(0, 1, 0), at(10, 1, 9), at(3, 1, 5), at(9, 1, 5)});
    auto lt = lifetime_series(s, kGrid);
    CHECK(lt.first_seen[3] == 1);
    CHECK(lt.last_seen[9] == 1);
    auto it = std::find_if(lt.per_url.begin(), lt.per_url.end(),
                           [](const UrlLifetime& u) { return u.url_id == 5; });
    REQUIRE(it != lt.per_url.end());
    CHECK(it->first_day == 3);
    CHECK(it->last_day == 9);
    CHECK(it->clicks == 2);
    CHECK_FALSE(it->censored_left);
    CHECK_FALSE(it->censored_right);
}

TEST_CASE("single-click url has first_day == last_day") {
    EventStore s = build_store({at(0, 1, 0), at(5, 2, 7), at(8, 1, 0)});
    auto lt = lifetime_series(s, kGrid);
    auto it = std::find_if(lt.per_url.begin(), lt.per_url.end(),
                           [](const UrlLifetime& u) { return u.url_id == 7; });
    REQUIRE(it != lt.per_url.end());
    CHECK(it->first_day == it->last_day);
    CHECK(it->first_day == 5);
}

TEST_CASE("censoring flags mark span-edge urls") {
    EventStore s = build_store({at(0, 1, 1), at(4, 1, 1), at(2, 1, 2), at(6, 1, 2), at(6, 1, 3)});
    auto lt = lifetime_series(s, kGrid);
    for (const auto& u : lt.per_url) {
        if (u.url_id == 1) {
            CHECK(u.censored_left);
            CHECK_FALSE(u.censored_right);
        } else if (u.url_id == 2) {
            CHECK_FALSE(u.censored_left);
            CHECK(u.censored_right);
        } else {
            CHECK_FALSE(u.censored_left);
            CHECK(u.censored_right);
        }
    }
}

TEST_CASE("series totals equal the distinct url count") {
    synthgen::GeneratorSpec spec;
    spec.seed = 41;
    spec.n_days = 25;
    spec.n_urls = 150;
    spec.base_daily_clicks = 900;
    auto g = synthgen::generate(spec);
    auto lt = lifetime_series(g.store, make_grid(g.store));
    std::uint64_t f = 0, l = 0, clicks = 0;
    for (auto c : lt.first_seen) f += c;
    for (auto c : lt.last_seen) l += c;
    for (const auto& u : lt.per_url) {
        CHECK(u.first_day <= u.last_day);
        clicks += u.clicks;
    }
    CHECK(f == lt.per_url.size());
    CHECK(l == lt.per_url.size());
    CHECK(clicks == g.store.size());
}

TEST_CASE("per-url records are order-independent within days") {
    std::vector<ClickEvent> ev{at(0, 1, 0), at(3, 1, 4), at(3, 2, 4), at(7, 3, 4), at(7, 1, 0)};
    auto shuffled = ev;
    std::reverse(shuffled.begin(), shuffled.end());
    auto a = lifetime_series(build_store(ev), kGrid);
    auto b = lifetime_series(build_store(shuffled), kGrid);
    CHECK(a.first_seen == b.first_seen);
    CHECK(a.last_seen == b.last_seen);
}

TEST_CASE("planted cohort produces exact peaks") {
    synthgen::GeneratorSpec spec;
    spec.seed = 10;
    spec.n_days = 40;
    synthgen::UrlSchedule sched;
    sched.birth_day = 12;
    sched.death_day = 30;
    sched.n_urls = 200;
    spec.url_schedule = sched;
    auto g = synthgen::generate(spec);
    auto lt = lifetime_series(g.store, make_grid(g.store));
    CHECK(lt.first_seen[12] == 200);
    CHECK(lt.last_seen[30] == 200);
    // only the always-on background url lies outside the cohort
    std::uint64_t other_first = 0;
    for (std::size_t d = 0; d < lt.first_seen.size(); ++d)
        if (d != 12) other_first += lt.first_seen[d];
    CHECK(other_first == 1);
}
