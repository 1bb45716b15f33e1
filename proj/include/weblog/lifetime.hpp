#pragma once

#include <cstdint>
#include <vector>

#include "weblog/core.hpp"

namespace weblog {

struct UrlLifetime {
    std::uint32_t url_id;
    std::int64_t first_day;
    std::int64_t last_day;
    std::uint64_t clicks;
    // Birth/death may lie outside the observation span.
    bool censored_left;   // first seen on day 0 of the span
    bool censored_right;  // last seen on the final day
};

struct LifetimeSeries {
    std::int64_t first_day = 0;
    std::vector<std::uint64_t> first_seen;  // per day
    std::vector<std::uint64_t> last_seen;
    std::vector<UrlLifetime> per_url;  // sorted by url_id
};

LifetimeSeries lifetime_series(const EventStore& store, const TimeGrid& grid);

}  // namespace weblog
