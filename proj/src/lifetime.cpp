#include "weblog/lifetime.hpp"

#include <algorithm>
#include <map>

namespace weblog {

LifetimeSeries lifetime_series(const EventStore& store, const TimeGrid& grid) {
    if (store.size() == 0) throw EmptyDataset();

    LifetimeSeries s;
    s.first_day = grid.day_of(store.t_start());
    std::int64_t last_day = grid.day_of(store.t_end());
    std::size_t n_days = std::size_t(last_day - s.first_day + 1);
    s.first_seen.assign(n_days, 0);
    s.last_seen.assign(n_days, 0);

    std::map<std::uint32_t, UrlLifetime> by_url;
    for (const auto& e : store.events()) {
        std::int64_t d = grid.day_of(e.timestamp);
        auto [it, fresh] = by_url.try_emplace(e.url_id, UrlLifetime{e.url_id, d, d, 0, false, false});
        it->second.first_day = std::min(it->second.first_day, d);
        it->second.last_day = std::max(it->second.last_day, d);
        it->second.clicks++;
    }
    for (auto& [url, life] : by_url) {
        life.censored_left = life.first_day == s.first_day;
        life.censored_right = life.last_day == last_day;
        s.first_seen[std::size_t(life.first_day - s.first_day)]++;
        s.last_seen[std::size_t(life.last_day - s.first_day)]++;
        s.per_url.push_back(life);
    }
    return s;
}

}  // namespace weblog
