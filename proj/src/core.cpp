#include "weblog/core.hpp"

#include <algorithm>

namespace weblog {

std::span<const std::size_t> EventStore::user_events(std::uint32_t user) const {
    auto it = user_index_.find(user);
    if (it == user_index_.end()) return {};
    return {user_positions_.data() + it->second.begin, it->second.count};
}

std::span<const std::size_t> EventStore::pair_events(std::uint32_t user, std::uint32_t url) const {
    auto it = pair_index_.find(pair_key(user, url));
    if (it == pair_index_.end()) return {};
    return {pair_positions_.data() + it->second.begin, it->second.count};
}

std::vector<std::uint32_t> EventStore::users() const {
    std::vector<std::uint32_t> out;
    out.reserve(user_index_.size());
    for (const auto& [u, r] : user_index_) out.push_back(u);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> EventStore::pairs() const {
    std::vector<std::uint64_t> out;
    out.reserve(pair_index_.size());
    for (const auto& [k, r] : pair_index_) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
}

EventStore build_store(std::vector<ClickEvent> events) {
    if (events.empty()) throw EmptyDataset();
    std::sort(events.begin(), events.end(), event_order);

    EventStore store;
    store.t_start_ = events.front().timestamp;
    store.t_end_ = events.back().timestamp;

    const std::size_t n = events.size();
    // Group positions by stable counting passes: count, prefix, scatter.
    std::unordered_map<std::uint32_t, EventStore::Range> uidx;
    std::unordered_map<std::uint64_t, EventStore::Range> pidx;
    for (const auto& e : events) {
        uidx[e.user_id].count++;
        pidx[pair_key(e.user_id, e.url_id)].count++;
    }
    std::size_t off = 0;
    for (auto& [u, r] : uidx) {
        r.begin = off;
        off += r.count;
        r.count = 0;
    }
    off = 0;
    for (auto& [k, r] : pidx) {
        r.begin = off;
        off += r.count;
        r.count = 0;
    }
    store.user_positions_.resize(n);
    store.pair_positions_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& ur = uidx[events[i].user_id];
        store.user_positions_[ur.begin + ur.count++] = i;
        auto& pr = pidx[pair_key(events[i].user_id, events[i].url_id)];
        store.pair_positions_[pr.begin + pr.count++] = i;
    }
    store.user_index_ = std::move(uidx);
    store.pair_index_ = std::move(pidx);
    store.events_ = std::move(events);
    return store;
}

TimeGrid make_grid(const EventStore& store, std::int64_t tz_offset) {
    TimeGrid grid;
    grid.tz_offset = tz_offset;
    std::int64_t local = store.t_start() + tz_offset;
    std::int64_t day = local >= 0 ? local / 86400 : (local - 86399) / 86400;
    grid.day_origin = day * 86400;
    return grid;
}

}  // namespace weblog
