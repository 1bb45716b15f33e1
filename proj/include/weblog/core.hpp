#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace weblog {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyDataset : DataError {
    EmptyDataset() : DataError("empty dataset") {}
};
struct InsufficientData : DataError {
    using DataError::DataError;
};
struct NotFound : DataError {
    using DataError::DataError;
};

/// One anonymized page request.
struct ClickEvent {
    std::uint32_t user_id;
    std::uint32_t url_id;
    std::int64_t timestamp;  // seconds since epoch

    friend bool operator==(const ClickEvent&, const ClickEvent&) = default;
};

/// Sort key: (timestamp, user_id, url_id).
inline bool event_order(const ClickEvent& a, const ClickEvent& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.user_id != b.user_id) return a.user_id < b.user_id;
    return a.url_id < b.url_id;
}

inline std::uint64_t pair_key(std::uint32_t user, std::uint32_t url) {
    return (std::uint64_t(user) << 32) | url;
}

/// Immutable time-sorted event collection with per-user and per-(user,url)
/// indices. Safe for concurrent read-only access after construction.
class EventStore {
public:
    EventStore() = default;

    const std::vector<ClickEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    std::int64_t t_start() const { return t_start_; }
    std::int64_t t_end() const { return t_end_; }

    /// Event positions for one user, in time order.
    std::span<const std::size_t> user_events(std::uint32_t user) const;
    /// Event positions for one (user, url) pair, in time order.
    std::span<const std::size_t> pair_events(std::uint32_t user, std::uint32_t url) const;

    std::vector<std::uint32_t> users() const;
    std::vector<std::uint64_t> pairs() const;
    std::size_t user_count() const { return user_index_.size(); }
    std::size_t pair_count() const { return pair_index_.size(); }

    friend EventStore build_store(std::vector<ClickEvent> events);

private:
    struct Range {
        std::size_t begin = 0, count = 0;
    };
    std::vector<ClickEvent> events_;
    // Positions grouped by key; Range views into the flat arrays.
    std::vector<std::size_t> user_positions_;
    std::vector<std::size_t> pair_positions_;
    std::unordered_map<std::uint32_t, Range> user_index_;
    std::unordered_map<std::uint64_t, Range> pair_index_;
    std::int64_t t_start_ = 0, t_end_ = 0;
};

EventStore build_store(std::vector<ClickEvent> events);

/// Canonical local-time grid: one fixed utc offset for the whole dataset.
struct TimeGrid {
    std::int64_t day_origin = 0;  // epoch seconds of first local midnight <= data
    std::int64_t tz_offset = -14400;

    std::int64_t local(std::int64_t t) const { return t + tz_offset; }
    /// Floor division so pre-origin times would go negative (invariant: none stored).
    std::int64_t day_of(std::int64_t t) const {
        std::int64_t d = local(t) - day_origin;
        return d >= 0 ? d / 86400 : (d - 86399) / 86400;
    }
    int hour_of(std::int64_t t) const {
        std::int64_t s = local(t) % 86400;
        if (s < 0) s += 86400;
        return int(s / 3600);
    }
    /// 0 = Monday .. 6 = Sunday. 1970-01-01 was a Thursday.
    int weekday_of_day(std::int64_t day_index) const {
        std::int64_t days = day_origin / 86400 + day_index;
        std::int64_t w = (days + 3) % 7;
        if (w < 0) w += 7;
        return int(w);
    }
};

inline std::int64_t day_of(const ClickEvent& e, const TimeGrid& grid) {
    return grid.day_of(e.timestamp);
}

/// Grid whose day 0 is the local calendar day of the store's first event.
TimeGrid make_grid(const EventStore& store, std::int64_t tz_offset = -14400);

}  // namespace weblog
