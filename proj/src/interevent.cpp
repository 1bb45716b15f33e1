#include "weblog/interevent.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace weblog {

namespace {

// Gaps for one user, optionally split per URL. Appends to out.
void user_gaps(const EventStore& store, std::uint32_t user, bool per_url,
               std::vector<std::int64_t>& out, std::uint64_t& zeros) {
    auto positions = store.user_events(user);
    if (per_url) {
        std::unordered_map<std::uint32_t, std::int64_t> last;
        last.reserve(16);
        for (std::size_t pos : positions) {
            const auto& e = store.events()[pos];
            auto [it, fresh] = last.try_emplace(e.url_id, e.timestamp);
            if (!fresh) {
                std::int64_t gap = e.timestamp - it->second;
                if (gap == 0)
                    ++zeros;
                else
                    out.push_back(gap);
                it->second = e.timestamp;
            }
        }
    } else {
        for (std::size_t i = 1; i < positions.size(); ++i) {
            std::int64_t gap = store.events()[positions[i]].timestamp -
                               store.events()[positions[i - 1]].timestamp;
            if (gap == 0)
                ++zeros;
            else
                out.push_back(gap);
        }
    }
}

InterEventSample tau_impl(const EventStore& store, TauKind kind, bool parallel) {
    const bool per_url = kind == TauKind::visit;
    const auto users = store.users();  // sorted: deterministic merge order
    InterEventSample sample{kind, {}, 0};

    if (!parallel) {
        for (std::uint32_t u : users) user_gaps(store, u, per_url, sample.values, sample.zero_gaps);
        return sample;
    }

    std::vector<std::vector<std::int64_t>> chunks(users.size());
    std::vector<std::uint64_t> zeros(users.size(), 0);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(users.size()); ++i)
        user_gaps(store, users[std::size_t(i)], per_url, chunks[std::size_t(i)], zeros[std::size_t(i)]);

    std::size_t total = 0;
    for (const auto& c : chunks) total += c.size();
    sample.values.reserve(total);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        sample.values.insert(sample.values.end(), chunks[i].begin(), chunks[i].end());
        sample.zero_gaps += zeros[i];
    }
    return sample;
}

}  // namespace

InterEventSample tau_v(const EventStore& store) { return tau_impl(store, TauKind::visit, true); }
InterEventSample tau_c(const EventStore& store) { return tau_impl(store, TauKind::click, true); }
InterEventSample tau_v_serial(const EventStore& store) { return tau_impl(store, TauKind::visit, false); }
InterEventSample tau_c_serial(const EventStore& store) { return tau_impl(store, TauKind::click, false); }

UserProfile user_profile(const EventStore& store, std::uint32_t user_id, const TimeGrid& grid) {
    auto positions = store.user_events(user_id);
    if (positions.empty()) throw NotFound("user_profile: unknown user");

    UserProfile p;
    p.user_id = user_id;
    p.timestamps.reserve(positions.size());
    for (std::size_t pos : positions) p.timestamps.push_back(store.events()[pos].timestamp);

    if (p.timestamps.size() >= 2) {
        double sum = 0, sum2 = 0;
        std::size_t n = p.timestamps.size() - 1;
        for (std::size_t i = 1; i < p.timestamps.size(); ++i) {
            double g = double(p.timestamps[i] - p.timestamps[i - 1]);
            sum += g;
            sum2 += g * g;
        }
        double mu = sum / double(n);
        double var = sum2 / double(n) - mu * mu;
        p.cv = mu > 0 ? std::sqrt(std::max(var, 0.0)) / mu : 0.0;
    }

    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < p.timestamps.size(); ++hi) {
        while (p.timestamps[hi] - p.timestamps[lo] >= 60) ++lo;
        p.max_per_minute = std::max<std::uint64_t>(p.max_per_minute, hi - lo + 1);
    }

    std::unordered_set<std::int64_t> days;
    for (auto t : p.timestamps) days.insert(grid.day_of(t));
    p.active_days = days.size();
    return p;
}

}  // namespace weblog
