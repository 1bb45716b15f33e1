#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "weblog/core.hpp"

namespace weblog {

enum class TauKind { visit, click };

/// Pooled inter-event times in seconds; same-second repeats (zero gaps) are
/// tallied separately since log bins cannot hold them.
struct InterEventSample {
    TauKind kind;
    std::vector<std::int64_t> values;
    std::uint64_t zero_gaps = 0;
};

/// Times between consecutive visits of the same user to the same URL.
InterEventSample tau_v(const EventStore& store);
/// Times between consecutive clicks of the same user anywhere.
InterEventSample tau_c(const EventStore& store);

/// Single-threaded reference paths, kept for equivalence testing against
/// the parallel versions.
InterEventSample tau_v_serial(const EventStore& store);
InterEventSample tau_c_serial(const EventStore& store);

struct UserProfile {
    std::uint32_t user_id;
    std::vector<std::int64_t> timestamps;  // cumulative curve is 1..n over these
    std::optional<double> cv;              // sigma/mu of gaps; absent when < 2 events
    std::uint64_t max_per_minute = 0;      // max clicks in any 60 s window
    std::uint64_t active_days = 0;
};

UserProfile user_profile(const EventStore& store, std::uint32_t user_id, const TimeGrid& grid);

}  // namespace weblog
