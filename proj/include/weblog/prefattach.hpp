#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "weblog/core.hpp"
#include "weblog/powerlaw.hpp"

namespace weblog {

/// Quantity whose growth rule is measured: distinct URLs per user (k_IP),
/// distinct users per URL (k_URL), clicks per (user, url) pair (w).
enum class PrefTarget { k_ip, k_url, w };

/// Element ids: user id for k_ip, url id for k_url, pair_key for w.
using CountMap = std::unordered_map<std::uint64_t, std::uint32_t>;

/// Accumulated x per element over local days [day_lo, day_hi).
CountMap accumulate_counts(const EventStore& store, PrefTarget target, std::int64_t day_lo,
                           std::int64_t day_hi, const TimeGrid& grid);

struct PrefBin {
    double x_mean;   // mean accumulated x of samples in the bin
    double dx_mean;  // mean one-day increment
    std::size_t n;
    bool in_fit;  // bins with too few samples are reported but not fitted
};

struct PrefAttachCurve {
    PrefTarget target;
    std::vector<PrefBin> bins;
    LinearFit fit;  // <dx> = A x + B over the binned points
    // Elements first active on the increment day (x = 0): reported apart,
    // excluded from the fit.
    double x0_dx_mean = 0;
    std::size_t x0_n = 0;
    std::size_t window_days;
    bool sliding;
};

struct PrefOptions {
    std::size_t window_days = 7;
    bool sliding = true;  // every day with a full trailing window; false = disjoint weeks
    double bin_factor = 1.3;
    std::size_t min_bin_samples = 10;
};

/// Eq.-style preferential-linking measurement: x accumulated over the
/// trailing window, dx = the new increment on the next day, pooled over all
/// valid days, log-binned in x and fit linearly.
PrefAttachCurve delta_curve(const EventStore& store, PrefTarget target, const TimeGrid& grid,
                            const PrefOptions& opts = {});

struct WindowedDistributionPair {
    PrefTarget target;
    // weekly: C(x) averaged over disjoint 7-day windows on the union grid
    CumulativeDistribution weekly;
    CumulativeDistribution full;
};

WindowedDistributionPair windowed_distributions(const EventStore& store, PrefTarget target,
                                                const TimeGrid& grid);

}  // namespace weblog
