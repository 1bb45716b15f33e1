#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "weblog/core.hpp"

namespace weblog {

/// Clicks per day over the store span; zero-count days are explicit.
struct DailySeries {
    std::int64_t first_day = 0;
    std::vector<std::uint64_t> counts;

    std::size_t days() const { return counts.size(); }
};

/// Per-weekday mean/population-sigma of daily totals; band = 2 sigma.
struct DayOfWeekProfile {
    std::array<double, 7> mean{};   // Mon..Sun
    std::array<double, 7> sigma{};
    std::array<std::size_t, 7> n{};

    double band(int d) const { return 2.0 * sigma[std::size_t(d)]; }
};

enum class DayClass { weekday, saturday, sunday };

struct HourlyProfile {
    // mean clicks per hour for each class, normalized by days in class
    std::array<std::array<double, 24>, 3> mean{};
    std::array<std::size_t, 3> n_days{};
};

struct WeekCompareRow {
    std::int64_t day_index;
    int weekday;  // 0 = Mon
    double observed;
    double mean;
    double sigma;
    double z;        // (observed - mean) / sigma
    bool z_defined;  // false when sigma == 0
};

DailySeries daily_series(const EventStore& store, const TimeGrid& grid);

/// Requires >= 2 full weeks of complete days; partial first/last calendar
/// days are excluded from the means.
DayOfWeekProfile day_of_week_profile(const DailySeries& series, const TimeGrid& grid);

HourlyProfile hourly_profile(const EventStore& store, const TimeGrid& grid);

/// Deviation report for the 7 days starting at week_start_day.
std::vector<WeekCompareRow> compare_week(const DailySeries& series, std::int64_t week_start_day,
                                         const DayOfWeekProfile& profile, const TimeGrid& grid);

/// Sample autocorrelation of the daily counts at lags 0..max_lag.
std::vector<double> autocorrelation(const DailySeries& series, std::size_t max_lag);

/// yyyy-mm-dd for a grid day index.
std::string day_label(const TimeGrid& grid, std::int64_t day_index);

}  // namespace weblog
