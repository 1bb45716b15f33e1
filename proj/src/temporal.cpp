#include "weblog/temporal.hpp"

#include <cmath>
#include <cstdio>

namespace weblog {

DailySeries daily_series(const EventStore& store, const TimeGrid& grid) {
    if (store.size() == 0) throw EmptyDataset();
    DailySeries s;
    s.first_day = grid.day_of(store.t_start());
    std::int64_t last_day = grid.day_of(store.t_end());
    s.counts.assign(std::size_t(last_day - s.first_day + 1), 0);
    for (const auto& e : store.events()) s.counts[std::size_t(grid.day_of(e.timestamp) - s.first_day)]++;
    return s;
}

DayOfWeekProfile day_of_week_profile(const DailySeries& series, const TimeGrid& grid) {
    // First and last days of the span may be partial calendar days; drop them.
    if (series.days() < 16) throw InsufficientData("day_of_week_profile: need >= 2 full weeks of complete days");
    DayOfWeekProfile p;
    std::array<double, 7> sum{}, sum2{};
    for (std::size_t i = 1; i + 1 < series.days(); ++i) {
        int d = grid.weekday_of_day(series.first_day + std::int64_t(i));
        double v = double(series.counts[i]);
        sum[std::size_t(d)] += v;
        sum2[std::size_t(d)] += v * v;
        p.n[std::size_t(d)]++;
    }
    for (std::size_t d = 0; d < 7; ++d) {
        if (p.n[d] == 0) continue;
        double n = double(p.n[d]);
        p.mean[d] = sum[d] / n;
        double var = sum2[d] / n - p.mean[d] * p.mean[d];
        p.sigma[d] = var > 0 ? std::sqrt(var) : 0.0;
    }
    return p;
}

HourlyProfile hourly_profile(const EventStore& store, const TimeGrid& grid) {
    if (store.size() == 0) throw EmptyDataset();
    HourlyProfile p;
    std::int64_t first_day = grid.day_of(store.t_start());
    std::int64_t last_day = grid.day_of(store.t_end());
    for (std::int64_t d = first_day; d <= last_day; ++d) {
        int w = grid.weekday_of_day(d);
        DayClass c = w < 5 ? DayClass::weekday : (w == 5 ? DayClass::saturday : DayClass::sunday);
        p.n_days[std::size_t(c)]++;
    }
    std::array<std::array<double, 24>, 3> totals{};
    for (const auto& e : store.events()) {
        int w = grid.weekday_of_day(grid.day_of(e.timestamp));
        DayClass c = w < 5 ? DayClass::weekday : (w == 5 ? DayClass::saturday : DayClass::sunday);
        totals[std::size_t(c)][std::size_t(grid.hour_of(e.timestamp))] += 1.0;
    }
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t h = 0; h < 24; ++h)
            p.mean[c][h] = p.n_days[c] ? totals[c][h] / double(p.n_days[c]) : 0.0;
    return p;
}

std::vector<WeekCompareRow> compare_week(const DailySeries& series, std::int64_t week_start_day,
                                         const DayOfWeekProfile& profile, const TimeGrid& grid) {
    if (week_start_day < series.first_day ||
        week_start_day + 6 > series.first_day + std::int64_t(series.days()) - 1)
        throw DataError("compare_week: window out of range");
    std::vector<WeekCompareRow> rows;
    for (std::int64_t d = week_start_day; d < week_start_day + 7; ++d) {
        WeekCompareRow r;
        r.day_index = d;
        r.weekday = grid.weekday_of_day(d);
        r.observed = double(series.counts[std::size_t(d - series.first_day)]);
        r.mean = profile.mean[std::size_t(r.weekday)];
        r.sigma = profile.sigma[std::size_t(r.weekday)];
        r.z_defined = r.sigma > 0;
        r.z = r.z_defined ? (r.observed - r.mean) / r.sigma : 0.0;
        rows.push_back(r);
    }
    return rows;
}

std::vector<double> autocorrelation(const DailySeries& series, std::size_t max_lag) {
    const std::size_t n = series.days();
    if (n < 2 || max_lag >= n) throw InsufficientData("autocorrelation: series too short");
    double mean = 0;
    for (auto c : series.counts) mean += double(c);
    mean /= double(n);
    double var = 0;
    for (auto c : series.counts) var += (double(c) - mean) * (double(c) - mean);
    std::vector<double> acf(max_lag + 1, 0.0);
    if (var == 0) {
        acf[0] = 1.0;
        return acf;
    }
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double s = 0;
        for (std::size_t i = 0; i + lag < n; ++i)
            s += (double(series.counts[i]) - mean) * (double(series.counts[i + lag]) - mean);
        acf[lag] = s / var;
    }
    return acf;
}

std::string day_label(const TimeGrid& grid, std::int64_t day_index) {
    // civil date from local days since epoch (Howard Hinnant's algorithm)
    std::int64_t z = grid.day_origin / 86400 + day_index;
    z += 719468;
    std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    std::uint64_t doe = std::uint64_t(z - era * 146097);
    std::uint64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    std::int64_t y = std::int64_t(yoe) + era * 400;
    std::uint64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    std::uint64_t mp = (5 * doy + 2) / 153;
    std::uint64_t day = doy - (153 * mp + 2) / 5 + 1;
    std::uint64_t month = mp < 10 ? mp + 3 : mp - 9;
    if (month <= 2) ++y;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02llu-%02llu", (long long)y, (unsigned long long)month,
                  (unsigned long long)day);
    return buf;
}

}  // namespace weblog
