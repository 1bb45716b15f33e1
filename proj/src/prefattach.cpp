#include "weblog/prefattach.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace weblog {

namespace {

std::uint64_t element_of(PrefTarget target, std::uint32_t user, std::uint32_t url) {
    switch (target) {
        case PrefTarget::k_ip: return user;
        case PrefTarget::k_url: return url;
        case PrefTarget::w: return pair_key(user, url);
    }
    return 0;
}

// events bucketed by day index relative to first_day
std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> day_buckets(
    const EventStore& store, const TimeGrid& grid, std::int64_t first_day, std::int64_t last_day) {
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> buckets(
        std::size_t(last_day - first_day + 1));
    for (const auto& e : store.events())
        buckets[std::size_t(grid.day_of(e.timestamp) - first_day)].emplace_back(e.user_id, e.url_id);
    return buckets;
}

// Trailing-window state: pair multiplicities plus per-element distinct or
// click counts, maintained incrementally as days enter and leave.
struct WindowState {
    PrefTarget target;
    std::unordered_map<std::uint64_t, std::uint32_t> pair_count;
    CountMap x;  // element -> accumulated value

    void add(std::uint32_t user, std::uint32_t url) {
        std::uint64_t el = element_of(target, user, url);
        if (target == PrefTarget::w) {
            x[el]++;
            return;
        }
        if (pair_count[pair_key(user, url)]++ == 0) x[el]++;
    }
    void remove(std::uint32_t user, std::uint32_t url) {
        std::uint64_t el = element_of(target, user, url);
        if (target == PrefTarget::w) {
            if (--x[el] == 0) x.erase(el);
            return;
        }
        if (--pair_count[pair_key(user, url)] == 0) {
            pair_count.erase(pair_key(user, url));
            if (--x[el] == 0) x.erase(el);
        }
    }
};

}  // namespace

CountMap accumulate_counts(const EventStore& store, PrefTarget target, std::int64_t day_lo,
                           std::int64_t day_hi, const TimeGrid& grid) {
    if (day_lo >= day_hi) throw DataError("accumulate_counts: empty day range");
    CountMap x;
    std::unordered_set<std::uint64_t> seen_pairs;
    for (const auto& e : store.events()) {
        std::int64_t d = grid.day_of(e.timestamp);
        if (d < day_lo || d >= day_hi) continue;
        if (target == PrefTarget::w) {
            x[pair_key(e.user_id, e.url_id)]++;
        } else if (seen_pairs.insert(pair_key(e.user_id, e.url_id)).second) {
            x[element_of(target, e.user_id, e.url_id)]++;
        }
    }
    return x;
}

PrefAttachCurve delta_curve(const EventStore& store, PrefTarget target, const TimeGrid& grid,
                            const PrefOptions& opts) {
    const std::int64_t first_day = grid.day_of(store.t_start());
    const std::int64_t last_day = grid.day_of(store.t_end());
    const std::int64_t w = std::int64_t(opts.window_days);
    if (last_day - first_day + 1 < w + 1)
        throw InsufficientData("delta_curve: span must exceed the accumulation window");

    auto buckets = day_buckets(store, grid, first_day, last_day);

    // Online log-binned accumulation of (x, dx) samples.
    const double logb = std::log(opts.bin_factor);
    auto bin_of = [&](double v) { return std::size_t(std::log(v) / logb); };
    struct Acc {
        double sum_x = 0, sum_dx = 0;
        std::size_t n = 0;
    };
    std::vector<Acc> acc;
    double x0_sum = 0;
    std::size_t x0_n = 0;

    auto sample_day = [&](const WindowState& win, std::size_t day_idx) {
        // per-element increment on the sampled day
        CountMap inc;
        std::unordered_set<std::uint64_t> day_pairs;
        for (auto [user, url] : buckets[day_idx]) {
            std::uint64_t el = element_of(target, user, url);
            if (target == PrefTarget::w) {
                inc[el]++;
            } else if (day_pairs.insert(pair_key(user, url)).second) {
                // only items absent from the trailing window count as new
                if (!win.pair_count.contains(pair_key(user, url))) inc[el]++;
            }
        }
        for (const auto& [el, xv] : win.x) {
            auto it = inc.find(el);
            double dx = it == inc.end() ? 0.0 : double(it->second);
            std::size_t b = bin_of(double(xv));
            if (b >= acc.size()) acc.resize(b + 1);
            acc[b].sum_x += double(xv);
            acc[b].sum_dx += dx;
            acc[b].n++;
        }
        for (const auto& [el, d] : inc) {
            if (win.x.contains(el)) continue;  // already sampled above
            x0_sum += double(d);
            x0_n++;
        }
    };

    WindowState win{target, {}, {}};
    if (opts.sliding) {
        for (std::int64_t d = 0; d < w; ++d)
            for (auto [user, url] : buckets[std::size_t(d)]) win.add(user, url);
        for (std::int64_t d = w; d <= last_day - first_day; ++d) {
            sample_day(win, std::size_t(d));
            if (d == last_day - first_day) break;
            for (auto [user, url] : buckets[std::size_t(d - w)]) win.remove(user, url);
            for (auto [user, url] : buckets[std::size_t(d)]) win.add(user, url);
        }
    } else {
        for (std::int64_t d = w; d <= last_day - first_day; d += w) {
            WindowState fresh{target, {}, {}};
            for (std::int64_t j = d - w; j < d; ++j)
                for (auto [user, url] : buckets[std::size_t(j)]) fresh.add(user, url);
            sample_day(fresh, std::size_t(d));
        }
    }

    PrefAttachCurve curve;
    curve.target = target;
    curve.window_days = opts.window_days;
    curve.sliding = opts.sliding;
    curve.x0_n = x0_n;
    curve.x0_dx_mean = x0_n ? x0_sum / double(x0_n) : 0.0;

    std::vector<double> fx, fy;
    for (const auto& a : acc) {
        if (a.n == 0) continue;
        PrefBin bin{a.sum_x / double(a.n), a.sum_dx / double(a.n), a.n, a.n >= opts.min_bin_samples};
        curve.bins.push_back(bin);
        if (bin.in_fit) {
            fx.push_back(bin.x_mean);
            fy.push_back(bin.dx_mean);
        }
    }
    if (fx.size() < 3) throw InsufficientData("delta_curve: too few populated bins for a fit");
    curve.fit = fit_linear(fx, fy);
    return curve;
}

WindowedDistributionPair windowed_distributions(const EventStore& store, PrefTarget target,
                                                const TimeGrid& grid) {
    const std::int64_t first_day = grid.day_of(store.t_start());
    const std::int64_t last_day = grid.day_of(store.t_end());
    const std::int64_t span = last_day - first_day + 1;
    if (span < 7) throw InsufficientData("windowed_distributions: span shorter than one week");
    const std::size_t n_weeks = std::size_t(span / 7);

    std::vector<std::vector<double>> week_values(n_weeks);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t wk = 0; wk < std::ptrdiff_t(n_weeks); ++wk) {
        auto counts = accumulate_counts(store, target, first_day + wk * 7, first_day + (wk + 1) * 7, grid);
        auto& vals = week_values[std::size_t(wk)];
        vals.reserve(counts.size());
        for (const auto& [el, x] : counts) vals.push_back(double(x));
        std::sort(vals.begin(), vals.end());
    }

    // union grid of distinct values over all weeks
    std::vector<double> union_x;
    for (const auto& vals : week_values) union_x.insert(union_x.end(), vals.begin(), vals.end());
    std::sort(union_x.begin(), union_x.end());
    union_x.erase(std::unique(union_x.begin(), union_x.end()), union_x.end());
    if (union_x.empty()) throw EmptyDataset();

    WindowedDistributionPair pair;
    pair.target = target;
    pair.weekly.x = union_x;
    pair.weekly.c.assign(union_x.size(), 0.0);
    std::size_t used_weeks = 0;
    for (const auto& vals : week_values) {
        if (vals.empty()) continue;
        ++used_weeks;
        for (std::size_t i = 0; i < union_x.size(); ++i) {
            auto it = std::lower_bound(vals.begin(), vals.end(), union_x[i]);
            pair.weekly.c[i] += double(vals.end() - it) / double(vals.size());
        }
    }
    if (used_weeks == 0) throw EmptyDataset();
    for (auto& c : pair.weekly.c) c /= double(used_weeks);

    auto full_counts = accumulate_counts(store, target, first_day, last_day + 1, grid);
    std::vector<double> full_vals;
    full_vals.reserve(full_counts.size());
    for (const auto& [el, x] : full_counts) full_vals.push_back(double(x));
    pair.full = cumulative(full_vals);
    return pair;
}

}  // namespace weblog
