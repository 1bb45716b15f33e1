#include "weblog/queue_sim.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace weblog {

namespace {

void validate(const QueueConfig& c) {
    if (c.tasks == 0) throw DataError("queue: L must be positive");
    if (c.nu < 1 || c.nu > c.tasks) throw DataError("queue: nu must satisfy 1 <= nu <= L");
    if (c.steps < 1) throw DataError("queue: steps must be >= 1");
    if (c.p < 0.0 || c.p > 1.0) throw DataError("queue: p must lie in [0,1]");
}

}  // namespace

std::vector<std::pair<double, double>> WaitSample::as_value_counts() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(counts.size());
    for (auto [v, c] : counts) out.emplace_back(double(v), double(c));
    return out;
}

WaitSample simulate_naive(const QueueConfig& config) {
    validate(config);
    QueueRng rng(config.seed);

    struct Task {
        double priority;
        std::int64_t entry_step;
    };
    // Insertion order throughout; random picks address the k-th oldest task.
    std::vector<Task> queue;
    queue.reserve(config.tasks);
    for (std::size_t i = 0; i < config.tasks; ++i) queue.push_back({rng.unit(), 0});

    WaitSample sample;
    for (std::uint64_t step = 1; step <= config.steps; ++step) {
        for (std::size_t k = 0; k < config.nu; ++k) {
            std::size_t pick;
            if (rng.unit() < config.p) {
                pick = 0;
                for (std::size_t i = 1; i < queue.size(); ++i)
                    if (queue[i].priority > queue[pick].priority) pick = i;
            } else {
                pick = std::size_t(rng.index(queue.size()));
            }
            std::int64_t wait = std::int64_t(step) - queue[pick].entry_step;
            sample.counts[wait]++;
            sample.total++;
            queue.erase(queue.begin() + std::ptrdiff_t(pick));
        }
        for (std::size_t k = 0; k < config.nu; ++k) queue.push_back({rng.unit(), std::int64_t(step)});
    }
    sample.censored = queue.size();
    return sample;
}

WaitSample simulate(const QueueConfig& config) {
    validate(config);
    QueueRng rng(config.seed);

    const std::size_t L = config.tasks;
    // Slot pool of L recycled ids. 'order' keeps alive ids oldest-first so a
    // random pick addresses the k-th oldest; the heap finds the max with lazy
    // deletion, keyed by (priority desc, seq asc) so ties go to older tasks.
    std::vector<double> priority(L);
    std::vector<std::int64_t> entry(L);
    std::vector<std::uint64_t> seq_of(L);
    std::vector<std::uint32_t> order;
    order.reserve(L);

    struct HeapEntry {
        double priority;
        std::uint64_t seq;
        std::uint32_t id;
        bool operator<(const HeapEntry& o) const {
            if (priority != o.priority) return priority < o.priority;
            return seq > o.seq;
        }
    };
    std::priority_queue<HeapEntry> heap;

    std::uint64_t next_seq = 0;
    for (std::uint32_t id = 0; id < L; ++id) {
        priority[id] = rng.unit();
        entry[id] = 0;
        seq_of[id] = next_seq;
        order.push_back(id);
        heap.push({priority[id], next_seq, id});
        ++next_seq;
    }

    std::vector<std::uint32_t> freed;
    freed.reserve(config.nu);
    WaitSample sample;

    for (std::uint64_t step = 1; step <= config.steps; ++step) {
        freed.clear();
        for (std::size_t k = 0; k < config.nu; ++k) {
            std::uint32_t id;
            if (rng.unit() < config.p) {
                for (;;) {
                    HeapEntry top = heap.top();
                    heap.pop();
                    if (seq_of[top.id] == top.seq) {
                        id = top.id;
                        break;
                    }
                }
                order.erase(std::find(order.begin(), order.end(), id));
            } else {
                std::size_t k_old = std::size_t(rng.index(order.size()));
                id = order[std::ptrdiff_t(k_old)];
                order.erase(order.begin() + std::ptrdiff_t(k_old));
            }
            std::int64_t wait = std::int64_t(step) - entry[id];
            sample.counts[wait]++;
            sample.total++;
            seq_of[id] = ~std::uint64_t(0);  // invalidate heap entries
            freed.push_back(id);
        }
        for (std::uint32_t id : freed) {
            priority[id] = rng.unit();
            entry[id] = std::int64_t(step);
            seq_of[id] = next_seq;
            order.push_back(id);
            heap.push({priority[id], next_seq, id});
            ++next_seq;
        }
        // Stale entries pile up when selections mostly take the random
        // branch; rebuild once they dominate.
        if (heap.size() > 4 * L + 64) {
            std::priority_queue<HeapEntry> fresh;
            for (std::uint32_t id : order) fresh.push({priority[id], seq_of[id], id});
            heap = std::move(fresh);
        }
    }
    sample.censored = order.size();
    return sample;
}

std::vector<SweepRow> exponent_sweep(const QueueConfig& base, const std::vector<std::size_t>& nu_values,
                                     double tau_lo, double tau_hi, double b) {
    for (std::size_t nu : nu_values) {
        QueueConfig c = base;
        c.nu = nu;
        validate(c);
    }
    std::vector<SweepRow> rows(nu_values.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(nu_values.size()); ++i) {
        QueueConfig c = base;
        c.nu = nu_values[std::size_t(i)];
        c.seed = base.seed + std::uint64_t(i);  // per-run stream
        WaitSample s = simulate(c);
        auto vc = s.as_value_counts();
        auto hist = log_bin_counts(vc, b, 1.0);
        rows[std::size_t(i)] = {c.nu, fit_slope(hist, tau_lo, tau_hi)};
    }
    return rows;
}

}  // namespace weblog
