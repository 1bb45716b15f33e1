#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "weblog/powerlaw.hpp"

namespace weblog {

/// Priority-queue model parameters. Each step executes nu tasks chosen
/// sequentially without replacement (highest priority with probability p,
/// uniformly random otherwise); freed slots are refilled after the batch.
struct QueueConfig {
    std::size_t tasks = 100;  // L, constant queue length
    double p = 0.99999;
    std::size_t nu = 1;
    std::uint64_t steps = 1;
    std::uint64_t seed = 1;
};

/// In-queue waiting times, kept as value -> multiplicity. Tasks still in
/// the queue at the end are censored (counted, not sampled).
struct WaitSample {
    std::map<std::int64_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    std::uint64_t censored = 0;

    std::vector<std::pair<double, double>> as_value_counts() const;
    friend bool operator==(const WaitSample&, const WaitSample&) = default;
};

/// RNG stream contract shared by both implementations: per selection one
/// unit draw for the p decision, one index draw only on the random branch;
/// after the batch one unit draw per fresh priority, in slot order.
class QueueRng {
public:
    explicit QueueRng(std::uint64_t seed) : eng_(seed) {}
    double unit() { return double(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t index(std::uint64_t n) { return eng_() % n; }

private:
    std::mt19937_64 eng_;
};

WaitSample simulate(const QueueConfig& config);

/// Linear-scan reference implementation; consumes the identical RNG stream
/// and must produce a bit-identical WaitSample for any config.
WaitSample simulate_naive(const QueueConfig& config);

struct SweepRow {
    std::size_t nu;
    PowerLawFit fit;
};

/// Runs simulate per nu and fits the log-binned waiting-time density over
/// [tau_lo, tau_hi]. Independent runs execute in parallel.
std::vector<SweepRow> exponent_sweep(const QueueConfig& base, const std::vector<std::size_t>& nu_values,
                                     double tau_lo = 2.0, double tau_hi = 1000.0, double b = 1.3);

}  // namespace weblog
