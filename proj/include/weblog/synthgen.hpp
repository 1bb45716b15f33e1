#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "weblog/core.hpp"
#include "weblog/prefattach.hpp"

namespace weblog::synthgen {

/// Planted inter-event law: streams with power-law gaps over [tau_min, tau_max].
struct InterEventLaw {
    double exponent = 1.0;  // density ~ tau^-exponent
    double tau_min = 1.0;
    double tau_max = 1e4;
    std::size_t n_streams = 1000;
    std::size_t events_per_stream = 100;
    bool per_url = true;  // one (user,url) pair per stream; false = one user, many urls
};

/// Planted growth kernel: next-day increment ~ Poisson(A*x + B), with x the
/// trailing-week accumulation. shape "sqrt" uses Poisson(A*sqrt(x) + B).
struct PrefKernel {
    PrefTarget target = PrefTarget::w;
    std::string shape = "linear";  // or "sqrt"
    double a = 0.1;
    double b = 0.5;
    std::size_t n_elements = 10000;
    double warmup_mean = 2.0;  // Poisson mean per day during the first week
};

/// Stationary repertoires: user u owns s_u ~ powerlaw(gamma) URLs and visits
/// each once per week. Weekly and full-span k_IP coincide by construction.
struct Repertoire {
    double gamma = 2.2;
    double s_min = 1.0;
    double s_max = 1000.0;
};

/// Scheduled URL cohort: n_urls born on birth_day and last active death_day.
struct UrlSchedule {
    std::int64_t birth_day = 0;
    std::int64_t death_day = 0;
    std::size_t n_urls = 100;
};

/// Aging URLs: each lives lifetime_days; while alive it draws
/// Poisson(rate) visits per day from a finite user pool, so distinct-user
/// counts saturate over long windows. rate ~ powerlaw(gamma) in
/// [rate_min, rate_max].
struct Aging {
    std::size_t n_urls = 4000;
    std::size_t lifetime_days = 30;
    double gamma = 2.0;
    double rate_min = 0.5;
    double rate_max = 500.0;
};

struct GeneratorSpec {
    std::uint64_t seed = 1;
    std::size_t n_users = 200;
    std::size_t n_urls = 100;
    std::size_t n_days = 28;
    double base_daily_clicks = 2000;
    std::array<double, 7> weekly_weights{1, 1, 1, 1, 1, 1, 1};    // Mon..Sun
    std::array<double, 24> hourly_weights{};                      // all-equal when zero
    std::int64_t start_epoch = 1112328000;                        // local midnight under default tz

    // at most one planted feature; volume mode when none
    std::optional<InterEventLaw> interevent;
    std::optional<PrefKernel> kernel;
    std::optional<Repertoire> repertoire;
    std::optional<UrlSchedule> url_schedule;
    std::optional<Aging> aging;
};

struct Generated {
    EventStore store;
    nlohmann::json ground_truth;  // every planted parameter, for oracles
};

Generated generate(const GeneratorSpec& spec);

GeneratorSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const GeneratorSpec& spec);

/// Renders the store as NCSA Common Log Format text (hosts and paths are
/// synthetic but stable per id), to exercise the parser path.
void emit_ncsa(const EventStore& store, const std::string& path);

/// Truncated power-law sample with density ~ x^-exponent on [lo, hi].
double power_law_sample(double u, double exponent, double lo, double hi);

}  // namespace weblog::synthgen
