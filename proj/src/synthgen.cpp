#include "weblog/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <random>

namespace weblog::synthgen {

namespace {

using nlohmann::json;

constexpr std::int64_t kDay = 86400;

double unit(std::mt19937_64& eng) {
    return double(eng() >> 11) * 0x1.0p-53;
}

/// Seconds-of-day sampler honouring the hourly weight profile.
class DaySampler {
public:
    explicit DaySampler(const std::array<double, 24>& w) {
        double total = 0;
        for (double x : w) total += x;
        std::array<double, 24> use = w;
        if (total <= 0) use.fill(1.0);
        hour_ = std::discrete_distribution<int>(use.begin(), use.end());
    }

    std::int64_t operator()(std::mt19937_64& eng) {
        int h = hour_(eng);
        return std::int64_t(h) * 3600 + std::int64_t(unit(eng) * 3600.0);
    }

private:
    std::discrete_distribution<int> hour_;
};

struct Builder {
    const GeneratorSpec& spec;
    std::mt19937_64 eng;
    DaySampler seconds;
    std::vector<ClickEvent> events;
    json truth;

    explicit Builder(const GeneratorSpec& s)
        : spec(s), eng(s.seed), seconds(s.hourly_weights) {}

    std::int64_t stamp(std::int64_t day, std::int64_t sec_of_day) const {
        return spec.start_epoch + day * kDay + sec_of_day;
    }

    void add(std::uint32_t user, std::uint32_t url, std::int64_t day, std::int64_t sec) {
        events.push_back({user, url, stamp(day, sec)});
    }
};

int weekday_of(const GeneratorSpec& spec, std::int64_t day) {
    std::int64_t days = (spec.start_epoch - 14400) / kDay + day;  // default grid offset
    std::int64_t w = (days + 3) % 7;
    if (w < 0) w += 7;
    return int(w);
}

void gen_volume(Builder& b) {
    const auto& s = b.spec;
    for (std::int64_t d = 0; d < std::int64_t(s.n_days); ++d) {
        double mean = s.base_daily_clicks * s.weekly_weights[weekday_of(s, d)];
        std::poisson_distribution<long> pois(std::max(mean, 0.0));
        long n = mean > 0 ? pois(b.eng) : 0;
        for (long i = 0; i < n; ++i) {
            auto user = std::uint32_t(b.eng() % s.n_users);
            auto url = std::uint32_t(b.eng() % s.n_urls);
            b.add(user, url, d, b.seconds(b.eng));
        }
    }
    b.truth["mode"] = "volume";
    b.truth["weekly_weights"] = s.weekly_weights;
    b.truth["hourly_weights"] = s.hourly_weights;
    b.truth["base_daily_clicks"] = s.base_daily_clicks;
}

void gen_interevent(Builder& b) {
    const auto& law = *b.spec.interevent;
    if (law.exponent <= 0 || law.tau_min <= 0 || law.tau_max <= law.tau_min)
        throw DataError("invalid inter-event law");
    std::int64_t span = std::int64_t(b.spec.n_days) * kDay;
    for (std::size_t i = 0; i < law.n_streams; ++i) {
        auto user = std::uint32_t(i);
        auto url = law.per_url ? std::uint32_t(i) : std::uint32_t(i % b.spec.n_urls);
        std::int64_t t = std::int64_t(unit(b.eng) * kDay);
        for (std::size_t k = 0; k < law.events_per_stream && t < span; ++k) {
            b.add(user, url, 0, t);
            double tau = power_law_sample(unit(b.eng), law.exponent, law.tau_min, law.tau_max);
            t += std::max<std::int64_t>(1, std::llround(tau));
        }
    }
    b.truth["mode"] = "interevent";
    b.truth["exponent"] = law.exponent;
    b.truth["tau_min"] = law.tau_min;
    b.truth["tau_max"] = law.tau_max;
}

/// Day-by-day growth with a planted increment kernel on the trailing week.
/// Elements are chosen so each raw event adds exactly one unit of the target
/// quantity: clicks for w, brand-new users for k_url, brand-new urls for k_ip.
void gen_kernel(Builder& b) {
    const auto& k = *b.spec.kernel;
    if (k.a < 0 || k.b < 0) throw DataError("invalid kernel");
    const bool sqrt_shape = k.shape == "sqrt";
    if (!sqrt_shape && k.shape != "linear") throw DataError("unknown kernel shape");

    std::vector<std::deque<long>> window(k.n_elements);
    std::uint32_t fresh = std::uint32_t(k.n_elements);  // ids for one-shot counterparts
    std::poisson_distribution<long> warm(k.warmup_mean);

    for (std::int64_t d = 0; d < std::int64_t(b.spec.n_days); ++d) {
        for (std::size_t e = 0; e < k.n_elements; ++e) {
            auto& win = window[e];
            long y;
            if (win.size() < 7) {
                y = warm(b.eng);
            } else {
                double x = 0;
                for (long v : win) x += double(v);
                double mean = k.b + (sqrt_shape ? k.a * std::sqrt(x) : k.a * x);
                std::poisson_distribution<long> pois(mean);
                y = pois(b.eng);
            }
            for (long i = 0; i < y; ++i) {
                std::int64_t sec = b.seconds(b.eng);
                switch (k.target) {
                    case PrefTarget::w:
                        b.add(std::uint32_t(e), std::uint32_t(e), d, sec);
                        break;
                    case PrefTarget::k_url:  // distinct users of url e
                        b.add(fresh++, std::uint32_t(e), d, sec);
                        break;
                    case PrefTarget::k_ip:  // distinct urls seen by user e
                        b.add(std::uint32_t(e), fresh++, d, sec);
                        break;
                }
            }
            win.push_back(y);
            if (win.size() > 7) win.pop_front();
        }
    }
    b.truth["mode"] = "kernel";
    b.truth["target"] = int(k.target);
    b.truth["shape"] = k.shape;
    b.truth["a"] = k.a;
    b.truth["b"] = k.b;
}

void gen_repertoire(Builder& b) {
    const auto& r = *b.spec.repertoire;
    if (b.spec.n_days < 7) throw DataError("repertoire needs at least one week");
    std::int64_t weeks = std::int64_t(b.spec.n_days) / 7;
    std::uint32_t next_url = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> repertoire;  // url range per user
    repertoire.reserve(b.spec.n_users);
    for (std::size_t u = 0; u < b.spec.n_users; ++u) {
        double s = power_law_sample(unit(b.eng), r.gamma, r.s_min, r.s_max);
        auto size = std::uint32_t(std::max(1.0, std::floor(s)));
        repertoire.emplace_back(next_url, size);
        next_url += size;
    }
    for (std::int64_t w = 0; w < weeks; ++w) {
        for (std::size_t u = 0; u < b.spec.n_users; ++u) {
            auto [base, size] = repertoire[u];
            for (std::uint32_t j = 0; j < size; ++j) {
                std::int64_t day = w * 7 + std::int64_t(b.eng() % 7);
                b.add(std::uint32_t(u), base + j, day, b.seconds(b.eng));
            }
        }
    }
    b.truth["mode"] = "repertoire";
    b.truth["gamma"] = r.gamma;
    b.truth["s_min"] = r.s_min;
    b.truth["s_max"] = r.s_max;
}

void gen_url_schedule(Builder& b) {
    const auto& u = *b.spec.url_schedule;
    if (u.birth_day < 0 || u.death_day >= std::int64_t(b.spec.n_days) ||
        u.death_day < u.birth_day)
        throw DataError("url schedule outside generated span");
    // A background url active every day keeps the daily series non-empty.
    for (std::int64_t d = 0; d < std::int64_t(b.spec.n_days); ++d)
        b.add(0, 0, d, b.seconds(b.eng));
    for (std::size_t j = 0; j < u.n_urls; ++j) {
        auto url = std::uint32_t(1 + j);
        auto user = std::uint32_t(1 + (j % std::max<std::size_t>(1, b.spec.n_users - 1)));
        b.add(user, url, u.birth_day, b.seconds(b.eng));
        if (u.death_day != u.birth_day) b.add(user, url, u.death_day, b.seconds(b.eng));
    }
    b.truth["mode"] = "url_schedule";
    b.truth["birth_day"] = u.birth_day;
    b.truth["death_day"] = u.death_day;
    b.truth["n_urls"] = u.n_urls;
}

void gen_aging(Builder& b) {
    const auto& a = *b.spec.aging;
    if (a.lifetime_days == 0 || a.lifetime_days > b.spec.n_days)
        throw DataError("aging lifetime outside generated span");
    std::int64_t latest_birth = std::int64_t(b.spec.n_days - a.lifetime_days);
    for (std::size_t j = 0; j < a.n_urls; ++j) {
        double rate = power_law_sample(unit(b.eng), a.gamma, a.rate_min, a.rate_max);
        std::int64_t birth = latest_birth > 0 ? std::int64_t(b.eng() % std::uint64_t(latest_birth + 1)) : 0;
        std::poisson_distribution<long> pois(rate);
        for (std::int64_t d = birth; d < birth + std::int64_t(a.lifetime_days); ++d) {
            long n = pois(b.eng);
            for (long i = 0; i < n; ++i) {
                auto user = std::uint32_t(b.eng() % b.spec.n_users);
                b.add(user, std::uint32_t(j), d, b.seconds(b.eng));
            }
        }
    }
    b.truth["mode"] = "aging";
    b.truth["gamma"] = a.gamma;
    b.truth["lifetime_days"] = a.lifetime_days;
    b.truth["rate_min"] = a.rate_min;
    b.truth["rate_max"] = a.rate_max;
    b.truth["user_pool"] = b.spec.n_users;
}

}  // namespace

double power_law_sample(double u, double exponent, double lo, double hi) {
    if (std::abs(exponent - 1.0) < 1e-12) return lo * std::pow(hi / lo, u);
    double e = 1.0 - exponent;
    double a = std::pow(lo, e), b = std::pow(hi, e);
    return std::pow(a + u * (b - a), 1.0 / e);
}

Generated generate(const GeneratorSpec& spec) {
    if (spec.n_users == 0 || spec.n_urls == 0 || spec.n_days == 0)
        throw DataError("generator needs users, urls and days");
    int planted = int(bool(spec.interevent)) + int(bool(spec.kernel)) +
                  int(bool(spec.repertoire)) + int(bool(spec.url_schedule)) +
                  int(bool(spec.aging));
    if (planted > 1) throw DataError("at most one planted feature per run");

    Builder b(spec);
    if (spec.interevent)
        gen_interevent(b);
    else if (spec.kernel)
        gen_kernel(b);
    else if (spec.repertoire)
        gen_repertoire(b);
    else if (spec.url_schedule)
        gen_url_schedule(b);
    else if (spec.aging)
        gen_aging(b);
    else
        gen_volume(b);

    b.truth["seed"] = spec.seed;
    b.truth["n_days"] = spec.n_days;
    b.truth["start_epoch"] = spec.start_epoch;
    b.truth["n_events"] = b.events.size();
    return {build_store(std::move(b.events)), std::move(b.truth)};
}

GeneratorSpec spec_from_json(const json& j) {
    GeneratorSpec s;
    s.seed = j.value("seed", s.seed);
    s.n_users = j.value("n_users", s.n_users);
    s.n_urls = j.value("n_urls", s.n_urls);
    s.n_days = j.value("n_days", s.n_days);
    s.base_daily_clicks = j.value("base_daily_clicks", s.base_daily_clicks);
    s.start_epoch = j.value("start_epoch", s.start_epoch);
    if (auto it = j.find("weekly_weights"); it != j.end())
        s.weekly_weights = it->get<std::array<double, 7>>();
    if (auto it = j.find("hourly_weights"); it != j.end())
        s.hourly_weights = it->get<std::array<double, 24>>();
    if (auto it = j.find("interevent"); it != j.end()) {
        InterEventLaw law;
        law.exponent = it->value("exponent", law.exponent);
        law.tau_min = it->value("tau_min", law.tau_min);
        law.tau_max = it->value("tau_max", law.tau_max);
        law.n_streams = it->value("n_streams", law.n_streams);
        law.events_per_stream = it->value("events_per_stream", law.events_per_stream);
        law.per_url = it->value("per_url", law.per_url);
        s.interevent = law;
    }
    if (auto it = j.find("kernel"); it != j.end()) {
        PrefKernel k;
        std::string target = it->value("target", std::string("w"));
        if (target == "w")
            k.target = PrefTarget::w;
        else if (target == "k_url")
            k.target = PrefTarget::k_url;
        else if (target == "k_ip")
            k.target = PrefTarget::k_ip;
        else
            throw DataError("unknown kernel target: " + target);
        k.shape = it->value("shape", k.shape);
        k.a = it->value("a", k.a);
        k.b = it->value("b", k.b);
        k.n_elements = it->value("n_elements", k.n_elements);
        k.warmup_mean = it->value("warmup_mean", k.warmup_mean);
        s.kernel = k;
    }
    if (auto it = j.find("repertoire"); it != j.end()) {
        Repertoire r;
        r.gamma = it->value("gamma", r.gamma);
        r.s_min = it->value("s_min", r.s_min);
        r.s_max = it->value("s_max", r.s_max);
        s.repertoire = r;
    }
    if (auto it = j.find("url_schedule"); it != j.end()) {
        UrlSchedule u;
        u.birth_day = it->value("birth_day", u.birth_day);
        u.death_day = it->value("death_day", u.death_day);
        u.n_urls = it->value("n_urls", u.n_urls);
        s.url_schedule = u;
    }
    if (auto it = j.find("aging"); it != j.end()) {
        Aging a;
        a.n_urls = it->value("n_urls", a.n_urls);
        a.lifetime_days = it->value("lifetime_days", a.lifetime_days);
        a.gamma = it->value("gamma", a.gamma);
        a.rate_min = it->value("rate_min", a.rate_min);
        a.rate_max = it->value("rate_max", a.rate_max);
        s.aging = a;
    }
    return s;
}

json spec_to_json(const GeneratorSpec& s) {
    json j;
    j["seed"] = s.seed;
    j["n_users"] = s.n_users;
    j["n_urls"] = s.n_urls;
    j["n_days"] = s.n_days;
    j["base_daily_clicks"] = s.base_daily_clicks;
    j["start_epoch"] = s.start_epoch;
    j["weekly_weights"] = s.weekly_weights;
    j["hourly_weights"] = s.hourly_weights;
    if (s.interevent) {
        const auto& law = *s.interevent;
        j["interevent"] = {{"exponent", law.exponent},     {"tau_min", law.tau_min},
                           {"tau_max", law.tau_max},       {"n_streams", law.n_streams},
                           {"events_per_stream", law.events_per_stream},
                           {"per_url", law.per_url}};
    }
    if (s.kernel) {
        const auto& k = *s.kernel;
        const char* target = k.target == PrefTarget::w       ? "w"
                             : k.target == PrefTarget::k_url ? "k_url"
                                                             : "k_ip";
        j["kernel"] = {{"target", target}, {"shape", k.shape},
                       {"a", k.a},         {"b", k.b},
                       {"n_elements", k.n_elements}, {"warmup_mean", k.warmup_mean}};
    }
    if (s.repertoire)
        j["repertoire"] = {{"gamma", s.repertoire->gamma},
                           {"s_min", s.repertoire->s_min},
                           {"s_max", s.repertoire->s_max}};
    if (s.url_schedule)
        j["url_schedule"] = {{"birth_day", s.url_schedule->birth_day},
                             {"death_day", s.url_schedule->death_day},
                             {"n_urls", s.url_schedule->n_urls}};
    if (s.aging)
        j["aging"] = {{"n_urls", s.aging->n_urls},
                      {"lifetime_days", s.aging->lifetime_days},
                      {"gamma", s.aging->gamma},
                      {"rate_min", s.aging->rate_min},
                      {"rate_max", s.aging->rate_max}};
    return j;
}

namespace {

// Proleptic-Gregorian civil date from days since 1970-01-01 (Howard Hinnant's
// public-domain algorithm).
void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = unsigned(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    std::int64_t yy = std::int64_t(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    d = int(doy - (153 * mp + 2) / 5 + 1);
    m = int(mp < 10 ? mp + 3 : mp - 9);
    y = int(yy + (m <= 2));
}

constexpr const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                   "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

}  // namespace

void emit_ncsa(const EventStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    constexpr std::int64_t kOffset = -14400;  // rendered as -0400
    char line[256];
    for (const ClickEvent& e : store.events()) {
        std::int64_t local = e.timestamp + kOffset;
        std::int64_t days = local >= 0 ? local / kDay : (local - kDay + 1) / kDay;
        std::int64_t sod = local - days * kDay;
        int y, m, d;
        civil_from_days(days, y, m, d);
        std::uint32_t u = e.user_id;
        int n = std::snprintf(
            line, sizeof line,
            "10.%u.%u.%u - - [%02d/%s/%04d:%02lld:%02lld:%02lld -0400] "
            "\"GET /p%u.html HTTP/1.0\" 200 512\n",
            (u >> 16) & 255, (u >> 8) & 255, u & 255, d, kMonths[m - 1], y,
            (long long)(sod / 3600), (long long)(sod / 60 % 60), (long long)(sod % 60),
            e.url_id);
        out.write(line, n);
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace weblog::synthgen
