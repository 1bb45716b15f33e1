// End-to-end acceptance suite. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero if any check fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "weblog/ingest.hpp"
#include "weblog/interevent.hpp"
#include "weblog/lifetime.hpp"
#include "weblog/prefattach.hpp"
#include "weblog/queue_sim.hpp"
#include "weblog/synthgen.hpp"
#include "weblog/temporal.hpp"

using namespace weblog;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  %2d  %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
    if (!ok) ++failures;
}

void info(const std::string& msg) { std::printf("info     %s\n", msg.c_str()); }

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

PowerLawFit queue_fit(const QueueConfig& c, double lo, double hi) {
    WaitSample s = simulate(c);
    auto hist = log_bin_counts(s.as_value_counts(), 1.3, 1.0);
    return fit_slope(hist, lo, hi);
}

// --- criteria 1 & 2: the queue model's pinned exponents --------------------

void criterion_1() {
    QueueConfig c{.tasks = 100, .p = 0.99999, .nu = 3, .steps = 10000000, .seed = 1};
    auto fit = queue_fit(c, 2.0, 1000.0);
    bool ok = std::abs(fit.slope - (-1.25)) <= 0.1;
    report(1, ok, "batched queue (nu=3) slope -1.25 +- 0.1 over [2, 1e3]",
           "slope=" + num(fit.slope) + " +- " + num(fit.stderr_slope));
    if (!ok) {
        auto tail = queue_fit(c, 100.0, double(c.steps));
        info("nu=3 deep-tail slope over [1e2, 1e7]: " + num(tail.slope) +
             " (the batching effect emerges asymptotically, not in the pinned window)");
    }
}

void criterion_2() {
    QueueConfig base{.tasks = 100, .p = 0.99999, .nu = 1, .steps = 10000000, .seed = 1};
    auto f1 = queue_fit(base, 2.0, 1000.0);
    bool ok1 = std::abs(f1.slope - (-1.0)) <= 0.15;

    auto rows = exponent_sweep(base, {3, 4, 5}, 2.0, 1000.0);
    bool ok_sweep = true;
    std::string detail = "nu=1 slope=" + num(f1.slope);
    for (const auto& r : rows) {
        detail += ", nu=" + std::to_string(r.nu) + " slope=" + num(r.fit.slope);
        if (std::abs(r.fit.slope - (-1.25)) > 0.1) ok_sweep = false;
    }
    report(2, ok1 && ok_sweep,
           "queue sweep: nu=1 at -1.0 +- 0.15; nu in {3,4,5} at -1.25 +- 0.1", detail);
    if (!ok_sweep) {
        std::string tails = "deep-tail slopes over [1e2, 1e7]:";
        for (std::size_t nu : {std::size_t(1), std::size_t(3), std::size_t(4), std::size_t(5)}) {
            QueueConfig c = base;
            c.nu = nu;
            tails += " nu=" + std::to_string(nu) + ": " +
                     num(queue_fit(c, 100.0, double(c.steps)).slope);
        }
        info(tails);
    }
}

// --- criterion 3: fast/naive oracle equivalence -----------------------------

void criterion_3() {
    std::mt19937_64 eng(2024);
    bool ok = true;
    std::string detail = "100 random configs";
    for (int i = 0; i < 100 && ok; ++i) {
        QueueConfig c;
        c.tasks = 1 + eng() % 20;
        c.nu = 1 + eng() % c.tasks;
        c.p = double(eng() % 1001) / 1000.0;
        c.steps = 1 + eng() % 1000;
        c.seed = eng();
        if (!(simulate(c) == simulate_naive(c))) {
            ok = false;
            detail = "mismatch at L=" + std::to_string(c.tasks) + " nu=" + std::to_string(c.nu);
        }
    }
    QueueConfig inset{.tasks = 100, .p = 0.99999, .nu = 3, .steps = 10000, .seed = 5};
    if (ok && !(simulate(inset) == simulate_naive(inset))) {
        ok = false;
        detail = "mismatch at the L=100 reference config";
    } else if (ok) {
        detail += " + reference config at 1e4 steps all bit-identical";
    }
    report(3, ok, "simulate vs linear-scan reference", detail);
}

// --- criterion 4: analytic limits -------------------------------------------

void criterion_4() {
    QueueConfig c{.tasks = 10, .p = 0.0, .nu = 1, .steps = 1000000, .seed = 3};
    WaitSample s = simulate(c);
    double n = double(s.total);  // recorded samples; censored tasks are counted apart
    double chi2 = 0;
    double tail_expect = n;
    std::uint64_t tail_obs = s.total;
    for (std::int64_t t = 1; t <= 50; ++t) {
        double p = 0.1 * std::pow(0.9, double(t - 1));
        double expect = n * p;
        auto it = s.counts.find(t);
        double obs = it == s.counts.end() ? 0.0 : double(it->second);
        chi2 += (obs - expect) * (obs - expect) / expect;
        tail_expect -= expect;
        tail_obs -= std::uint64_t(obs);
    }
    chi2 += (double(tail_obs) - tail_expect) * (double(tail_obs) - tail_expect) / tail_expect;
    // 0.99 quantile of chi-square with 50 degrees of freedom
    bool ok_chi = chi2 < 76.154;

    QueueConfig solo{.tasks = 1, .p = 1.0, .nu = 1, .steps = 1000, .seed = 4};
    WaitSample one = simulate(solo);
    bool ok_one = one.counts.size() == 1 && one.counts.begin()->first == 1 &&
                  one.counts.begin()->second == solo.steps && one.censored == solo.tasks;
    report(4, ok_chi && ok_one, "analytic limits: geometric law at p=0; unit waits at L=1",
           "chi2=" + num(chi2) + " (crit 76.154), L=1 waits all 1: " +
               (ok_one ? "yes" : "no"));
}

// --- criterion 5: inter-event pipeline ---------------------------------------

void criterion_5() {
    auto planted = [](double exponent, std::uint64_t seed) {
        synthgen::GeneratorSpec spec;
        spec.seed = seed;
        spec.n_days = 30;
        synthgen::InterEventLaw law;
        law.exponent = exponent;
        law.tau_min = 1.0;
        law.tau_max = 1e4;
        law.n_streams = 5000;
        law.events_per_stream = 201;  // 10^6 gaps
        spec.interevent = law;
        return synthgen::generate(spec);
    };
    auto g1 = planted(1.0, 501);
    auto v = tau_v(g1.store);
    std::vector<double> vv(v.values.begin(), v.values.end());
    auto fv = fit_slope(log_bin(vv, 1.3, 1.0));

    auto g2 = planted(1.25, 502);
    auto c = tau_c(g2.store);
    std::vector<double> cv(c.values.begin(), c.values.end());
    auto fc = fit_slope(log_bin(cv, 1.3, 1.0));

    bool ok = std::abs(fv.slope - (-1.0)) <= 0.1 && std::abs(fc.slope - (-1.25)) <= 0.1 &&
              vv.size() + v.zero_gaps >= 1000000 && cv.size() + c.zero_gaps >= 1000000;
    report(5, ok, "planted inter-event laws recovered within +- 0.1",
           "tau_v slope=" + num(fv.slope) + " (want -1), tau_c slope=" + num(fc.slope) +
               " (want -1.25), samples=" + std::to_string(vv.size()) + "/" +
               std::to_string(cv.size()));
}

// --- criterion 6: preferential-attachment estimator --------------------------

void criterion_6() {
    PrefOptions opts;
    opts.min_bin_samples = 100;  // sparse tail bins would dominate the curvature test

    synthgen::GeneratorSpec lin;
    lin.seed = 601;
    lin.n_days = 60;
    synthgen::PrefKernel k;
    k.target = PrefTarget::w;
    k.a = 0.1;
    k.b = 0.5;
    k.n_elements = 10000;
    lin.kernel = k;
    auto gl = synthgen::generate(lin);
    auto cl = delta_curve(gl.store, PrefTarget::w, make_grid(gl.store), opts);

    synthgen::GeneratorSpec sub = lin;
    sub.seed = 602;
    sub.kernel->shape = "sqrt";
    sub.kernel->a = 3.0;
    auto gs = synthgen::generate(sub);
    auto cs = delta_curve(gs.store, PrefTarget::w, make_grid(gs.store), opts);

    bool ok_a = std::abs(cl.fit.a - 0.1) <= 0.01;   // within 10%
    bool ok_b = std::abs(cl.fit.b - 0.5) <= 0.125;  // within 25%
    bool ok_curv = cl.fit.curvature_t < 5.0 && cs.fit.curvature_t > 5.0;
    report(6, ok_a && ok_b && ok_curv,
           "linear kernel A/B recovered; sqrt kernel flagged by curvature",
           "A=" + num(cl.fit.a) + " B=" + num(cl.fit.b) + ", curvature linear=" +
               num(cl.fit.curvature_t) + " sqrt=" + num(cs.fit.curvature_t) + " (threshold 5)");
}

// --- criterion 7: window effect on the degree distributions -------------------

void criterion_7() {
    synthgen::GeneratorSpec rep;
    rep.seed = 701;
    rep.n_days = 56;
    rep.n_users = 20000;
    rep.repertoire = synthgen::Repertoire{.gamma = 2.2, .s_min = 1.0, .s_max = 1000.0};
    auto gr = synthgen::generate(rep);
    TimeGrid grid_r = make_grid(gr.store);
    auto dist_r = windowed_distributions(gr.store, PrefTarget::k_ip, grid_r);
    auto wf = fit_cumulative_slope(dist_r.weekly, 2.0, 200.0);
    auto ff = fit_cumulative_slope(dist_r.full, 2.0, 200.0);
    double gap_r = std::abs(wf.slope - ff.slope);
    bool ok_overlap = gap_r <= wf.stderr_slope + ff.stderr_slope;
    bool ok_gamma = std::abs(ff.slope - (-1.2)) <= 0.1;

    synthgen::GeneratorSpec age;
    age.seed = 702;
    age.n_days = 120;
    age.n_users = 400;
    age.aging = synthgen::Aging{.n_urls = 6000, .lifetime_days = 30, .gamma = 2.0,
                                .rate_min = 0.5, .rate_max = 200.0};
    auto ga = synthgen::generate(age);
    auto dist_a = windowed_distributions(ga.store, PrefTarget::k_url, make_grid(ga.store));
    auto wa = fit_cumulative_slope(dist_a.weekly, 2.0, 100.0);
    auto fa = fit_cumulative_slope(dist_a.full, 2.0, 100.0);
    double gap_a = std::abs(wa.slope - fa.slope);
    bool ok_split = gap_a > 3.0 * (wa.stderr_slope + fa.stderr_slope);

    report(7, ok_overlap && ok_gamma && ok_split,
           "stationary k_IP curves overlap; aged k_URL curves split; gamma=2.2 recovered",
           "k_IP gap=" + num(gap_r) + " (se sum " + num(wf.stderr_slope + ff.stderr_slope) +
               "), full slope=" + num(ff.slope) + " (want -1.2 +- 0.1), k_URL gap=" + num(gap_a) +
               " vs 3x se sum " + num(3.0 * (wa.stderr_slope + fa.stderr_slope)));
}

// --- criterion 8: temporal statistics ----------------------------------------

void criterion_8() {
    synthgen::GeneratorSpec spec;
    spec.seed = 801;
    spec.n_days = 70;
    spec.base_daily_clicks = 4000;
    spec.weekly_weights = {1.2, 1.3, 1.25, 1.2, 1.1, 0.5, 0.4};
    spec.hourly_weights.fill(1.0);
    for (int h = 11; h < 14; ++h) spec.hourly_weights[h] = 0.2;
    auto g = synthgen::generate(spec);
    TimeGrid grid = make_grid(g.store);

    auto series = daily_series(g.store, grid);
    std::uint64_t daily_sum = 0;
    for (auto c : series.counts) daily_sum += c;
    auto hourly = hourly_profile(g.store, grid);
    double hourly_sum = 0;
    for (std::size_t c = 0; c < 3; ++c)
        for (int h = 0; h < 24; ++h) hourly_sum += hourly.mean[c][h] * double(hourly.n_days[c]);
    bool ok_conserve = daily_sum == g.store.size() &&
                       std::abs(hourly_sum - double(g.store.size())) < 1e-6;

    auto acf = autocorrelation(series, 10);
    bool ok_acf = true;
    for (int lag = 1; lag <= 10; ++lag)
        if (lag != 7 && acf[7] <= acf[lag]) ok_acf = false;

    auto& wk = hourly.mean[std::size_t(DayClass::weekday)];
    int argmin = 0;
    for (int h = 1; h < 24; ++h)
        if (wk[h] < wk[argmin]) argmin = h;
    bool ok_dip = argmin >= 11 && argmin < 14;

    report(8, ok_conserve && ok_acf && ok_dip,
           "conservation; weekly rhythm at lag 7; planted lunch dip located",
           "events=" + std::to_string(g.store.size()) + ", acf[7]=" + num(acf[7]) +
               ", dip hour=" + std::to_string(argmin));
}

// --- criterion 9: lifetime series ---------------------------------------------

void criterion_9() {
    synthgen::GeneratorSpec spec;
    spec.seed = 901;
    spec.n_days = 300;
    spec.url_schedule = synthgen::UrlSchedule{.birth_day = 140, .death_day = 260, .n_urls = 5000};
    auto g = synthgen::generate(spec);
    auto lt = lifetime_series(g.store, make_grid(g.store));

    std::size_t peak_first = 0, peak_last = 0;
    for (std::size_t d = 1; d < lt.first_seen.size(); ++d) {
        if (lt.first_seen[d] > lt.first_seen[peak_first]) peak_first = d;
        if (lt.last_seen[d] > lt.last_seen[peak_last]) peak_last = d;
    }
    std::uint64_t fsum = 0, lsum = 0;
    for (auto c : lt.first_seen) fsum += c;
    for (auto c : lt.last_seen) lsum += c;
    bool ok = peak_first == 140 && peak_last == 260 && fsum == lt.per_url.size() &&
              lsum == lt.per_url.size();
    report(9, ok, "planted birth/death days recovered; series totals consistent",
           "first peak=" + std::to_string(peak_first) + " last peak=" + std::to_string(peak_last) +
               " urls=" + std::to_string(lt.per_url.size()));
}

// --- criterion 10: ingestion round trip -----------------------------------------

void criterion_10() {
    synthgen::GeneratorSpec spec;
    spec.seed = 1001;
    spec.n_days = 14;
    spec.n_users = 200;
    spec.n_urls = 300;
    spec.base_daily_clicks = 3000;
    auto g = synthgen::generate(spec);
    auto dir = fs::temp_directory_path();
    auto log_path = (dir / "weblog_accept.log").string();
    synthgen::emit_ncsa(g.store, log_path);

    auto ingest_once = [&](const std::string& out) {
        AnonymizerState state;
        auto [store, rep] = ingest_files({log_path}, {}, state);
        save_store(out, store, &state);
        return store;
    };
    auto p1 = (dir / "weblog_accept1.bin").string();
    auto p2 = (dir / "weblog_accept2.bin").string();
    EventStore s1 = ingest_once(p1);
    ingest_once(p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    bool ok_bits = b1.str() == b2.str() && !b1.str().empty();

    UrlFilter filter;
    bool ok_filter = filter.accepted_extensions ==
                     std::set<std::string>{"html", "htm", "shtml", "shtm", "cfm", "php", "asp",
                                           "aspx", "jsp", "txt"};

    auto sorted_values = [](InterEventSample s) {
        std::sort(s.values.begin(), s.values.end());
        return s.values;
    };
    TimeGrid grid_direct = make_grid(g.store);
    TimeGrid grid_ingested = make_grid(s1);
    bool ok_path = s1.size() == g.store.size() &&
                   daily_series(s1, grid_ingested).counts ==
                       daily_series(g.store, grid_direct).counts &&
                   sorted_values(tau_v(s1)) == sorted_values(tau_v(g.store)) &&
                   s1.user_count() == g.store.user_count() &&
                   s1.pair_count() == g.store.pair_count();

    fs::remove(log_path);
    fs::remove(p1);
    fs::remove(p2);
    report(10, ok_bits && ok_filter && ok_path,
           "deterministic ingestion; exact extension set; text path equals direct path",
           std::string("bit-identical=") + (ok_bits ? "yes" : "no") + ", downstream equal=" +
               (ok_path ? "yes" : "no"));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
