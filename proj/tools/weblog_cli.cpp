#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "weblog/ingest.hpp"
#include "weblog/interevent.hpp"
#include "weblog/lifetime.hpp"
#include "weblog/prefattach.hpp"
#include "weblog/queue_sim.hpp"
#include "weblog/synthgen.hpp"
#include "weblog/temporal.hpp"

using nlohmann::json;
using namespace weblog;

namespace {

// Shortest round-trip decimal rendering; regression tests compare bytes.
std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

void atomic_write(const std::string& path, const std::string& body) {
    if (path.empty()) throw IoError("empty output path");
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out << body;
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

// Every artifact carries the tool version and the fully materialized config.
std::string csv_header(const json& config) {
    return std::string("# version=") + WEBLOG_VERSION + "\n# config=" + config.dump() + "\n";
}

json json_envelope(json config, json payload) {
    json out;
    out["version"] = WEBLOG_VERSION;
    out["config"] = std::move(config);
    out["result"] = std::move(payload);
    return out;
}

void write_json(const std::string& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

EventStore open_store(const std::string& path, std::int64_t /*tz*/) { return load_store(path); }

json fit_json(const PowerLawFit& f, const char* method) {
    return {{"slope", f.slope},   {"intercept", f.intercept}, {"stderr", f.stderr_slope},
            {"x_lo", f.x_lo},     {"x_hi", f.x_hi},           {"n_bins", f.n_bins},
            {"method", method}};
}

std::string hist_csv(const LogBinnedHistogram& h, const json& config) {
    std::string out = csv_header(config);
    out += "bin_lo,bin_hi,count,density\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out += fmt(h.edges[i]) + "," + fmt(h.edges[i + 1]) + "," + fmt(h.counts[i]) + "," +
               fmt(h.density[i]) + "\n";
    return out;
}

PrefTarget parse_target(const std::string& name) {
    if (name == "kip") return PrefTarget::k_ip;
    if (name == "kurl") return PrefTarget::k_url;
    if (name == "w") return PrefTarget::w;
    throw CLI::ValidationError("--target", "expected kip, kurl or w");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"web access log analytics and queue-model simulator"};
    app.set_version_flag("--version", std::string(WEBLOG_VERSION));
    app.require_subcommand(1);

    std::int64_t tz = -14400;
    app.add_option("--tz", tz, "utc offset in seconds for day/hour bucketing")
        ->capture_default_str();

    // ---- ingest ----------------------------------------------------------
    auto* c_ingest = app.add_subcommand("ingest", "parse NCSA logs into a binary store");
    std::vector<std::string> in_files;
    std::string out_store, report_path;
    std::vector<std::string> extensions;
    bool keep_errors = false, keep_query = false, from_tsv = false;
    c_ingest->add_option("--input", in_files, "log files (gzip accepted)")->required();
    c_ingest->add_option("--out", out_store, "output store path")->required();
    c_ingest->add_option("--report", report_path, "ingest report JSON");
    c_ingest->add_option("--ext", extensions, "override accepted extensions");
    c_ingest->add_flag("--keep-errors", keep_errors, "retain status >= 400 responses");
    c_ingest->add_flag("--keep-query", keep_query, "keep query strings in page identity");
    c_ingest->add_flag("--tsv", from_tsv, "input is pre-anonymized user\\turl\\ttimestamp");

    // ---- store-driven analyses -------------------------------------------
    std::string store_path, out_path, fit_path, aux_path;
    auto add_store_io = [&](CLI::App* cmd) {
        cmd->add_option("--store", store_path, "binary store input")->required();
        cmd->add_option("--out", out_path, "output file")->required();
    };

    auto* c_daily = app.add_subcommand("daily", "clicks per day");
    add_store_io(c_daily);

    auto* c_dow = app.add_subcommand("dow", "day-of-week averages with 2-sigma bands");
    add_store_io(c_dow);

    auto* c_hourly = app.add_subcommand("hourly", "hourly profile per day class");
    add_store_io(c_hourly);

    auto* c_week = app.add_subcommand("week-compare", "one week against the weekday means");
    add_store_io(c_week);
    std::int64_t week_start = 0;
    c_week->add_option("--week-start", week_start, "first day index of the target week")
        ->required();

    auto* c_tau = app.add_subcommand("tau", "inter-event time histogram and fit");
    add_store_io(c_tau);
    std::string tau_kind = "visit";
    double bin_b = 1.3, fit_lo = 0, fit_hi = 0;
    c_tau->add_option("--kind", tau_kind, "visit (same url) or click (any url)")
        ->check(CLI::IsMember({"visit", "click"}))
        ->capture_default_str();
    c_tau->add_option("--b", bin_b, "log-bin growth factor")->capture_default_str();
    c_tau->add_option("--fit-lo", fit_lo, "fit range low edge (0 = auto)");
    c_tau->add_option("--fit-hi", fit_hi, "fit range high edge (0 = auto)");
    c_tau->add_option("--fit-out", fit_path, "fit summary JSON");

    auto* c_pref = app.add_subcommand("prefattach", "one-day growth vs accumulated count");
    add_store_io(c_pref);
    std::string target_name = "w";
    std::size_t window_days = 7, min_bin = 10;
    bool disjoint = false;
    c_pref->add_option("--target", target_name, "kip, kurl or w")->capture_default_str();
    c_pref->add_option("--window", window_days, "accumulation window in days")
        ->capture_default_str();
    c_pref->add_option("--b", bin_b, "log-bin growth factor")->capture_default_str();
    c_pref->add_option("--min-bin", min_bin, "minimum samples per fitted bin")
        ->capture_default_str();
    c_pref->add_flag("--disjoint", disjoint, "disjoint weeks instead of sliding windows");
    c_pref->add_option("--fit-out", fit_path, "fit summary JSON");

    auto* c_dist = app.add_subcommand("distributions", "weekly vs full-span cumulative curves");
    add_store_io(c_dist);
    c_dist->add_option("--target", target_name, "kip, kurl or w")->capture_default_str();

    auto* c_life = app.add_subcommand("lifetime", "url first/last-seen series");
    add_store_io(c_life);
    c_life->add_option("--per-url", aux_path, "per-url TSV output");

    // ---- simulation -------------------------------------------------------
    auto* c_sim = app.add_subcommand("simulate", "priority-queue waiting-time model");
    QueueConfig qc;
    qc.steps = 1000000;
    c_sim->add_option("--tasks", qc.tasks, "queue length L")->capture_default_str();
    c_sim->add_option("--p", qc.p, "probability of priority selection")->capture_default_str();
    c_sim->add_option("--nu", qc.nu, "tasks executed per step")->capture_default_str();
    c_sim->add_option("--steps", qc.steps, "time steps")->capture_default_str();
    c_sim->add_option("--seed", qc.seed, "rng seed")->capture_default_str();
    c_sim->add_option("--out", out_path, "histogram CSV")->required();
    c_sim->add_option("--b", bin_b, "log-bin growth factor")->capture_default_str();
    c_sim->add_option("--fit-lo", fit_lo, "fit range low edge (0 = auto)");
    c_sim->add_option("--fit-hi", fit_hi, "fit range high edge (0 = auto)");
    c_sim->add_option("--fit-out", fit_path, "fit summary JSON");

    auto* c_sweep = app.add_subcommand("sweep", "fitted exponent per batch size");
    std::vector<std::size_t> nus{1, 2, 3, 4, 5};
    double sweep_lo = 2.0, sweep_hi = 1000.0;
    c_sweep->add_option("--tasks", qc.tasks, "queue length L")->capture_default_str();
    c_sweep->add_option("--p", qc.p, "probability of priority selection")->capture_default_str();
    c_sweep->add_option("--steps", qc.steps, "time steps")->capture_default_str();
    c_sweep->add_option("--seed", qc.seed, "rng seed")->capture_default_str();
    c_sweep->add_option("--nu", nus, "batch sizes")->capture_default_str();
    c_sweep->add_option("--fit-lo", sweep_lo, "fit range low edge")->capture_default_str();
    c_sweep->add_option("--fit-hi", sweep_hi, "fit range high edge")->capture_default_str();
    c_sweep->add_option("--out", out_path, "sweep table JSON")->required();

    // ---- generation -------------------------------------------------------
    auto* c_gen = app.add_subcommand("generate", "synthetic log with planted dynamics");
    std::string spec_path, truth_path, ncsa_path;
    c_gen->add_option("--spec", spec_path, "generator spec JSON")->required();
    c_gen->add_option("--out", out_path, "output store path")->required();
    c_gen->add_option("--truth", truth_path, "ground-truth manifest JSON");
    c_gen->add_option("--ncsa", ncsa_path, "also emit NCSA-format text");

    auto* c_prof = app.add_subcommand("profile", "single-user activity metrics");
    add_store_io(c_prof);
    std::uint64_t profile_user = 0;
    c_prof->add_option("--user", profile_user, "user id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json config;
        config["tz"] = tz;
        TimeGrid grid;

        if (*c_ingest) {
            config["command"] = "ingest";
            config["input"] = in_files;
            config["keep_errors"] = keep_errors;
            config["keep_query"] = keep_query;
            config["tsv"] = from_tsv;
            if (from_tsv) {
                if (in_files.size() != 1) throw DataError("--tsv expects exactly one input");
                EventStore store = load_tsv(in_files[0]);
                save_store(out_store, store);
                if (!report_path.empty())
                    write_json(report_path,
                               json_envelope(config, {{"events", store.size()}}));
                return 0;
            }
            IngestOptions opt;
            opt.keep_error_status = keep_errors;
            opt.strip_query = !keep_query;
            if (!extensions.empty())
                opt.filter.accepted_extensions = {extensions.begin(), extensions.end()};
            config["extensions"] = std::vector<std::string>(
                opt.filter.accepted_extensions.begin(), opt.filter.accepted_extensions.end());
            AnonymizerState state;
            auto [store, report] = ingest_files(in_files, opt, state);
            save_store(out_store, store, &state);
            if (!report_path.empty())
                write_json(report_path,
                           json_envelope(config, {{"lines_read", report.lines_read},
                                                  {"events", report.events},
                                                  {"rejected_by_filter", report.rejected_by_filter},
                                                  {"skipped_malformed", report.skipped_malformed},
                                                  {"error_status_dropped",
                                                   report.error_status_dropped}}));
            return 0;
        }

        if (*c_daily) {
            config["command"] = "daily";
            config["store"] = store_path;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto d = daily_series(store, grid);
            std::string out = csv_header(config) + "date,count\n";
            for (std::size_t i = 0; i < d.counts.size(); ++i)
                out += day_label(grid, d.first_day + std::int64_t(i)) + "," + fmt(d.counts[i]) +
                       "\n";
            atomic_write(out_path, out);
        } else if (*c_dow) {
            config["command"] = "dow";
            config["store"] = store_path;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto prof = day_of_week_profile(daily_series(store, grid), grid);
            static const char* names[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
            std::string out = csv_header(config) + "day,mean,sigma,band,n\n";
            for (int w = 0; w < 7; ++w)
                out += std::string(names[w]) + "," + fmt(prof.mean[w]) + "," + fmt(prof.sigma[w]) +
                       "," + fmt(prof.band(w)) + "," + std::to_string(prof.n[w]) + "\n";
            atomic_write(out_path, out);
        } else if (*c_hourly) {
            config["command"] = "hourly";
            config["store"] = store_path;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto prof = hourly_profile(store, grid);
            static const char* classes[] = {"weekday", "saturday", "sunday"};
            std::string out = csv_header(config) + "class,hour,mean\n";
            for (std::size_t c = 0; c < 3; ++c)
                for (int h = 0; h < 24; ++h)
                    out += std::string(classes[c]) + "," + std::to_string(h) + "," +
                           fmt(prof.mean[c][h]) + "\n";
            atomic_write(out_path, out);
        } else if (*c_week) {
            config["command"] = "week-compare";
            config["store"] = store_path;
            config["week_start"] = week_start;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto series = daily_series(store, grid);
            auto prof = day_of_week_profile(series, grid);
            auto rows = compare_week(series, week_start, prof, grid);
            std::string out = csv_header(config) + "date,observed,mean,z\n";
            for (const auto& r : rows)
                out += day_label(grid, r.day_index) + "," + fmt(r.observed) + "," + fmt(r.mean) +
                       "," + (r.z_defined ? fmt(r.z) : std::string("nan")) + "\n";
            atomic_write(out_path, out);
        } else if (*c_tau) {
            config["command"] = "tau";
            config["store"] = store_path;
            config["kind"] = tau_kind;
            config["b"] = bin_b;
            EventStore store = open_store(store_path, tz);
            auto sample = tau_kind == "visit" ? tau_v(store) : tau_c(store);
            std::vector<double> values(sample.values.begin(), sample.values.end());
            auto hist = log_bin(values, bin_b, 1.0);
            config["zero_gaps"] = sample.zero_gaps;
            atomic_write(out_path, hist_csv(hist, config));
            if (!fit_path.empty()) {
                auto fit = fit_lo > 0 && fit_hi > 0 ? fit_slope(hist, fit_lo, fit_hi)
                                                    : fit_slope(hist);
                json payload = fit_json(fit, "least_squares");
                payload["mle"] = fit_json(fit_mle(values, fit.x_lo, fit.x_hi), "hill_mle");
                write_json(fit_path, json_envelope(config, payload));
            }
        } else if (*c_pref) {
            config["command"] = "prefattach";
            config["store"] = store_path;
            config["target"] = target_name;
            PrefOptions opts;
            opts.window_days = window_days;
            opts.sliding = !disjoint;
            opts.bin_factor = bin_b;
            opts.min_bin_samples = min_bin;
            config["window_days"] = opts.window_days;
            config["sliding"] = opts.sliding;
            config["b"] = opts.bin_factor;
            config["min_bin_samples"] = opts.min_bin_samples;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto curve = delta_curve(store, parse_target(target_name), grid, opts);
            std::string out = csv_header(config) + "x_bin_center,mean_dx,n,in_fit\n";
            for (const auto& b : curve.bins)
                out += fmt(b.x_mean) + "," + fmt(b.dx_mean) + "," + std::to_string(b.n) + "," +
                       (b.in_fit ? "1" : "0") + "\n";
            atomic_write(out_path, out);
            if (!fit_path.empty())
                write_json(fit_path,
                           json_envelope(config, {{"A", curve.fit.a},
                                                  {"B", curve.fit.b},
                                                  {"stderrA", curve.fit.stderr_a},
                                                  {"stderrB", curve.fit.stderr_b},
                                                  {"curvature_t", curve.fit.curvature_t},
                                                  {"n_bins", curve.fit.n},
                                                  {"x0_dx_mean", curve.x0_dx_mean},
                                                  {"x0_n", curve.x0_n}}));
        } else if (*c_dist) {
            config["command"] = "distributions";
            config["store"] = store_path;
            config["target"] = target_name;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto pair = windowed_distributions(store, parse_target(target_name), grid);
            // both curves live on the weekly union grid; evaluate full stepwise
            std::string out = csv_header(config) + "x,C_weekly,C_full\n";
            std::size_t j = 0;
            double full_c = 1.0;
            for (std::size_t i = 0; i < pair.weekly.x.size(); ++i) {
                double x = pair.weekly.x[i];
                while (j < pair.full.x.size() && pair.full.x[j] <= x) full_c = pair.full.c[j++];
                double cf = x < pair.full.x.front() ? 1.0
                            : x > pair.full.x.back() ? 0.0
                                                     : full_c;
                out += fmt(x) + "," + fmt(pair.weekly.c[i]) + "," + fmt(cf) + "\n";
            }
            atomic_write(out_path, out);
        } else if (*c_life) {
            config["command"] = "lifetime";
            config["store"] = store_path;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto lt = lifetime_series(store, grid);
            std::string out = csv_header(config) + "day,first_seen,last_seen\n";
            for (std::size_t d = 0; d < lt.first_seen.size(); ++d)
                out += std::to_string(lt.first_day + std::int64_t(d)) + "," +
                       fmt(lt.first_seen[d]) + "," + fmt(lt.last_seen[d]) + "\n";
            atomic_write(out_path, out);
            if (!aux_path.empty()) {
                std::string tsv = csv_header(config);
                tsv += "url_id\tfirst_day\tlast_day\tclicks\tcensored_left\tcensored_right\n";
                for (const auto& u : lt.per_url)
                    tsv += std::to_string(u.url_id) + "\t" + std::to_string(u.first_day) + "\t" +
                           std::to_string(u.last_day) + "\t" + std::to_string(u.clicks) + "\t" +
                           (u.censored_left ? "1" : "0") + "\t" + (u.censored_right ? "1" : "0") +
                           "\n";
                atomic_write(aux_path, tsv);
            }
        } else if (*c_sim) {
            config["command"] = "simulate";
            config["tasks"] = qc.tasks;
            config["p"] = qc.p;
            config["nu"] = qc.nu;
            config["steps"] = qc.steps;
            config["seed"] = qc.seed;
            config["b"] = bin_b;
            WaitSample sample = simulate(qc);
            auto hist = log_bin_counts(sample.as_value_counts(), bin_b, 1.0);
            config["censored"] = sample.censored;
            config["total"] = sample.total;
            atomic_write(out_path, hist_csv(hist, config));
            if (!fit_path.empty()) {
                auto fit = fit_lo > 0 && fit_hi > 0 ? fit_slope(hist, fit_lo, fit_hi)
                                                    : fit_slope(hist);
                write_json(fit_path, json_envelope(config, fit_json(fit, "least_squares")));
            }
        } else if (*c_sweep) {
            config["command"] = "sweep";
            config["tasks"] = qc.tasks;
            config["p"] = qc.p;
            config["steps"] = qc.steps;
            config["seed"] = qc.seed;
            config["nu"] = nus;
            config["fit_lo"] = sweep_lo;
            config["fit_hi"] = sweep_hi;
            auto rows = exponent_sweep(qc, nus, sweep_lo, sweep_hi);
            json table = json::array();
            for (const auto& r : rows)
                table.push_back({{"nu", r.nu}, {"fit", fit_json(r.fit, "least_squares")}});
            write_json(out_path, json_envelope(config, table));
        } else if (*c_gen) {
            config["command"] = "generate";
            std::ifstream in(spec_path);
            if (!in) throw IoError("cannot open spec: " + spec_path);
            json j = json::parse(in);
            auto spec = synthgen::spec_from_json(j);
            config["spec"] = synthgen::spec_to_json(spec);
            auto g = synthgen::generate(spec);
            save_store(out_path, g.store);
            if (!truth_path.empty()) write_json(truth_path, json_envelope(config, g.ground_truth));
            if (!ncsa_path.empty()) synthgen::emit_ncsa(g.store, ncsa_path);
        } else if (*c_prof) {
            config["command"] = "profile";
            config["store"] = store_path;
            config["user"] = profile_user;
            EventStore store = open_store(store_path, tz);
            grid = make_grid(store, tz);
            auto p = user_profile(store, std::uint32_t(profile_user), grid);
            json payload = {{"user_id", p.user_id},
                            {"events", p.timestamps.size()},
                            {"max_per_minute", p.max_per_minute},
                            {"active_days", p.active_days}};
            if (p.cv)
                payload["cv"] = *p.cv;
            else
                payload["cv"] = nullptr;
            write_json(out_path, json_envelope(config, payload));
        }
        return 0;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
