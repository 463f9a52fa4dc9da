#include "kbdecay/runner.hpp"

#include "kbdecay/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>

namespace kbdecay {

using nlohmann::json;

namespace {

std::string fmt_double(double v, int precision = 17) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, precision);
    return std::string(buf.data(), ptr);
}

std::string fmt_shortest(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

json fit_to_json(const PowerLawFit &f) {
    return {{"n", f.n}, {"C", f.C}, {"mse", f.mse}};
}

json selection_to_json(const SelectionResult &s) {
    json table = json::array();
    for (const auto &f : s.table)
        table.push_back(fit_to_json(f));
    return {{"best", fit_to_json(s.best)}, {"tie", s.tie}, {"table", table}};
}

IntegratorSettings scaled_settings(const IntegratorSettings &base, double t_end) {
    IntegratorSettings s = base;
    s.t_end = t_end;
    s.output_times.clear();
    return s;
}

} // namespace

std::vector<double> sample_ics(Interval interval, std::size_t count,
                               std::uint64_t seed) {
    if (!(interval.low > 0.0) || !(interval.low < interval.high) ||
        !std::isfinite(interval.high))
        throw InvalidInterval("need 0 < low < high, got (" +
                              fmt_shortest(interval.low) + ", " +
                              fmt_shortest(interval.high) + ")");
    std::mt19937_64 engine(seed);
    std::vector<double> out;
    out.reserve(count);
    const double width = interval.high - interval.low;
    while (out.size() < count) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        const double v = interval.low + width * u;
        if (v > interval.low && v < interval.high)
            out.push_back(v);
    }
    return out;
}

DecayResult run_decay(const ExperimentConfig &config, double r0) {
    DecayResult result;
    if (config.full) {
        const Trajectory planar = integrate_full(config.model, r0, 0.0, config.integrator);
        result.trajectory = envelope(planar, config.model.omega());
    } else {
        result.trajectory = integrate_amplitude(average(config.model),
                                                config.model.epsilon(), r0,
                                                config.integrator);
    }
    result.selection = select_n(result.trajectory, config.candidates, config.window);
    return result;
}

std::string config_hash(const ExperimentConfig &config) {
    const std::string text = config_to_json(config).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::array<char, 17> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), h, 16);
    std::string hex(buf.data(), ptr);
    return std::string(16 - hex.size(), '0') + hex;
}

SweepReport run_sweep(const ExperimentConfig &config, unsigned threads) {
    config.validate();
    const auto ics = sample_ics(config.ic_interval, config.ic_count, config.seed);

    SweepReport report;
    report.records.resize(ics.size());
    report.seed = config.seed;
    report.config_hash = config_hash(config);

    // Every IC writes only its own slot, so the result is independent of
    // scheduling.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ics.size(); i = next++) {
            ICRecord &rec = report.records[i];
            rec.index = i;
            rec.r0 = ics[i];
            try {
                rec.selection = run_decay(config, ics[i]).selection;
                rec.ok = true;
            } catch (const Error &e) {
                rec.ok = false;
                rec.error = e.what();
            }
        }
    };
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, ics.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    std::size_t successes = 0;
    std::map<int, double> mse_sum;
    for (const auto &rec : report.records) {
        if (!rec.ok) {
            ++report.failures;
            continue;
        }
        ++successes;
        ++report.histogram[rec.selection.best.n];
        for (const auto &f : rec.selection.table)
            mse_sum[f.n] += f.mse;
    }
    if (successes > 0) {
        std::size_t modal_count = 0;
        for (const auto &[n, count] : report.histogram) {
            report.fractions[n] = static_cast<double>(count) / static_cast<double>(successes);
            if (count > modal_count) {
                modal_count = count;
                report.modal_n = n;
            }
        }
        report.modal_fraction = report.fractions[report.modal_n];
        double best = 0.0;
        for (const auto &[n, sum] : mse_sum) {
            const double mean = sum / static_cast<double>(successes);
            report.mean_mse[n] = mean;
            if (report.aggregate_best_n == 0 || mean < best) {
                best = mean;
                report.aggregate_best_n = n;
            }
        }
    }
    return report;
}

json report_to_json(const SweepReport &report) {
    json records = json::array();
    for (const auto &rec : report.records) {
        json r{{"index", rec.index}, {"r0", rec.r0}, {"ok", rec.ok}};
        if (rec.ok)
            r["fit"] = selection_to_json(rec.selection);
        else
            r["error"] = rec.error;
        records.push_back(r);
    }
    json histogram = json::object();
    json fractions = json::object();
    for (const auto &[n, count] : report.histogram)
        histogram[std::to_string(n)] = count;
    for (const auto &[n, frac] : report.fractions)
        fractions[std::to_string(n)] = frac;
    json mean_mse = json::object();
    for (const auto &[n, mse] : report.mean_mse)
        mean_mse[std::to_string(n)] = mse;
    return {
        {"records", records},
        {"aggregate",
         {{"successes", report.records.size() - report.failures},
          {"failures", report.failures},
          {"histogram", histogram},
          {"fractions", fractions},
          {"modal_n", report.modal_n},
          {"modal_fraction", report.modal_fraction},
          {"mean_mse", mean_mse},
          {"aggregate_best_n", report.aggregate_best_n}}},
        {"provenance",
         {{"config_hash", report.config_hash},
          {"seed", report.seed},
          {"version", report.version}}},
    };
}

std::string report_to_csv(const SweepReport &report) {
    std::string out = "index,r0,status,best_n,C,mse,tie\n";
    for (const auto &rec : report.records) {
        out += std::to_string(rec.index) + "," + fmt_double(rec.r0) + ",";
        if (rec.ok) {
            const auto &b = rec.selection.best;
            out += "ok," + std::to_string(b.n) + "," + fmt_double(b.C) + "," +
                   fmt_double(b.mse) + "," + (rec.selection.tie ? "1" : "0");
        } else {
            out += "failed,,,,";
        }
        out += "\n";
    }
    return out;
}

std::string trajectory_csv(const Trajectory &traj) {
    std::string out;
    if (traj.mode == TrajectoryMode::Scalar) {
        out = "t,r\n";
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            out += fmt_double(traj.times[i]) + "," + fmt_double(traj.amplitude[i]) + "\n";
    } else {
        out = "t,x,v\n";
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            out += fmt_double(traj.times[i]) + "," + fmt_double(traj.states[i][0]) +
                   "," + fmt_double(traj.states[i][1]) + "\n";
    }
    return out;
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IOError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw IOError("failed writing '" + path.string() + "'");
}

FigureFiles emit_figure_data(const ExperimentConfig &config, double r0,
                             const std::filesystem::path &dir,
                             const std::string &prefix) {
    const DecayResult decay = run_decay(config, r0);
    const auto &best = decay.selection.best;
    const double p = 1.0 / best.n;

    std::string csv = "t,r,r_hat\n";
    const auto &traj = decay.trajectory;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t <= 0.0)
            continue; // the fitted law is singular at t = 0
        csv += fmt_double(t) + "," + fmt_double(traj.amplitude[i]) + "," +
               fmt_double(best.C * std::pow(t, -p)) + "\n";
    }

    json sidecar{
        {"model", model_to_json(config.model)},
        {"r0", r0},
        {"mode", config.full ? "full-envelope" : "amplitude"},
        {"window", {config.window.t_start, config.window.t_end}},
        {"fit", selection_to_json(decay.selection)},
        {"version", kVersion},
    };

    const std::string stem = prefix + "_r0_" + fmt_shortest(r0);
    FigureFiles files{dir / (stem + ".csv"), dir / (stem + ".json")};
    write_text_file(files.csv, csv);
    write_text_file(files.json, sidecar.dump(2) + "\n");
    return files;
}

std::vector<double> default_figure_ics(const ExperimentConfig &config) {
    static const std::array<std::pair<const char *, std::vector<double>>, 4> table{{
        {"vdp-bi", {3.16, 3.81}},
        {"vdp-mono", {3.97, 4.23}},
        {"rayleigh-bi", {1.77, 2.51}},
        {"rayleigh-mono", {2.0, 2.23}},
    }};
    for (const auto &[name, ics] : table)
        if (preset_config(name).model == config.model)
            return ics;
    return {0.5 * (config.ic_interval.low + config.ic_interval.high)};
}

AveragingCheck validate_averaging(const ExperimentConfig &config, double r0,
                                  double t_limit) {
    if (!(t_limit > 0.0))
        throw InvalidParameter("validation horizon must be positive");
    const IntegratorSettings settings = scaled_settings(config.integrator, t_limit);
    AveragingCheck check;
    check.t_limit = t_limit;
    check.amplitude = integrate_amplitude(average(config.model),
                                          config.model.epsilon(), r0, settings);
    check.envelope = envelope(integrate_full(config.model, r0, 0.0, settings),
                              config.model.omega());
    check.sup_gap = sup_gap(check.envelope, check.amplitude, t_limit);
    return check;
}

} // namespace kbdecay
