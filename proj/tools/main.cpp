// kbdecay command-line interface.
#include "kbdecay/averaging.hpp"
#include "kbdecay/config.hpp"
#include "kbdecay/cycles.hpp"
#include "kbdecay/errors.hpp"
#include "kbdecay/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

namespace {

using nlohmann::json;
using namespace kbdecay;

struct Options {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::vector<double> r0;
    double t_limit = 0.0;
    unsigned threads = 0;
    bool full = false;
};

std::filesystem::path output_dir(const Options &opt, const ExperimentConfig &config) {
    if (opt.out)
        return *opt.out;
    if (const char *env = std::getenv("KBDECAY_OUTPUT_DIR"); env && *env)
        return env;
    return config.output_dir;
}

ExperimentConfig load(const Options &opt) {
    ExperimentConfig config = load_config(opt.config);
    if (opt.seed)
        config.seed = *opt.seed;
    if (opt.full)
        config.full = true;
    return config;
}

std::string fit_table_csv(const SelectionResult &sel) {
    std::ostringstream out;
    out.precision(17);
    out << "n,C,mse\n";
    for (const auto &f : sel.table)
        out << f.n << ',' << f.C << ',' << f.mse << '\n';
    return out.str();
}

int cmd_average(const Options &opt) {
    const ExperimentConfig config = load(opt);
    const RadialDrift drift = average(config.model);
    // [numerator, denominator] per odd power 1, 3, ..., 11; integers that do
    // not fit in 64 bits are emitted as decimal strings.
    auto integer_json = [](const Integer &v) -> json {
        if (v >= std::numeric_limits<std::int64_t>::min() &&
            v <= std::numeric_limits<std::int64_t>::max())
            return v.convert_to<std::int64_t>();
        return v.str();
    };
    json coeffs = json::array();
    json powers = json::array();
    for (std::size_t k = 0; k < kMaxCoeffs; ++k) {
        coeffs.push_back({integer_json(boost::multiprecision::numerator(drift.coeffs[k])),
                          integer_json(boost::multiprecision::denominator(drift.coeffs[k]))});
        powers.push_back(2 * k + 1);
    }
    json j{{"equation", render_equation(drift)},
           {"symbolic", render_symbolic(config.model)},
           {"powers", powers},
           {"coeffs", coeffs},
           {"phase_drift", to_string(drift.phase_drift)}};
    std::cout << render_equation(drift) << '\n' << j.dump() << '\n';
    return 0;
}

int cmd_cycles(const Options &opt) {
    const ExperimentConfig config = load(opt);
    const CycleSet set = find_cycles(average(config.model));
    json roots = json::array();
    for (const auto &c : set.roots)
        roots.push_back({{"r", c.amplitude},
                         {"stability", std::string(to_string(c.stability))},
                         {"derivative", c.derivative}});
    std::cout << json{{"roots", roots}, {"rhythm_count", set.rhythm_count}}.dump(2)
              << '\n';
    return 0;
}

int cmd_decay(const Options &opt) {
    const ExperimentConfig config = load(opt);
    const auto dir = output_dir(opt, config);
    json summary = json::array();
    for (double r0 : opt.r0) {
        const DecayResult res = run_decay(config, r0);
        std::ostringstream stem;
        stem << "decay_r0_" << r0;
        write_text_file(dir / (stem.str() + ".csv"), trajectory_csv(res.trajectory));
        write_text_file(dir / (stem.str() + "_fits.csv"), fit_table_csv(res.selection));
        summary.push_back({{"r0", r0},
                           {"best_n", res.selection.best.n},
                           {"C", res.selection.best.C},
                           {"mse", res.selection.best.mse},
                           {"tie", res.selection.tie}});
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const Options &opt) {
    const ExperimentConfig config = load(opt);
    const auto dir = output_dir(opt, config);
    const SweepReport report = run_sweep(config, opt.threads);
    const json j = report_to_json(report);
    write_text_file(dir / "sweep.json", j.dump(2) + "\n");
    write_text_file(dir / "sweep.csv", report_to_csv(report));
    std::cout << j.at("aggregate").dump(2) << '\n';
    return 0;
}

int cmd_validate(const Options &opt) {
    const ExperimentConfig config = load(opt);
    const double eps = config.model.epsilon();
    const double t_limit = opt.t_limit > 0.0 ? opt.t_limit : 20.0 / eps;
    const auto dir = output_dir(opt, config);
    json out = json::array();
    bool all_within = true;
    for (double r0 : opt.r0) {
        const AveragingCheck check = validate_averaging(config, r0, t_limit);
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,r_amplitude,r_envelope\n";
        for (std::size_t i = 0; i < check.amplitude.size(); ++i)
            csv << check.amplitude.times[i] << ',' << check.amplitude.amplitude[i]
                << ',' << check.envelope.amplitude[i] << '\n';
        std::ostringstream stem;
        stem << "validate_r0_" << r0 << ".csv";
        write_text_file(dir / stem.str(), csv.str());
        const bool within = check.sup_gap <= 10.0 * eps;
        all_within = all_within && within;
        out.push_back({{"r0", r0},
                       {"t_limit", t_limit},
                       {"sup_gap", check.sup_gap},
                       {"threshold", 10.0 * eps},
                       {"within", within}});
    }
    std::cout << out.dump(2) << '\n';
    return all_within ? 0 : 2;
}

int cmd_figures(const Options &opt) {
    const ExperimentConfig config = load(opt);
    const auto dir = output_dir(opt, config);
    const auto ics = opt.r0.empty() ? default_figure_ics(config) : opt.r0;
    for (double r0 : ics) {
        const FigureFiles files = emit_figure_data(config, r0, dir);
        std::cout << files.csv.string() << '\n' << files.json.string() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Averaged amplitude equations, limit cycles and power-law decay "
                 "fits for polynomially damped oscillators"};
    app.footer(config_help() +
               "\nExit codes: 0 success, 1 configuration/usage error, 2 runtime failure.");
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("config", opt.config, "Preset name or JSON config path")->required();
        sub->add_option("--out", opt.out, "Output directory (overrides config and KBDECAY_OUTPUT_DIR)");
    };

    auto *average_cmd = app.add_subcommand("average", "Print the averaged radial drift");
    add_common(average_cmd);
    auto *cycles_cmd = app.add_subcommand("cycles", "Limit cycles of the averaged drift (JSON)");
    add_common(cycles_cmd);
    auto *decay_cmd = app.add_subcommand("decay", "Integrate and fit one or more r0");
    add_common(decay_cmd);
    decay_cmd->add_option("--r0", opt.r0, "Initial amplitude (repeatable)")->required();
    decay_cmd->add_flag("--full", opt.full, "Fit the full-oscillator envelope");
    auto *sweep_cmd = app.add_subcommand("sweep", "Seeded random-IC sweep");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--seed", opt.seed, "Override the config seed");
    sweep_cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    sweep_cmd->add_flag("--full", opt.full, "Fit the full-oscillator envelope");
    auto *validate_cmd = app.add_subcommand("validate", "Compare full-oscillator envelope with the amplitude ODE");
    add_common(validate_cmd);
    validate_cmd->add_option("--r0", opt.r0, "Initial amplitude (repeatable)")->required();
    validate_cmd->add_option("--t-end", opt.t_limit, "Horizon (default 20/epsilon)");
    auto *figures_cmd = app.add_subcommand("figures", "Write t,r,r_hat CSV and fit JSON for plotting");
    add_common(figures_cmd);
    figures_cmd->add_option("--r0", opt.r0, "Initial amplitude (repeatable)");
    figures_cmd->add_flag("--full", opt.full, "Fit the full-oscillator envelope");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*average_cmd) return cmd_average(opt);
        if (*cycles_cmd) return cmd_cycles(opt);
        if (*decay_cmd) return cmd_decay(opt);
        if (*sweep_cmd) return cmd_sweep(opt);
        if (*validate_cmd) return cmd_validate(opt);
        if (*figures_cmd) return cmd_figures(opt);
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
