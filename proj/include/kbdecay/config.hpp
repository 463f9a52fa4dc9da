// Experiment configuration: JSON schema, presets, and model serialization.
#pragma once

#include "kbdecay/fit.hpp"
#include "kbdecay/integrate.hpp"
#include "kbdecay/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kbdecay {

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

struct ExperimentConfig {
    explicit ExperimentConfig(OscillatorModel m) : model(std::move(m)) {}

    OscillatorModel model;
    Interval ic_interval{2.4, 4.91};
    std::size_t ic_count = 1000;
    std::uint64_t seed = 42;
    IntegratorSettings integrator;
    FitWindow window;
    std::vector<int> candidates{1, 2, 3, 4, 5, 6};
    std::string output_dir = "kbdecay-out";
    /// Fit the envelope of the full oscillator instead of the amplitude ODE.
    bool full = false;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// Named-parameter block when the coefficients follow the a/alpha/... pattern,
/// otherwise an explicit "coeffs" list of "p/q" strings.
nlohmann::json model_to_json(const OscillatorModel &model);
OscillatorModel model_from_json(const nlohmann::json &j);

nlohmann::json config_to_json(const ExperimentConfig &config);
/// Unknown keys and malformed values raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json &j);

/// Built-in presets: vdp-mono, vdp-bi, rayleigh-mono, rayleigh-bi.
const std::vector<std::string> &preset_names();
ExperimentConfig preset_config(std::string_view name);

/// A preset name or a path to a JSON config file.
ExperimentConfig load_config(const std::string &name_or_path);

/// Text printed by `kbdecay --help` describing every key and its default.
std::string config_help();

} // namespace kbdecay
