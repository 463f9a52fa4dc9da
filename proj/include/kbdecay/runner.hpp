// Batch orchestration: seeded initial conditions, per-IC integrate -> fit
// pipeline, aggregate statistics and figure data.
#pragma once

#include "kbdecay/config.hpp"
#include "kbdecay/fit.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kbdecay {

inline constexpr const char *kVersion = "kbdecay 0.1.0";

/// `count` uniform draws strictly inside (low, high). The mapping from the
/// mt19937_64 stream to doubles is explicit so the sequence is identical on
/// every platform. Throws InvalidInterval unless 0 < low < high.
std::vector<double> sample_ics(Interval interval, std::size_t count,
                               std::uint64_t seed);

struct DecayResult {
    Trajectory trajectory; // scalar: amplitude ODE or envelope of the full run
    SelectionResult selection;
};

/// Integrate from r0 (x0 = r0, v0 = 0 in full mode) and select n.
DecayResult run_decay(const ExperimentConfig &config, double r0);

struct ICRecord {
    std::size_t index = 0;
    double r0 = 0.0;
    bool ok = false;
    std::string error;
    SelectionResult selection;
};

struct SweepReport {
    std::vector<ICRecord> records;
    std::size_t failures = 0;
    std::map<int, std::size_t> histogram;     // best n -> count
    std::map<int, double> fractions;          // best n -> share of successes
    int modal_n = 0;
    double modal_fraction = 0.0;
    std::map<int, double> mean_mse;           // candidate n -> mean over ICs
    int aggregate_best_n = 0;                 // argmin of mean_mse
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version = kVersion;
};

/// Runs every IC; divergent ones are recorded, not fatal. `threads` = 0 uses
/// hardware concurrency. Results do not depend on the thread count.
SweepReport run_sweep(const ExperimentConfig &config, unsigned threads = 0);

nlohmann::json report_to_json(const SweepReport &report);
/// One row per IC: index,r0,status,best_n,C,mse,tie.
std::string report_to_csv(const SweepReport &report);

/// FNV-1a 64 over the canonical JSON dump of the config.
std::string config_hash(const ExperimentConfig &config);

struct FigureFiles {
    std::filesystem::path csv;
    std::filesystem::path json;
};

/// Writes `<prefix>_r0_<r0>.csv` (t,r,r_hat) and a JSON sidecar with the fit
/// table into `dir`. Throws IOError when the files cannot be written.
FigureFiles emit_figure_data(const ExperimentConfig &config, double r0,
                             const std::filesystem::path &dir,
                             const std::string &prefix = "figure");

struct AveragingCheck {
    Trajectory amplitude;
    Trajectory envelope;
    double sup_gap = 0.0;
    double t_limit = 0.0;
};

/// Envelope of the full oscillator (x0 = r0, v0 = 0) against the amplitude
/// ODE on [0, t_limit], both sampled on the same uniform grid.
AveragingCheck validate_averaging(const ExperimentConfig &config, double r0,
                                  double t_limit);

/// Initial amplitudes used for figure data: the two per-preset values shown
/// in the reference figures when the model matches a preset, otherwise the
/// midpoint of the IC interval.
std::vector<double> default_figure_ics(const ExperimentConfig &config);

/// Trajectory CSV: "t,r" or "t,x,v", 17 significant digits.
std::string trajectory_csv(const Trajectory &traj);

void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace kbdecay
