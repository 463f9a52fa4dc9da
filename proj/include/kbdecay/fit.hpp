// Power-law decay fits r(t) ~ C t^(-1/n) and continuous-exponent estimators.
#pragma once

#include "kbdecay/integrate.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace kbdecay {

struct FitWindow {
    double t_start = 1.0;
    double t_end = 500.0;

    void validate() const;
};

inline constexpr std::size_t kMinWindowSamples = 10;

struct PowerLawFit {
    int n = 0;
    double C = 0.0;
    double mse = 0.0;
    FitWindow window;
};

struct SelectionResult {
    PowerLawFit best;
    std::vector<PowerLawFit> table; // one entry per candidate, in input order
    /// Another candidate's mse equals the best one (relative 1e-12); the
    /// smaller n was kept.
    bool tie = false;
};

enum class ExponentMethod { GoldenSection, LogLogOLS };

std::string_view to_string(ExponentMethod m);

struct ExponentEstimate {
    double p = 0.0;
    double C = 0.0;
    double sse = 0.0;
    ExponentMethod method = ExponentMethod::GoldenSection;
    /// Golden section only: the minimum sits on an end of p_range, in which
    /// case the final bracket is reported.
    bool at_boundary = false;
    double bracket_low = 0.0;
    double bracket_high = 0.0;
};

struct ExponentRange {
    double low = 0.05;
    double high = 2.0;
};

/// Window samples of a scalar trajectory (t in [t_start, t_end]).
struct WindowSamples {
    std::vector<double> t;
    std::vector<double> r;
};
WindowSamples window_samples(const Trajectory &traj, const FitWindow &window);

/// Least-squares prefactor for a fixed exponent p.
double best_prefactor(std::span<const double> t, std::span<const double> r,
                      double p);

PowerLawFit fit_fixed_n(const Trajectory &traj, int n, const FitWindow &window);

SelectionResult select_n(const Trajectory &traj, std::span<const int> candidates,
                         const FitWindow &window);

ExponentEstimate fit_continuous(const Trajectory &traj, const FitWindow &window,
                                ExponentRange p_range = {});

ExponentEstimate fit_loglog(const Trajectory &traj, const FitWindow &window);

} // namespace kbdecay
