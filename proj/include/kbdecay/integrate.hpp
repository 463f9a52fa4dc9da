// Adaptive Dormand-Prince 5(4) integration of the averaged amplitude ODE and
// of the full planar oscillator.
#pragma once

#include "kbdecay/averaging.hpp"
#include "kbdecay/model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace kbdecay {

struct IntegratorSettings {
    double rtol = 1e-9;
    double atol = 1e-12;
    double t_end = 500.0;
    /// Uniform grid of `samples` points on [0, t_end]; ignored when
    /// `output_times` is non-empty.
    std::size_t samples = 2000;
    std::vector<double> output_times;
    /// Divergence bound on the amplitude. Unset means
    /// 10 * max(r0, largest drift root, 1).
    std::optional<double> r_max;
    std::uint64_t max_steps = 10'000'000;

    void validate() const;
    std::vector<double> grid() const;
};

enum class TrajectoryMode { Scalar, Planar };

struct Trajectory {
    TrajectoryMode mode = TrajectoryMode::Scalar;
    std::vector<double> times;
    /// Scalar mode: r(t).
    std::vector<double> amplitude;
    /// Planar mode: (x, x').
    std::vector<std::array<double, 2>> states;
    double rtol = 0.0;
    double atol = 0.0;
    std::uint64_t steps = 0;

    std::size_t size() const noexcept { return times.size(); }
};

/// Scalar trajectory of dr/dt = eps * drift(r). Throws InvalidParameter for
/// r0 <= 0 and Divergence when r exceeds r_max or max_steps runs out.
Trajectory integrate_amplitude(const RadialDrift &drift, double epsilon,
                               double r0, const IntegratorSettings &settings);

/// Closed-form amplitude 2 / sqrt(4/r0^2 + eps t) for the a = 0 classic VdP.
double exact_monorhythmic(double r0, double epsilon, double t);

/// Planar trajectory of x' = v, v' = -omega^2 x - eps g(s) v.
Trajectory integrate_full(const OscillatorModel &model, double x0, double v0,
                          const IntegratorSettings &settings);

/// r = sqrt(x^2 + v^2/omega^2) on the same grid. ModeMismatch on scalar input.
Trajectory envelope(const Trajectory &planar, double omega);

/// Largest |a(t) - b(t)| over points with t <= t_limit. Both trajectories
/// must be scalar and share the time grid.
double sup_gap(const Trajectory &a, const Trajectory &b, double t_limit);

} // namespace kbdecay
