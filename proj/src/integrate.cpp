#include "kbdecay/integrate.hpp"

#include "kbdecay/cycles.hpp"
#include "kbdecay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kbdecay {

void IntegratorSettings::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw InvalidParameter("rtol and atol must be positive");
    if (!(t_end > 0.0))
        throw InvalidParameter("t_end must be positive");
    if (max_steps == 0)
        throw InvalidParameter("max_steps must be positive");
    if (r_max && !(*r_max > 0.0))
        throw InvalidParameter("r_max must be positive");
    if (output_times.empty()) {
        if (samples < 2)
            throw InvalidParameter("output grid needs at least 2 samples");
    } else {
        for (std::size_t i = 0; i < output_times.size(); ++i) {
            if (output_times[i] < 0.0 || !std::isfinite(output_times[i]))
                throw InvalidParameter("output times must be finite and >= 0");
            if (i > 0 && !(output_times[i] > output_times[i - 1]))
                throw InvalidParameter("output times must be strictly increasing");
        }
    }
}

std::vector<double> IntegratorSettings::grid() const {
    if (!output_times.empty())
        return output_times;
    std::vector<double> g(samples);
    const double last = static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i)
        g[i] = t_end * (static_cast<double>(i) / last);
    g.back() = t_end;
    return g;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Fifth-order solution minus embedded fourth-order one.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N> using State = std::array<double, N>;

template <std::size_t N>
State<N> axpy(const State<N> &y, double h,
              std::initializer_list<std::pair<double, const State<N> *>> terms) {
    State<N> out = y;
    for (const auto &[coef, k] : terms)
        for (std::size_t i = 0; i < N; ++i)
            out[i] += h * coef * (*k)[i];
    return out;
}

struct StepStats {
    std::uint64_t steps = 0;
};

// Integrates y' = f(y) and records y at each grid time. Steps are clipped so
// that every grid time is hit exactly. `amplitude` maps a state to the
// quantity checked against r_max.
template <std::size_t N, class Rhs, class Amplitude>
std::vector<State<N>> dopri5(Rhs &&f, Amplitude &&amplitude, State<N> y,
                             const std::vector<double> &grid, double rtol,
                             double atol, double r_max, std::uint64_t max_steps,
                             StepStats &stats) {
    std::vector<State<N>> out;
    out.reserve(grid.size());
    double t = 0.0;
    std::size_t next = 0;
    while (next < grid.size() && grid[next] <= 0.0) {
        out.push_back(y);
        ++next;
    }
    if (next == grid.size())
        return out;

    State<N> k1 = f(y);
    // Initial step from the scale of y and y'.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = atol + rtol * std::abs(y[i]);
        d0 = std::max(d0, std::abs(y[i]) / sc);
        d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    double h_prop = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h_prop = std::min(h_prop, grid.back());

    std::uint64_t attempts = 0;
    while (next < grid.size()) {
        if (++attempts > max_steps)
            throw Divergence("max_steps (" + std::to_string(max_steps) +
                             ") exhausted at t = " + std::to_string(t));
        const double gap = grid[next] - t;
        const bool clipped = h_prop >= gap;
        const double h = clipped ? gap : h_prop;
        if (h <= 1e-14 * std::max(1.0, std::abs(t)))
            throw Divergence("step size underflow at t = " + std::to_string(t));

        const State<N> k2 = f(axpy<N>(y, h, {{a21, &k1}}));
        const State<N> k3 = f(axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = f(axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 =
            f(axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 = f(axpy<N>(
            y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y_new = axpy<N>(
            y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State<N> k7 = f(y_new);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                  e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / sc);
            finite = finite && std::isfinite(y_new[i]);
        }
        if (!finite || !std::isfinite(err)) {
            h_prop = 0.2 * h;
            continue;
        }

        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err > 1.0) {
            h_prop = h * std::max(factor, 0.2);
            continue;
        }

        ++stats.steps;
        t = clipped ? grid[next] : t + h;
        y = y_new;
        k1 = k7;
        if (amplitude(y) > r_max)
            throw Divergence("amplitude " + std::to_string(amplitude(y)) +
                             " exceeded r_max = " + std::to_string(r_max) +
                             " at t = " + std::to_string(t));
        h_prop = clipped ? std::max(h_prop, h * factor) : h * factor;
        if (clipped) {
            out.push_back(y);
            ++next;
        }
    }
    return out;
}

double default_r_max(const RadialDrift &drift, double r0) {
    const double root = drift.is_zero() ? 0.0 : largest_cycle_amplitude(drift);
    return 10.0 * std::max({r0, root, 1.0});
}

} // namespace

Trajectory integrate_amplitude(const RadialDrift &drift, double epsilon,
                               double r0, const IntegratorSettings &settings) {
    if (!(r0 > 0.0) || !std::isfinite(r0))
        throw InvalidParameter("r0 must be positive");
    settings.validate();
    const auto d = drift.coeffs_double();
    auto rhs = [&](const State<1> &y) {
        const double r = y[0];
        const double r2 = r * r;
        double acc = 0.0;
        for (std::size_t k = kMaxCoeffs; k-- > 0;)
            acc = acc * r2 + d[k];
        return State<1>{epsilon * acc * r};
    };
    const double r_max = settings.r_max.value_or(default_r_max(drift, r0));

    Trajectory traj;
    traj.mode = TrajectoryMode::Scalar;
    traj.times = settings.grid();
    traj.rtol = settings.rtol;
    traj.atol = settings.atol;
    StepStats stats;
    auto states = dopri5<1>(
        rhs, [](const State<1> &y) { return std::abs(y[0]); }, State<1>{r0},
        traj.times, settings.rtol, settings.atol, r_max, settings.max_steps, stats);
    traj.amplitude.reserve(states.size());
    for (const auto &s : states)
        traj.amplitude.push_back(s[0]);
    traj.steps = stats.steps;
    return traj;
}

double exact_monorhythmic(double r0, double epsilon, double t) {
    if (!(r0 > 0.0))
        throw InvalidParameter("r0 must be positive");
    if (!(t >= 0.0))
        throw InvalidParameter("t must be non-negative");
    return 2.0 / std::sqrt(4.0 / (r0 * r0) + epsilon * t);
}

Trajectory integrate_full(const OscillatorModel &model, double x0, double v0,
                          const IntegratorSettings &settings) {
    if (!std::isfinite(x0) || !std::isfinite(v0))
        throw InvalidParameter("initial state must be finite");
    if (x0 == 0.0 && v0 == 0.0)
        throw InvalidParameter("(x0, v0) = (0, 0) is the fixed point");
    settings.validate();

    std::array<double, kMaxCoeffs> c{};
    for (std::size_t k = 0; k < kMaxCoeffs; ++k)
        c[k] = to_double(model.coeffs()[k]);
    const double eps = model.epsilon();
    const double w = model.omega();
    const bool velocity = model.damping_class() == DampingClass::VelocityPolynomial;
    auto rhs = [&](const State<2> &y) {
        const double s = velocity ? y[1] : y[0];
        const double s2 = s * s;
        double g = 0.0;
        for (std::size_t k = kMaxCoeffs; k-- > 0;)
            g = g * s2 + c[k];
        return State<2>{y[1], -w * w * y[0] - eps * g * y[1]};
    };
    auto amplitude = [w](const State<2> &y) {
        return std::sqrt(y[0] * y[0] + y[1] * y[1] / (w * w));
    };
    const double r0 = amplitude(State<2>{x0, v0});
    const double r_max = settings.r_max.value_or(default_r_max(average(model), r0));

    Trajectory traj;
    traj.mode = TrajectoryMode::Planar;
    traj.times = settings.grid();
    traj.rtol = settings.rtol;
    traj.atol = settings.atol;
    StepStats stats;
    traj.states = dopri5<2>(rhs, amplitude, State<2>{x0, v0}, traj.times,
                            settings.rtol, settings.atol, r_max,
                            settings.max_steps, stats);
    traj.steps = stats.steps;
    return traj;
}

Trajectory envelope(const Trajectory &planar, double omega) {
    if (planar.mode != TrajectoryMode::Planar)
        throw ModeMismatch("envelope needs a planar trajectory");
    if (!(omega > 0.0))
        throw InvalidParameter("omega must be positive");
    Trajectory out;
    out.mode = TrajectoryMode::Scalar;
    out.times = planar.times;
    out.rtol = planar.rtol;
    out.atol = planar.atol;
    out.steps = planar.steps;
    out.amplitude.reserve(planar.states.size());
    for (const auto &[x, v] : planar.states)
        out.amplitude.push_back(std::sqrt(x * x + v * v / (omega * omega)));
    return out;
}

double sup_gap(const Trajectory &a, const Trajectory &b, double t_limit) {
    if (a.mode != TrajectoryMode::Scalar || b.mode != TrajectoryMode::Scalar)
        throw ModeMismatch("sup_gap compares scalar trajectories");
    if (a.times != b.times)
        throw InvalidParameter("trajectories must share the time grid");
    double gap = 0.0;
    for (std::size_t i = 0; i < a.times.size() && a.times[i] <= t_limit; ++i)
        gap = std::max(gap, std::abs(a.amplitude[i] - b.amplitude[i]));
    return gap;
}

} // namespace kbdecay
