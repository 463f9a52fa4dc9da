#include "kbdecay/fit.hpp"

#include "kbdecay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kbdecay {

void FitWindow::validate() const {
    if (!(t_start > 0.0))
        throw InvalidParameter("fit window must start after t = 0");
    if (!(t_end > t_start))
        throw InvalidParameter("fit window end must exceed its start");
}

std::string_view to_string(ExponentMethod m) {
    return m == ExponentMethod::GoldenSection ? "golden-section" : "loglog-ols";
}

WindowSamples window_samples(const Trajectory &traj, const FitWindow &window) {
    if (traj.mode != TrajectoryMode::Scalar)
        throw ModeMismatch("power-law fits need a scalar trajectory");
    window.validate();
    WindowSamples s;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t >= window.t_start && t <= window.t_end) {
            s.t.push_back(t);
            s.r.push_back(traj.amplitude[i]);
        }
    }
    if (s.t.size() < kMinWindowSamples)
        throw EmptyWindow("window [" + std::to_string(window.t_start) + ", " +
                          std::to_string(window.t_end) + "] holds " +
                          std::to_string(s.t.size()) + " samples, need " +
                          std::to_string(kMinWindowSamples));
    return s;
}

double best_prefactor(std::span<const double> t, std::span<const double> r,
                      double p) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double b = std::pow(t[i], -p);
        num += r[i] * b;
        den += b * b;
    }
    if (!(den > 0.0))
        throw DegenerateBasis("sum of squared basis values vanishes");
    return num / den;
}

namespace {

double sse_at(std::span<const double> t, std::span<const double> r, double p,
              double C) {
    double sse = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = r[i] - C * std::pow(t[i], -p);
        sse += e * e;
    }
    return sse;
}

} // namespace

PowerLawFit fit_fixed_n(const Trajectory &traj, int n, const FitWindow &window) {
    if (n < 1)
        throw InvalidParameter("power-law index n must be a positive integer");
    const auto s = window_samples(traj, window);
    const double p = 1.0 / n;
    const double C = best_prefactor(s.t, s.r, p);
    const double mse = sse_at(s.t, s.r, p, C) / static_cast<double>(s.t.size());
    return {n, C, mse, window};
}

SelectionResult select_n(const Trajectory &traj, std::span<const int> candidates,
                         const FitWindow &window) {
    if (candidates.empty())
        throw InvalidParameter("candidate set is empty");
    SelectionResult result;
    for (int n : candidates)
        result.table.push_back(fit_fixed_n(traj, n, window));

    auto same = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
    };
    const PowerLawFit *best = &result.table.front();
    for (const auto &fit : result.table) {
        if (same(fit.mse, best->mse)) {
            if (fit.n < best->n)
                best = &fit;
        } else if (fit.mse < best->mse) {
            best = &fit;
        }
    }
    result.best = *best;
    for (const auto &fit : result.table)
        if (fit.n != best->n && same(fit.mse, best->mse))
            result.tie = true;
    return result;
}

ExponentEstimate fit_continuous(const Trajectory &traj, const FitWindow &window,
                                ExponentRange p_range) {
    if (!(p_range.low > 0.0) || !(p_range.high <= 2.0) ||
        !(p_range.low < p_range.high))
        throw InvalidParameter("exponent range must be a sub-interval of (0, 2]");
    const auto s = window_samples(traj, window);
    auto sse = [&](double p) { return sse_at(s.t, s.r, p, best_prefactor(s.t, s.r, p)); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = p_range.low, b = p_range.high;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = sse(x1), f2 = sse(x2);
    while (b - a > 1e-6) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = sse(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = sse(x2);
        }
    }
    ExponentEstimate est;
    est.method = ExponentMethod::GoldenSection;
    est.p = 0.5 * (a + b);
    est.C = best_prefactor(s.t, s.r, est.p);
    est.sse = sse(est.p);
    est.bracket_low = a;
    est.bracket_high = b;
    est.at_boundary = a - p_range.low <= 1e-6 || p_range.high - b <= 1e-6;
    return est;
}

ExponentEstimate fit_loglog(const Trajectory &traj, const FitWindow &window) {
    const auto s = window_samples(traj, window);
    const std::size_t n = s.t.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.r[i] > 0.0))
            throw NonpositiveSample("log-log fit needs positive samples (t = " +
                                    std::to_string(s.t[i]) + ")");
        x[i] = std::log(s.t[i]);
        y[i] = std::log(s.r[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw DegenerateBasis("log-time values do not vary across the window");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    ExponentEstimate est;
    est.method = ExponentMethod::LogLogOLS;
    est.p = -slope;
    est.C = std::exp(intercept);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (intercept + slope * x[i]);
        est.sse += e * e;
    }
    est.bracket_low = est.bracket_high = est.p;
    return est;
}

} // namespace kbdecay
