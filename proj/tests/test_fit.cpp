#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kbdecay/errors.hpp"
#include "kbdecay/fit.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace kbdecay;

namespace {

// Scalar trajectory sampled from f on a uniform grid over [0, t_end].
Trajectory sampled(const std::function<double(double)> &f, double t_end,
                   std::size_t samples = 2000) {
    Trajectory traj;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
        traj.times.push_back(t);
        traj.amplitude.push_back(f(t));
    }
    return traj;
}

Trajectory power_data(double C, double p, double t_end = 500.0) {
    return sampled([=](double t) { return t > 0 ? C * std::pow(t, -p) : 0.0; }, t_end);
}

// Closed-form a = 0 VdP amplitude, written out independently of the library.
Trajectory mono_exact(double r0, double eps, double t_end) {
    return sampled([=](double t) { return 2.0 / std::sqrt(4.0 / (r0 * r0) + eps * t); },
                   t_end);
}

double sse_direct(const WindowSamples &s, double p, double C) {
    double sse = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        sse += std::pow(s.r[i] - C * std::pow(s.t[i], -p), 2);
    return sse;
}

const std::vector<int> kCandidates{1, 2, 3, 4, 5, 6};
const FitWindow kDefaultWindow{1.0, 500.0};

} // namespace

TEST_CASE("fixed-n fit recovers an exact power law") {
    const auto traj = power_data(5.0, 1.0 / 3.0);
    const auto fit = fit_fixed_n(traj, 3, kDefaultWindow);
    CHECK(fit.C == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(fit.mse <= 1e-20 * 25.0);
    CHECK(fit_fixed_n(traj, 2, kDefaultWindow).mse > fit.mse);
}

TEST_CASE("monorhythmic closed form on the default window") {
    // Frozen from an independent numpy evaluation of the same grid.
    const auto traj = mono_exact(4.0, 0.1, 500.0);
    const auto f2 = fit_fixed_n(traj, 2, kDefaultWindow);
    const auto f3 = fit_fixed_n(traj, 3, kDefaultWindow);
    CHECK(f2.mse == doctest::Approx(0.010073035775072368).epsilon(1e-9));
    CHECK(f3.mse == doctest::Approx(0.012995891289495777).epsilon(1e-9));
    CHECK(f2.C == doctest::Approx(5.545271566082083).epsilon(1e-9));
    CHECK(f3.C == doctest::Approx(3.040842587251556).epsilon(1e-9));
    // At eps = 0.1 and r0 = 4 the square-root law still fits better.
    CHECK(f2.mse < f3.mse);
}

TEST_CASE("closed-form prefactor is optimal") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> noise(0.5, 1.5);
    const auto traj = sampled([&](double) { return noise(rng); }, 300.0, 400);
    const FitWindow w{1.0, 300.0};
    const auto s = window_samples(traj, w);
    for (int n : kCandidates) {
        const auto fit = fit_fixed_n(traj, n, w);
        const double p = 1.0 / n;
        const double base = sse_direct(s, p, fit.C);
        CHECK(base / static_cast<double>(s.t.size()) == doctest::Approx(fit.mse).epsilon(1e-12));
        CHECK(sse_direct(s, p, fit.C * (1 + 1e-6)) >= base);
        CHECK(sse_direct(s, p, fit.C * (1 - 1e-6)) >= base);
    }
}

TEST_CASE("select_n recovers every noiseless index") {
    for (int n0 : kCandidates) {
        const double C0 = 1.5 + n0;
        const auto res = select_n(power_data(C0, 1.0 / n0), kCandidates, kDefaultWindow);
        CHECK(res.best.n == n0);
        CHECK(res.best.C == doctest::Approx(C0).epsilon(1e-12));
        CHECK(res.best.mse / (C0 * C0) <= 1e-12);
        CHECK(res.table.size() == kCandidates.size());
        CHECK_FALSE(res.tie);
    }
    const auto quarter = select_n(power_data(2.0, 0.25), kCandidates, kDefaultWindow);
    CHECK(quarter.best.n == 4);
    CHECK(quarter.best.mse == doctest::Approx(0.0));
}

TEST_CASE("select_n ties keep the smaller index") {
    const auto zero = sampled([](double) { return 0.0; }, 100.0, 200);
    const std::vector<int> cands{5, 2, 3};
    const auto res = select_n(zero, cands, {1.0, 100.0});
    CHECK(res.best.n == 2);
    CHECK(res.tie);
    CHECK_THROWS_AS(select_n(zero, std::vector<int>{}, {1.0, 100.0}), InvalidParameter);
}

TEST_CASE("select_n on integrated birhythmic decays") {
    IntegratorSettings s; // defaults: 2000 samples on [0, 500]
    SUBCASE("Rayleigh class, r0 = 1.77 selects n = 3") {
        const auto m = make_rayleigh(0, 0.285272, 0.0244993, 0, 0, 0.1, 1);
        const auto res =
            select_n(integrate_amplitude(average(m), 0.1, 1.77, s), kCandidates, kDefaultWindow);
        CHECK(res.best.n == 3);
        // scipy DOP853 reference, rtol 1e-10.
        CHECK(res.table[1].mse == doctest::Approx(0.005901791548115069).epsilon(1e-6));
        CHECK(res.table[2].mse == doctest::Approx(0.0057888364180036615).epsilon(1e-6));
    }
    SUBCASE("VdP class, r0 = 3.16 selects n = 2 at eps = 0.1") {
        const auto m = make_vdp(0, 0.144, 0.005, 0, 0, 0.1, 1);
        const auto res =
            select_n(integrate_amplitude(average(m), 0.1, 3.16, s), kCandidates, kDefaultWindow);
        CHECK(res.best.n == 2);
        CHECK(res.table[1].mse == doctest::Approx(0.016483924996294606).epsilon(1e-6));
        CHECK(res.table[2].mse == doctest::Approx(0.017828487302983538).epsilon(1e-6));
    }
}

TEST_CASE("continuous exponent by golden section") {
    const auto third = fit_continuous(power_data(3.0, 1.0 / 3.0), kDefaultWindow);
    CHECK(std::abs(third.p - 1.0 / 3.0) <= 1e-5);
    CHECK(third.C == doctest::Approx(3.0).epsilon(1e-4));
    CHECK_FALSE(third.at_boundary);
    const auto half = fit_continuous(power_data(3.0, 0.5), kDefaultWindow);
    CHECK(std::abs(half.p - 0.5) <= 1e-5);

    const auto mono = fit_continuous(mono_exact(4.0, 0.1, 500.0), kDefaultWindow);
    CHECK(mono.p > 1.0 / 3.0);
    CHECK(mono.p < 0.5);
    CHECK(mono.p == doctest::Approx(0.42549).epsilon(1e-4)); // numpy grid search

    // Minimum outside the range is reported on the boundary.
    const auto edge = fit_continuous(power_data(3.0, 1.5), kDefaultWindow, {0.1, 1.0});
    CHECK(edge.at_boundary);
    CHECK(edge.bracket_high == doctest::Approx(1.0).epsilon(1e-5));

    CHECK_THROWS_AS(fit_continuous(power_data(1, 1), kDefaultWindow, {0.0, 1.0}),
                    InvalidParameter);
    CHECK_THROWS_AS(fit_continuous(power_data(1, 1), kDefaultWindow, {0.5, 2.5}),
                    InvalidParameter);
}

TEST_CASE("late windows push the exponent toward 1/2") {
    double previous = 0.0;
    for (double scale : {1.0, 10.0, 100.0, 1000.0}) {
        const FitWindow w{scale, 500.0 * scale * (scale >= 1000.0 ? 0.2 : 1.0)};
        const auto traj = mono_exact(4.0, 0.1, w.t_end);
        const double p = fit_continuous(traj, w).p;
        CHECK(p > previous);
        CHECK(p < 0.5);
        previous = p;
    }
    CHECK(previous == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("log-log regression") {
    const auto exact = fit_loglog(power_data(7.0, 0.4), kDefaultWindow);
    CHECK(std::abs(exact.p - 0.4) <= 1e-12);
    CHECK(std::abs(exact.C - 7.0) <= 1e-12 * 7.0);
    CHECK(exact.method == ExponentMethod::LogLogOLS);

    const auto flat = fit_loglog(sampled([](double) { return 2.5; }, 100.0), {1.0, 100.0});
    CHECK(std::abs(flat.p) <= 1e-12);
    CHECK(flat.C == doctest::Approx(2.5).epsilon(1e-12));

    const auto late = fit_loglog(mono_exact(4.0, 0.1, 1e5), {1e3, 1e5});
    CHECK(std::abs(late.p - 0.5) <= 0.02);

    const auto bad = sampled([](double t) { return t > 50 ? -1.0 : 1.0; }, 100.0);
    CHECK_THROWS_AS(fit_loglog(bad, {1.0, 100.0}), NonpositiveSample);
}

TEST_CASE("golden section and log-log agree on clean power laws") {
    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.9, 1.6}) {
        const auto traj = power_data(4.0, p);
        CHECK(std::abs(fit_continuous(traj, kDefaultWindow).p -
                       fit_loglog(traj, kDefaultWindow).p) <= 1e-5);
    }
}

TEST_CASE("window and mode errors") {
    const auto traj = power_data(1.0, 0.5, 10.0);
    CHECK_THROWS_AS(fit_fixed_n(traj, 3, {0.0, 5.0}), InvalidParameter);
    CHECK_THROWS_AS(fit_fixed_n(traj, 3, {5.0, 4.0}), InvalidParameter);
    CHECK_THROWS_AS(fit_fixed_n(traj, 3, {20.0, 30.0}), EmptyWindow);
    CHECK_THROWS_AS(fit_fixed_n(traj, 0, {1.0, 10.0}), InvalidParameter);
    Trajectory short_traj = sampled([](double t) { return 1.0 + t; }, 10.0, 8);
    CHECK_THROWS_AS(fit_fixed_n(short_traj, 1, {1.0, 10.0}), EmptyWindow);
    Trajectory planar;
    planar.mode = TrajectoryMode::Planar;
    CHECK_THROWS_AS(fit_fixed_n(planar, 1, {1.0, 10.0}), ModeMismatch);
}
