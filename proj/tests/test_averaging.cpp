#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kbdecay/averaging.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kbdecay;

namespace {

// Periodic trapezoid rule; exact for trigonometric polynomials of degree < m.
template <class F> double period_mean(F &&f, int m = 4096) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        acc += f(2.0 * std::numbers::pi * i / m);
    return acc / m;
}

Rational random_rational(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> num(-100000, 100000);
    std::uniform_int_distribution<int> den(1, 99991);
    return Rational(num(rng), den(rng));
}

OscillatorModel from_coeffs(DampingClass cls, const CoeffArray &c, double omega = 1.0) {
    return OscillatorModel(cls, c, 0.1, omega);
}

} // namespace

TEST_CASE("Wallis table constants") {
    const auto &w = wallis_table();
    const std::array<Rational, 6> W{Rational(1, 2), Rational(1, 8), Rational(1, 16),
                                    Rational(5, 128), Rational(7, 256), Rational(21, 1024)};
    const std::array<Rational, 6> S{Rational(1, 2), Rational(3, 8), Rational(5, 16),
                                    Rational(35, 128), Rational(63, 256), Rational(231, 1024)};
    for (std::size_t k = 0; k < 6; ++k) {
        CHECK(w.cos_sin2[k] == W[k]);
        CHECK(w.sin_pow[k] == S[k]);
        CHECK(w.cos_sin2[k] > 0);
        CHECK(w.cos_sin2[k] <= Rational(1, 2));
        CHECK(w.sin_pow[k] <= Rational(1, 2));
        if (k > 0) {
            CHECK(w.cos_sin2[k] < w.cos_sin2[k - 1]);
            CHECK(w.sin_pow[k] < w.sin_pow[k - 1]);
        }
    }
}

TEST_CASE("Wallis table against quadrature") {
    const auto &w = wallis_table();
    for (int k = 0; k < 6; ++k) {
        const double wq = period_mean([k](double th) {
            return std::pow(std::cos(th), 2 * k) * std::pow(std::sin(th), 2);
        });
        const double sq = period_mean([k](double th) { return std::pow(std::sin(th), 2 * k + 2); });
        CHECK(std::abs(wq - to_double(w.cos_sin2[k])) < 1e-12);
        CHECK(std::abs(sq - to_double(w.sin_pow[k])) < 1e-12);
    }
}

TEST_CASE("modified VdP drift is -(r/8)(r^2 - 4a^2)") {
    for (double a : {0.0, 0.5, 1.0, 1.7, 3.0}) {
        const RadialDrift d = average(make_vdp(a, 0, 0, 0, 0, 0.1, 1));
        const Rational a_exact = rational_from_double(a);
        CHECK(d.coeffs[0] == a_exact * a_exact / 2);
        CHECK(d.coeffs[1] == Rational(-1, 8));
        for (std::size_t k = 2; k < kMaxCoeffs; ++k)
            CHECK(d.coeffs[k] == 0);
        CHECK(d.phase_drift == 0);
    }
}

TEST_CASE("generalized drifts reproduce the 1024-denominator patterns") {
    std::mt19937_64 rng(2024);
    const std::array<int, 5> vdp{-128, 64, -40, 28, -21};
    const std::array<int, 5> ray{-384, 320, -280, 252, -231};
    for (int trial = 0; trial < 50; ++trial) {
        // alpha..delta as arbitrary exact rationals.
        const Rational alpha = random_rational(rng), beta = random_rational(rng),
                       gamma = random_rational(rng), delta = random_rational(rng);
        const CoeffArray c{0, 1, -alpha, beta, -gamma, delta};
        const std::array<Rational, 5> params{1, alpha, beta, gamma, delta};
        const auto dv = average(from_coeffs(DampingClass::PositionPolynomial, c));
        const auto dr = average(from_coeffs(DampingClass::VelocityPolynomial, c));
        CHECK(dv.coeffs[0] == 0);
        CHECK(dr.coeffs[0] == 0);
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(dv.coeffs[k + 1] * 1024 == vdp[k] * params[k]);
            CHECK(dr.coeffs[k + 1] * 1024 == ray[k] * params[k]);
        }
    }
}

TEST_CASE("zero damping gives zero drift") {
    const auto d = average(from_coeffs(DampingClass::PositionPolynomial, CoeffArray{}));
    CHECK(d.is_zero());
    CHECK(render_equation(d) == "dr/dt = 0");
}

TEST_CASE("averaging is linear in the coefficients") {
    std::mt19937_64 rng(3);
    for (auto cls : {DampingClass::PositionPolynomial, DampingClass::VelocityPolynomial}) {
        for (int trial = 0; trial < 20; ++trial) {
            CoeffArray u, v, uv;
            for (std::size_t k = 0; k < kMaxCoeffs; ++k) {
                u[k] = random_rational(rng);
                v[k] = random_rational(rng);
                uv[k] = u[k] + v[k];
            }
            const auto du = average(from_coeffs(cls, u, 1.5));
            const auto dv = average(from_coeffs(cls, v, 1.5));
            const auto duv = average(from_coeffs(cls, uv, 1.5));
            for (std::size_t k = 0; k < kMaxCoeffs; ++k)
                CHECK(duv.coeffs[k] == du.coeffs[k] + dv.coeffs[k]);
        }
    }
}

TEST_CASE("omega dependence") {
    const CoeffArray c{Rational(-1, 3), 1, Rational(-2, 5), Rational(1, 7), Rational(-1, 9),
                       Rational(1, 11)};
    const auto p1 = average(from_coeffs(DampingClass::PositionPolynomial, c, 1.0));
    const auto p2 = average(from_coeffs(DampingClass::PositionPolynomial, c, 2.5));
    CHECK(p1 == p2);

    const auto v1 = average(from_coeffs(DampingClass::VelocityPolynomial, c, 1.0));
    const auto v2 = average(from_coeffs(DampingClass::VelocityPolynomial, c, 2.5));
    Rational scale = 1;
    for (std::size_t k = 0; k < kMaxCoeffs; ++k) {
        CHECK(v2.coeffs[k] == v1.coeffs[k] * scale);
        scale *= Rational(25, 4);
    }
}

TEST_CASE("averaged drift matches direct quadrature of the amplitude flow") {
    // dr/dt = (eps h / omega) sin(theta) with x = r cos(theta),
    // x' = -omega r sin(theta), h = g(s) x'. Averaged over theta.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> amp(0.2, 2.0);
    std::uniform_real_distribution<double> freq(0.5, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cls = trial % 2 ? DampingClass::PositionPolynomial
                                   : DampingClass::VelocityPolynomial;
        CoeffArray c;
        for (auto &ck : c)
            ck = rational_from_double(coef(rng));
        const double omega = freq(rng);
        const OscillatorModel m(cls, c, 0.1, omega);
        const RadialDrift d = average(m);
        for (int j = 0; j < 3; ++j) {
            const double r = amp(rng);
            const double numeric = period_mean([&](double th) {
                const double x = r * std::cos(th);
                const double v = -omega * r * std::sin(th);
                const double s = cls == DampingClass::PositionPolynomial ? x : v;
                const double h = m.damping(s) * v;
                return h / omega * std::sin(th);
            });
            double scale = 0.0;
            for (std::size_t k = 0; k < kMaxCoeffs; ++k)
                scale += std::abs(to_double(d.coeffs[k])) * std::pow(r, 2 * k + 1);
            CHECK(std::abs(numeric - d(r)) <= 1e-10 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("render_equation") {
    CHECK(render_equation(average(make_vdp(1, 0, 0, 0, 0, 0.1, 1))) ==
          "dr/dt = eps*( (1/2) r - (1/8) r^3 )");
    const auto bi = make_vdp(0, 0.144, 0.005, 0, 0, 0.1, 1);
    CHECK(render_equation(average(bi)) ==
          "dr/dt = eps*( -(1/8) r^3 + (9/1000) r^5 - (1/5120) r^7 )");
    const std::string sym = render_symbolic(bi);
    CHECK(sym.find("-(1/8) r^3") != std::string::npos);
    CHECK(sym.find("+ (1/16) alpha r^5") != std::string::npos);
    CHECK(sym.find("- (5/128) beta r^7") != std::string::npos);
    CHECK(render_symbolic(make_rayleigh(0, 1, 1, 1, 1, 0.1, 1)) ==
          "dr/dt = eps*( -(3/8) r^3 + (5/16) alpha r^5 - (35/128) beta r^7"
          " + (63/256) gamma r^9 - (231/1024) delta r^11 )");
}

TEST_CASE("drift evaluation and derivative") {
    const auto d = average(make_vdp(1, 0, 0, 0, 0, 0.1, 1));
    CHECK(d(2.0) == doctest::Approx(0.0));
    CHECK(d(1.0) == doctest::Approx(0.5 - 0.125));
    CHECK(d.derivative(2.0) == doctest::Approx(0.5 - 3.0 * 4.0 / 8.0));
}
