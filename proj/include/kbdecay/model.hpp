// Oscillator models for the polynomially damped LLS form
//
//     x'' + eps * g(s) * x' + omega^2 * x = 0,   g(s) = sum_k c_k s^(2k),
//
// where s = x for the Van der Pol (position) class and s = x' for the
// Rayleigh (velocity) class.
#pragma once

#include "kbdecay/rational.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace kbdecay {

enum class DampingClass { PositionPolynomial, VelocityPolynomial };

std::string_view to_string(DampingClass cls);
/// Accepts "vdp"/"position" and "rayleigh"/"velocity".
DampingClass parse_damping_class(std::string_view text);

inline constexpr std::size_t kMaxCoeffs = 6; // degree 10 in s

using CoeffArray = std::array<Rational, kMaxCoeffs>;

/// Named parameters under the sign convention
/// g = -a^2 + s^2 - alpha s^4 + beta s^6 - gamma s^8 + delta s^10.
struct NamedParameters {
    double a = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
};

/// Exact counterpart of NamedParameters, recovered from the coefficient list.
struct ExactNamedParameters {
    Rational a, alpha, beta, gamma, delta;
};

class OscillatorModel {
public:
    /// Generic constructor. Validates 0 < epsilon < 1 and omega > 0.
    OscillatorModel(DampingClass cls, CoeffArray coeffs, double epsilon,
                    double omega);

    DampingClass damping_class() const noexcept { return cls_; }
    const CoeffArray &coeffs() const noexcept { return coeffs_; }
    double epsilon() const noexcept { return epsilon_; }
    double omega() const noexcept { return omega_; }
    /// omega as the exact decimal rational it was written as.
    const Rational &omega_exact() const noexcept { return omega_exact_; }

    /// g(s) evaluated in double precision.
    double damping(double s) const;

    /// Reads a, alpha..delta back when the coefficients follow the named
    /// pattern (c_1 = 1, c_0 = -a^2 with rational a >= 0). Empty otherwise.
    std::optional<ExactNamedParameters> named_exact() const;
    std::optional<NamedParameters> named() const;

    friend bool operator==(const OscillatorModel &, const OscillatorModel &) = default;

private:
    DampingClass cls_;
    CoeffArray coeffs_;
    double epsilon_;
    double omega_;
    Rational omega_exact_;
};

/// Position-class model with coeffs (-a^2, 1, -alpha, beta, -gamma, delta).
/// Throws InvalidParameter for epsilon outside (0,1), omega <= 0 or a < 0.
OscillatorModel make_vdp(double a, double alpha, double beta, double gamma,
                         double delta, double epsilon, double omega);

/// Velocity-class analogue of make_vdp.
OscillatorModel make_rayleigh(double a, double alpha, double beta, double gamma,
                              double delta, double epsilon, double omega);

OscillatorModel make_model(DampingClass cls, const NamedParameters &params,
                           double epsilon, double omega);

} // namespace kbdecay
