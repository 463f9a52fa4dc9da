// First-order Krylov-Bogoliubov averaging of polynomial damping.
//
// Substituting x = r cos(theta), x' = -omega r sin(theta) into the LLS flow
// and averaging over one period of theta leaves a radial drift that is an odd
// polynomial in r. Every term reduces to one of two trigonometric moments:
//
//   W_k = <cos^(2k) sin^2>   = (2k-1)!! / (2k+2)!!   (position class)
//   S_k = <sin^(2k+2)>       = (2k+1)!! / (2k+2)!!   (velocity class)
//
// so the drift is computed exactly in rational arithmetic.
#pragma once

#include "kbdecay/model.hpp"

#include <array>
#include <string>

namespace kbdecay {

struct WallisTable {
    std::array<Rational, kMaxCoeffs> cos_sin2; // W_k
    std::array<Rational, kMaxCoeffs> sin_pow;  // S_k
};

/// Cached table for k = 0..5.
const WallisTable &wallis_table();

/// dr/dt = eps * sum_k coeffs[k] * r^(2k+1); phase drift is per unit eps.
struct RadialDrift {
    std::array<Rational, kMaxCoeffs> coeffs;
    Rational phase_drift;

    bool is_zero() const;
    /// Polynomial value without the eps factor.
    double operator()(double r) const;
    /// d/dr of the polynomial, again without eps.
    double derivative(double r) const;
    std::array<double, kMaxCoeffs> coeffs_double() const;

    friend bool operator==(const RadialDrift &, const RadialDrift &) = default;
};

/// Position class: d_(2k+1) = -c_k W_k.
/// Velocity class: d_(2k+1) = -c_k omega^(2k) S_k.
RadialDrift average(const OscillatorModel &model);

/// "dr/dt = eps*( (1/2) r - (1/8) r^3 )", ascending powers, reduced fractions.
std::string render_equation(const RadialDrift &drift);

/// Same layout, but each term whose named parameter is nonzero is written
/// with its symbol, e.g. "-(1/8) r^3 + (1/16) alpha r^5". Requires a model
/// built from named parameters; falls back to render_equation otherwise.
std::string render_symbolic(const OscillatorModel &model);

} // namespace kbdecay
