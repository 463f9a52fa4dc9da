#include "kbdecay/model.hpp"

#include "kbdecay/errors.hpp"

#include <cmath>

namespace kbdecay {

std::string_view to_string(DampingClass cls) {
    return cls == DampingClass::PositionPolynomial ? "vdp" : "rayleigh";
}

DampingClass parse_damping_class(std::string_view text) {
    if (text == "vdp" || text == "position")
        return DampingClass::PositionPolynomial;
    if (text == "rayleigh" || text == "velocity")
        return DampingClass::VelocityPolynomial;
    throw InvalidParameter("unknown damping class '" + std::string(text) + "'");
}

OscillatorModel::OscillatorModel(DampingClass cls, CoeffArray coeffs,
                                 double epsilon, double omega)
    : cls_(cls), coeffs_(std::move(coeffs)), epsilon_(epsilon), omega_(omega) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidParameter("epsilon must lie in (0, 1)");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw InvalidParameter("omega must be positive and finite");
    omega_exact_ = rational_from_double(omega);
}

double OscillatorModel::damping(double s) const {
    const double s2 = s * s;
    double acc = 0.0;
    for (std::size_t k = kMaxCoeffs; k-- > 0;)
        acc = acc * s2 + to_double(coeffs_[k]);
    return acc;
}

std::optional<ExactNamedParameters> OscillatorModel::named_exact() const {
    if (coeffs_[1] != 1 || coeffs_[0] > 0)
        return std::nullopt;
    auto a = exact_sqrt(-coeffs_[0]);
    if (!a)
        return std::nullopt;
    return ExactNamedParameters{*a, -coeffs_[2], coeffs_[3], -coeffs_[4], coeffs_[5]};
}

std::optional<NamedParameters> OscillatorModel::named() const {
    auto exact = named_exact();
    if (!exact)
        return std::nullopt;
    return NamedParameters{to_double(exact->a), to_double(exact->alpha),
                           to_double(exact->beta), to_double(exact->gamma),
                           to_double(exact->delta)};
}

OscillatorModel make_model(DampingClass cls, const NamedParameters &p,
                           double epsilon, double omega) {
    if (!(p.a >= 0.0))
        throw InvalidParameter("a must be non-negative (only a^2 enters the model)");
    const Rational a = rational_from_double(p.a);
    CoeffArray coeffs{-a * a,
                      Rational(1),
                      -rational_from_double(p.alpha),
                      rational_from_double(p.beta),
                      -rational_from_double(p.gamma),
                      rational_from_double(p.delta)};
    return OscillatorModel(cls, std::move(coeffs), epsilon, omega);
}

OscillatorModel make_vdp(double a, double alpha, double beta, double gamma,
                         double delta, double epsilon, double omega) {
    return make_model(DampingClass::PositionPolynomial,
                      {a, alpha, beta, gamma, delta}, epsilon, omega);
}

OscillatorModel make_rayleigh(double a, double alpha, double beta, double gamma,
                              double delta, double epsilon, double omega) {
    return make_model(DampingClass::VelocityPolynomial,
                      {a, alpha, beta, gamma, delta}, epsilon, omega);
}

} // namespace kbdecay
