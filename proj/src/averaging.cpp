#include "kbdecay/averaging.hpp"

#include <sstream>

namespace kbdecay {

namespace {

Rational double_factorial(int n) {
    Rational acc = 1;
    for (int k = n; k > 1; k -= 2)
        acc *= k;
    return acc;
}

WallisTable build_wallis() {
    WallisTable t;
    for (int k = 0; k < static_cast<int>(kMaxCoeffs); ++k) {
        t.cos_sin2[k] = double_factorial(2 * k - 1) / double_factorial(2 * k + 2);
        t.sin_pow[k] = double_factorial(2 * k + 1) / double_factorial(2 * k + 2);
    }
    return t;
}

// Moment multiplying -c_k in the radial drift.
Rational moment(const OscillatorModel &model, std::size_t k) {
    const auto &w = wallis_table();
    if (model.damping_class() == DampingClass::PositionPolynomial)
        return w.cos_sin2[k];
    Rational scale = 1;
    const Rational omega2 = model.omega_exact() * model.omega_exact();
    for (std::size_t i = 0; i < k; ++i)
        scale *= omega2;
    return scale * w.sin_pow[k];
}

struct Term {
    Rational coeff;
    std::string symbol; // empty for purely numeric terms
    int power;
};

std::string power_text(int power) {
    return power == 1 ? "r" : "r^" + std::to_string(power);
}

std::string render_terms(const std::vector<Term> &terms) {
    if (terms.empty())
        return "dr/dt = 0";
    std::ostringstream out;
    out << "dr/dt = eps*( ";
    bool first = true;
    for (const auto &term : terms) {
        const bool negative = term.coeff < 0;
        const Rational magnitude = negative ? Rational(-term.coeff) : term.coeff;
        if (first)
            out << (negative ? "-" : "");
        else
            out << (negative ? " - " : " + ");
        out << '(' << to_string(magnitude) << ") ";
        if (!term.symbol.empty())
            out << term.symbol << ' ';
        out << power_text(term.power);
        first = false;
    }
    out << " )";
    return out.str();
}

} // namespace

const WallisTable &wallis_table() {
    static const WallisTable table = build_wallis();
    return table;
}

bool RadialDrift::is_zero() const {
    for (const auto &c : coeffs)
        if (c != 0)
            return false;
    return true;
}

std::array<double, kMaxCoeffs> RadialDrift::coeffs_double() const {
    std::array<double, kMaxCoeffs> out{};
    for (std::size_t k = 0; k < kMaxCoeffs; ++k)
        out[k] = to_double(coeffs[k]);
    return out;
}

double RadialDrift::operator()(double r) const {
    const double r2 = r * r;
    double acc = 0.0;
    for (std::size_t k = kMaxCoeffs; k-- > 0;)
        acc = acc * r2 + to_double(coeffs[k]);
    return acc * r;
}

double RadialDrift::derivative(double r) const {
    const double r2 = r * r;
    double acc = 0.0;
    for (std::size_t k = kMaxCoeffs; k-- > 0;)
        acc = acc * r2 + static_cast<double>(2 * k + 1) * to_double(coeffs[k]);
    return acc;
}

RadialDrift average(const OscillatorModel &model) {
    RadialDrift drift;
    for (std::size_t k = 0; k < kMaxCoeffs; ++k)
        drift.coeffs[k] = -model.coeffs()[k] * moment(model, k);
    // Even-polynomial damping times x' contributes no cos-weighted average.
    drift.phase_drift = 0;
    return drift;
}

std::string render_equation(const RadialDrift &drift) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < kMaxCoeffs; ++k)
        if (drift.coeffs[k] != 0)
            terms.push_back({drift.coeffs[k], "", static_cast<int>(2 * k + 1)});
    return render_terms(terms);
}

std::string render_symbolic(const OscillatorModel &model) {
    const auto named = model.named_exact();
    if (!named)
        return render_equation(average(model));
    // c_k = sign_k * value_k under the named convention.
    const std::array<std::pair<const char *, Rational>, kMaxCoeffs> params{{
        {"a^2", -(named->a * named->a)},
        {"", Rational(1)},
        {"alpha", -named->alpha},
        {"beta", named->beta},
        {"gamma", -named->gamma},
        {"delta", named->delta},
    }};
    const std::array<int, kMaxCoeffs> sign{-1, 1, -1, 1, -1, 1};
    std::vector<Term> terms;
    for (std::size_t k = 0; k < kMaxCoeffs; ++k) {
        if (params[k].second == 0)
            continue;
        terms.push_back({Rational(-sign[k]) * moment(model, k), params[k].first,
                         static_cast<int>(2 * k + 1)});
    }
    return render_terms(terms);
}

} // namespace kbdecay
