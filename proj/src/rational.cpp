#include "kbdecay/rational.hpp"

#include "kbdecay/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace kbdecay {

namespace {

Integer pow10(unsigned e) {
    Integer p = 1;
    for (unsigned i = 0; i < e; ++i)
        p *= 10;
    return p;
}

// Parses an optionally signed decimal literal with optional exponent.
std::optional<Rational> parse_decimal(std::string_view s) {
    if (s.empty())
        return std::nullopt;
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Integer mantissa = 0;
    long scale = 0; // value = mantissa * 10^scale
    bool seen_digit = false;
    bool seen_point = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c >= '0' && c <= '9') {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point)
                --scale;
            seen_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit)
        return std::nullopt;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E')
            return std::nullopt;
        std::string_view exp_text = s.substr(i + 1);
        if (!exp_text.empty() && exp_text.front() == '+')
            exp_text.remove_prefix(1);
        long exponent = 0;
        auto [ptr, ec] = std::from_chars(exp_text.data(),
                                         exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size() ||
            exp_text.empty())
            return std::nullopt;
        scale += exponent;
    }
    if (scale > 4000 || scale < -4000)
        return std::nullopt;
    Rational value = scale >= 0 ? Rational(mantissa * pow10(static_cast<unsigned>(scale)))
                                : Rational(mantissa, pow10(static_cast<unsigned>(-scale)));
    return negative ? Rational(-value) : value;
}

} // namespace

Rational rational_from_double(double value) {
    if (!std::isfinite(value))
        throw NonRationalCoefficient("value is not finite");
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        throw NonRationalCoefficient("cannot format value");
    auto parsed = parse_decimal(std::string_view(buf.data(), ptr - buf.data()));
    if (!parsed)
        throw NonRationalCoefficient("cannot convert " + std::string(buf.data(), ptr));
    return *parsed;
}

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (auto v = parse_decimal(text))
            return *v;
        throw InvalidParameter("malformed rational '" + std::string(text) + "'");
    }
    auto num = parse_decimal(text.substr(0, slash));
    auto den = parse_decimal(text.substr(slash + 1));
    if (!num || !den)
        throw InvalidParameter("malformed rational '" + std::string(text) + "'");
    if (*den == 0)
        throw InvalidParameter("zero denominator in '" + std::string(text) + "'");
    return *num / *den;
}

std::string to_string(const Rational &value) {
    const Integer &num = boost::multiprecision::numerator(value);
    const Integer &den = boost::multiprecision::denominator(value);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational &value) { return value.convert_to<double>(); }

std::optional<Rational> exact_sqrt(const Rational &value) {
    if (value < 0)
        return std::nullopt;
    const Integer num = boost::multiprecision::numerator(value);
    const Integer den = boost::multiprecision::denominator(value);
    const Integer sn = boost::multiprecision::sqrt(num);
    const Integer sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den)
        return std::nullopt;
    return Rational(sn, sd);
}

} // namespace kbdecay
