#include "kbdecay/cycles.hpp"

#include "kbdecay/errors.hpp"

#include <algorithm>
#include <cmath>

namespace kbdecay {

std::string_view to_string(Stability s) {
    switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Semistable: return "semistable";
    }
    return "unknown";
}

namespace {

// Dense polynomial in u, lowest power first.
using Poly = std::vector<double>;

double eval(const Poly &p, double u) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * u + *it;
    return acc;
}

// Sum of |p_i u^i|: the rounding scale of eval(p, u).
double magnitude(const Poly &p, double u) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * std::abs(u) + std::abs(*it);
    return acc;
}

Poly derive(const Poly &p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(static_cast<double>(i) * p[i]);
    return d;
}

int sign_of(const Poly &p, double u) {
    const double v = eval(p, u);
    if (std::abs(v) <= 1e-13 * magnitude(p, u))
        return 0;
    return v > 0 ? 1 : -1;
}

// Runs until the bracket collapses to adjacent doubles, which is well below
// the |du| <= 1e-12 target for the amplitudes in scope.
double bisect(const Poly &p, double lo, double hi) {
    const bool lo_negative = eval(p, lo) < 0.0;
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double v = eval(p, mid);
        if (v == 0.0)
            return mid;
        if ((v < 0.0) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return std::abs(eval(p, lo)) <= std::abs(eval(p, hi)) ? lo : hi;
}

// Roots of p in (lo, hi), ascending. The polynomial is monotone between
// consecutive critical points, so each such piece holds at most one root.
std::vector<double> roots_in(const Poly &p, double lo, double hi) {
    if (p.size() < 2)
        return {};
    if (p.size() == 2) {
        const double u = -p[0] / p[1];
        if (u > lo && u < hi)
            return {u};
        return {};
    }
    std::vector<double> breaks{lo};
    for (double c : roots_in(derive(p), lo, hi))
        breaks.push_back(c);
    breaks.push_back(hi);

    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        const int sa = sign_of(p, a);
        const int sb = sign_of(p, b);
        if (i > 0 && sa == 0)
            out.push_back(a); // root sitting on a critical point
        if (sa * sb < 0)
            out.push_back(bisect(p, a, b));
    }
    return out;
}

} // namespace

CycleSet find_cycles(const RadialDrift &drift) {
    if (drift.is_zero())
        throw ZeroDrift("drift polynomial is identically zero");

    // drift(r) = r * P(u), u = r^2. Strip the u^m factor (root at r = 0 only)
    // and zero leading coefficients.
    Poly p;
    for (double c : drift.coeffs_double())
        p.push_back(c);
    while (!p.empty() && p.back() == 0.0)
        p.pop_back();
    std::size_t low = 0;
    while (p[low] == 0.0)
        ++low;
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(low));

    CycleSet set;
    if (p.size() < 2)
        return set;

    double bound = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        bound = std::max(bound, std::abs(p[i] / p.back()));
    bound += 1.0;

    for (double u : roots_in(p, 0.0, bound)) {
        const double r = std::sqrt(u);
        if (!set.roots.empty() && r - set.roots.back().amplitude <= 1e-9) {
            auto &prev = set.roots.back();
            prev.amplitude = 0.5 * (prev.amplitude + r);
            prev.derivative = drift.derivative(prev.amplitude);
            prev.stability = Stability::Semistable;
            continue;
        }
        const double d = drift.derivative(r);
        Stability s = Stability::Semistable;
        if (d < -kStabilityThreshold)
            s = Stability::Stable;
        else if (d > kStabilityThreshold)
            s = Stability::Unstable;
        set.roots.push_back({r, s, d});
    }
    set.rhythm_count = static_cast<int>(
        std::count_if(set.roots.begin(), set.roots.end(),
                      [](const LimitCycle &c) { return c.stability == Stability::Stable; }));
    return set;
}

double largest_cycle_amplitude(const RadialDrift &drift) {
    const CycleSet set = find_cycles(drift);
    return set.roots.empty() ? 0.0 : set.roots.back().amplitude;
}

} // namespace kbdecay
