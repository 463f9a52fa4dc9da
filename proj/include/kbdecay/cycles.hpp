// Limit cycles of the averaged radial drift.
#pragma once

#include "kbdecay/averaging.hpp"

#include <string_view>
#include <vector>

namespace kbdecay {

enum class Stability { Stable, Unstable, Semistable };

std::string_view to_string(Stability s);

struct LimitCycle {
    double amplitude;
    Stability stability;
    /// d(drift)/dr at the root, per unit eps.
    double derivative;
};

struct CycleSet {
    std::vector<LimitCycle> roots; // ascending amplitude
    int rhythm_count = 0;          // number of stable cycles
};

inline constexpr double kStabilityThreshold = 1e-9;

/// Positive roots of the drift polynomial, found in u = r^2 by isolating
/// monotone pieces between critical points and bisecting each sign change
/// down to |du| <= 1e-12. Touching roots are reported as Semistable.
/// Throws ZeroDrift when every coefficient vanishes.
CycleSet find_cycles(const RadialDrift &drift);

/// Largest positive root, or 0 when there is none. Used for default bounds.
double largest_cycle_amplitude(const RadialDrift &drift);

} // namespace kbdecay
