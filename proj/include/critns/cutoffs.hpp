// Smoothstep ramps and radial cutoffs shared by the profile and the
// local-energy test functions.
#pragma once

#include <algorithm>
#include <cmath>

namespace critns {

/// C^3 smoothstep on [0, 1]: 35u^4 - 84u^5 + 70u^6 - 20u^7.
inline double smoothstep3(double u) {
    u = std::clamp(u, 0.0, 1.0);
    double u2 = u * u, u4 = u2 * u2;
    return u4 * (35.0 - 84.0 * u + 70.0 * u2 - 20.0 * u2 * u);
}

/// C^7 smoothstep (order-15 polynomial), used where spectral tails of a
/// cutoff must decay fast.
inline double smoothstep7(double u) {
    u = std::clamp(u, 0.0, 1.0);
    // 6435u^8 - 40040u^9 + 108108u^10 - 163800u^11 + 150150u^12
    // - 83160u^13 + 25740u^14 - 3432u^15
    double u2 = u * u, u4 = u2 * u2, u8 = u4 * u4;
    return u8 * (6435.0 + u * (-40040.0 + u * (108108.0 + u * (-163800.0 +
                 u * (150150.0 + u * (-83160.0 + u * (25740.0 - 3432.0 * u)))))));
}

/// Radial cutoff: 1 on [0, inner], 0 beyond outer, C^3 ramp in between.
inline double radial_cutoff(double r, double inner = 0.5, double outer = 0.75) {
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    return 1.0 - smoothstep3((r - inner) / (outer - inner));
}

/// C^7 variant for pressure-splitting cutoffs.
inline double radial_cutoff7(double r, double inner, double outer) {
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    return 1.0 - smoothstep7((r - inner) / (outer - inner));
}

/// d/du of smoothstep3.
inline double smoothstep3_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    double om = 1.0 - u;
    return 140.0 * u * u * u * om * om * om;
}

/// d2/du2 of smoothstep3.
inline double smoothstep3_deriv2(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    double u2 = u * u, u3 = u2 * u;
    // d2/du2 (35u^4 - 84u^5 + 70u^6 - 20u^7)
    return 420.0 * u2 - 1680.0 * u3 + 2100.0 * u2 * u2 - 840.0 * u2 * u3;
}

/// d/dr of radial_cutoff (C^3 ramp).
inline double radial_cutoff_deriv(double r, double inner = 0.5, double outer = 0.75) {
    if (r <= inner || r >= outer) return 0.0;
    double u = (r - inner) / (outer - inner);
    double u2 = u * u, u3 = u2 * u;
    // d/du smoothstep3 = 140u^3 - 420u^4 + 420u^5 - 140u^6
    double d = 140.0 * u3 * (1.0 - 3.0 * u + 3.0 * u2 - u3);
    return -d / (outer - inner);
}

}  // namespace critns
