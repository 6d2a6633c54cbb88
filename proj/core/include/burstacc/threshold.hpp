#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace burstacc {

// Proximal operator of lambda*|.|_1: shrink the magnitude by lambda with
// floor 0, keep the sign. soft_threshold(0) == 0.
inline double soft_threshold(double value, double lambda) {
    const double mag = std::abs(value) - lambda;
    if (mag <= 0.0) return 0.0;
    return value < 0.0 ? -mag : mag;
}

// Complex variant: phase preserved, magnitude shrunk.
inline std::complex<double> soft_threshold(std::complex<double> value, double lambda) {
    const double mag = std::abs(value);
    if (mag <= lambda) return {0.0, 0.0};
    return value * ((mag - lambda) / mag);
}

}  // namespace burstacc
