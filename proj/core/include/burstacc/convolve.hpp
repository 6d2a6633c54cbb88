#pragma once

#include <vector>

#include "burstacc/grid.hpp"

namespace burstacc {

// Sample extension used by the 1-D filtering passes. The two symmetric kinds
// are half-sample mirrors; SymmetricOdd flips the sign of reflected samples
// (needed to invert antisymmetric filter taps exactly).
enum class Extension { Periodic, SymmetricEven, SymmetricOdd };

inline Extension extension_for(BoundaryMode mode) {
    return mode == BoundaryMode::Periodic ? Extension::Periodic
                                          : Extension::SymmetricEven;
}

// Reads sample i of a length-n signal extended beyond [0, n).
inline double extended_sample(const double* s, long stride, int n, long i, Extension ext) {
    if (i >= 0 && i < n) return s[i * stride];
    switch (ext) {
        case Extension::Periodic: {
            long k = i % n;
            if (k < 0) k += n;
            return s[k * stride];
        }
        case Extension::SymmetricEven:
        case Extension::SymmetricOdd: {
            const long period = 2L * n;
            long k = i % period;
            if (k < 0) k += period;
            double sign = 1.0;
            if (k >= n) {
                k = period - 1 - k;
                if (ext == Extension::SymmetricOdd) sign = -1.0;
            }
            return sign * s[k * stride];
        }
    }
    return 0.0;
}

// One separable pass: y(i) = sum_t taps[t] * x(i - dilation*(t - center)).
// Horizontal applies along rows, vertical along columns; output same size.
ImageGrid filter_rows(const ImageGrid& img, const std::vector<double>& taps,
                      int center, int dilation, Extension ext);
ImageGrid filter_cols(const ImageGrid& img, const std::vector<double>& taps,
                      int center, int dilation, Extension ext);

// Dense 2-D convolution with a centered odd-sized kernel.
// Rejects kernels larger than the image in either dimension.
ImageGrid convolve(const ImageGrid& image, const BlurKernel& kernel, BoundaryMode boundary);

// Circular convolution of two same-sized grids (kernel stored with its
// origin at (0,0)); used by the equivalence checks.
ImageGrid convolve_periodic_full(const ImageGrid& image, const ImageGrid& kernel);

// Sampled Gaussian taps exp(-k^2/(2 sigma^2)), k in [-r, r] with r = ceil(4 sigma),
// renormalized to sum 1. Returns taps and writes the center index.
std::vector<double> gaussian_taps(double sigma, int* center);

// Separable Gaussian smoothing, symmetric boundary.
ImageGrid gaussian_blur(const ImageGrid& image, double sigma);

// Same smoothing with selectable boundary (the FBA weights smooth the
// frequency plane periodically).
ImageGrid gaussian_blur(const ImageGrid& image, double sigma, BoundaryMode boundary);

// Kernel factories.
BlurKernel gaussian_kernel(double sigma);
BlurKernel identity_kernel();
// Straight-line motion blur: `length` pixels long at `angle_deg` degrees,
// taps bilinearly splatted along the segment and normalized.
BlurKernel motion_kernel(double length, double angle_deg);

}  // namespace burstacc
