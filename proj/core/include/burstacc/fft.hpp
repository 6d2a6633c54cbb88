#pragma once

#include "burstacc/grid.hpp"

namespace burstacc {

// Unnormalized forward 2-D DFT. Any dimensions >= 1, not just powers of two.
ComplexSpectrum fft2(const ImageGrid& image);

// Inverse 2-D DFT with 1/(W*H) normalization, returning the real part.
// A conjugate-symmetric spectrum leaves an imaginary residue at rounding
// level; residues above 1e-10 (relative to the real peak) emit a one-line
// stderr diagnostic and are still discarded.
ImageGrid ifft2(const ComplexSpectrum& spectrum);

// Complex-to-complex transforms used by the accumulation internals.
ComplexSpectrum fft2_complex(const ComplexSpectrum& in);
ComplexSpectrum ifft2_complex(const ComplexSpectrum& in);  // includes 1/(W*H)

}  // namespace burstacc
