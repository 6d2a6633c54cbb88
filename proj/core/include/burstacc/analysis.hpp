#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "burstacc/accumulate.hpp"
#include "burstacc/fourier.hpp"
#include "burstacc/framelet.hpp"
#include "burstacc/grid.hpp"

namespace burstacc {

// Equivalent kernels live on the frame grid with their origin at (0,0)
// and periodic wraparound (the natural layout for spectral products).
using EquivalentKernel = ImageGrid;

struct EquivalenceReport {
    std::string case_name;
    std::string mode;  // "fba" or "wwfba"
    double relative_l2_error = 0.0;
    bool tolerance_passed = false;
    EquivalentKernel kernel;
    ImageGrid noise_term;  // empty when the case is noiseless

    std::string to_jsonl() const;
};

// Embeds a centered kernel into a w x h grid, origin at (0,0), taps wrapping
// periodically. Multiplying spectra by fft2 of this equals convolving with
// the centered kernel.
ImageGrid pad_kernel_periodic(const BlurKernel& kernel, int width, int height);

// Circular convolution through the Fourier domain (kernel in origin layout).
ImageGrid apply_kernel_periodic(const ImageGrid& image, const EquivalentKernel& kernel);

// k_e for plain Fourier accumulation: inverse transform of the weighted
// kernel spectra. Weights must come from the pipeline run being checked.
EquivalentKernel equivalent_kernel_fba(const std::vector<BlurKernel>& kernels,
                                       const std::vector<WeightField>& weights);

// k_e for per-subband accumulation: the weighted kernel spectra are summed
// across frames and subbands against |Psi_n|^2, the subband filter response.
EquivalentKernel equivalent_kernel_wwfba(const std::vector<BlurKernel>& kernels,
                                         const SubbandWeights& subband_weights,
                                         const FilterBank& bank, int levels);

// Weighted-average noise term for each mode.
ImageGrid verify_noise_term(const std::vector<ImageGrid>& noises,
                            const std::vector<WeightField>& weights);
ImageGrid verify_noise_term(const std::vector<ImageGrid>& noises,
                            const SubbandWeights& subband_weights, const FilterBank& bank,
                            int levels);

// Synthesis-filter spectrum Psi_n on a w x h grid for every subband
// (detail bands level-major, lowpass last), matching analyze() ordering.
std::vector<ComplexSpectrum> subband_filter_spectra(const FilterBank& bank, int levels,
                                                    int width, int height);

// ---- equivalence test matrix -------------------------------------------------

struct EquivalenceCase {
    std::string name;
    std::string mode;  // "fba" | "wwfba"
    int width = 32, height = 32;
    int frame_count = 2;
    int levels = 1;            // wwfba only
    bool gaussian_blur = true; // false: motion kernels
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    double tolerance = 1e-6;
};

// The standard verification matrix: sizes 32..128, M in {2,5,10}, Gaussian
// and motion kernels, noiseless and noisy, wwfba at J in {1,2}.
std::vector<EquivalenceCase> equivalence_matrix(bool small_matrix);

// Builds the synthetic burst (v_i = k_i * u (+ n_i), periodic), runs the
// pipeline, constructs k_e (and the noise term), and compares.
EquivalenceReport run_equivalence_case(const EquivalenceCase& c);

void write_jsonl(std::ostream& out, const std::vector<EquivalenceReport>& reports);

// Burst on which the pointwise-weighted (wwba) and per-subband-spectral
// (wwfba) accumulations measurably part ways: a chart with orthogonal bar
// orientations in disjoint halves, blurred horizontally in one frame and
// vertically in the other, so each frame keeps detail energy the other lost.
struct WitnessResult {
    double wwba_vs_wwfba_rel = 0.0;    // expected well above 1e-3
    double wwba_vs_kernel_rel = 0.0;   // wwba against the wwfba equivalent kernel
    double wwfba_vs_kernel_rel = 0.0;  // sanity: passes the usual tolerance
};

WitnessResult run_noncommutativity_witness();

}  // namespace burstacc
