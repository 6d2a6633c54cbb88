#pragma once

#include <vector>

#include "burstacc/fft.hpp"
#include "burstacc/grid.hpp"
#include "burstacc/io.hpp"
#include "burstacc/report.hpp"

namespace burstacc {

// sigma sentinel: resolve to min(width, height) / 50 at use site.
constexpr double kSigmaAuto = -1.0;

struct SpectralParams {
    double p = 11.0;
    double sigma = kSigmaAuto;  // 0 disables weight smoothing (test hook)
};

double resolve_sigma(const SpectralParams& params, int width, int height);

// Per-frame share of each frequency bin (or subband pixel); nonnegative,
// and across a burst the per-bin sum over frames is 1.
struct WeightField {
    ImageGrid values;
    int frame_index = 0;
};

// The weight rule shared by the Fourier and the wavelet-domain variants:
// fields of |coefficient| are max-normalized per bin across frames, raised
// to p, Gaussian-smoothed, then normalized to sum 1 per bin. Bins whose
// denominator collapses below 1e-30 fall back to uniform 1/M.
std::vector<WeightField> weights_from_magnitudes(const std::vector<ImageGrid>& magnitudes,
                                                 double p, double sigma,
                                                 BoundaryMode smoothing_boundary);

// Weights from frame spectra; smoothing is periodic over the (unshifted)
// frequency plane.
std::vector<WeightField> fba_weights(const std::vector<ComplexSpectrum>& spectra,
                                     const SpectralParams& params);

struct FbaResult {
    ImageGrid image;
    std::vector<WeightField> weights;
};

// Weighted Fourier burst accumulation: per-bin weighted average of the
// frame spectra, weights from fba_weights, inverse transform, real part.
FbaResult fba_detailed(const FrameSequence& burst, const SpectralParams& params,
                       StageTimes* stages = nullptr);
ImageGrid fba(const FrameSequence& burst, const SpectralParams& params);

struct SparseOptions {
    // Divide the accumulated spectrum by M. The literal accumulation just
    // sums, which scales intensity by the burst length.
    bool normalize_mean = true;
    // Optionally divide spectra by sqrt(W*H) before thresholding (and undo
    // after) so one lambda means the same thing at every resolution. Off by
    // default: the stock lambda = 0.5 is calibrated against raw spectral
    // magnitudes, where it sits near the noise floor of desk-scale images;
    // under the rescaled convention it lands orders of magnitude above it
    // and flattens the reconstruction.
    bool rescale_lambda = false;
};

struct SfbaResult {
    ImageGrid image;
    std::size_t nonzero_coefficients = 0;
    std::size_t total_coefficients = 0;

    double nonzero_fraction() const {
        return total_coefficients ? double(nonzero_coefficients) / double(total_coefficients)
                                  : 0.0;
    }
};

// Sparse Fourier burst accumulation: complex soft-threshold each frame
// spectrum, average, inverse transform.
SfbaResult sfba_detailed(const FrameSequence& burst, double lambda,
                         const SparseOptions& options = {}, StageTimes* stages = nullptr);
ImageGrid sfba(const FrameSequence& burst, double lambda);

}  // namespace burstacc
