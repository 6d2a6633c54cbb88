#pragma once

#include <optional>
#include <string>
#include <vector>

#include "burstacc/fourier.hpp"
#include "burstacc/framelet.hpp"
#include "burstacc/grid.hpp"
#include "burstacc/io.hpp"
#include "burstacc/registration.hpp"
#include "burstacc/report.hpp"
#include "burstacc/threshold.hpp"

namespace burstacc {

enum class Method { Fba, FrWwba, FrWwfba, Sfba, FrSwba };

// Thrown for method names that are recognized but deliberately not built
// (the curvelet variants).
struct UnsupportedVariant : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Accepts "fba", "fr-wwba", "fr-wwfba", "sfba", "fr-swba" (case-insensitive).
// "c-wwba" / "c-wwfba" / "c-swba" raise UnsupportedVariant; anything else
// raises invalid_argument.
Method parse_method(const std::string& name);
std::string method_name(Method method);
bool is_sparse(Method method);

// lambda sentinel: resolve to the per-method default (0.5 Fourier-domain,
// 0.001 wavelet-domain).
constexpr double kLambdaAuto = -1.0;

struct BurstConfig {
    Method method = Method::Fba;
    double p = 11.0;
    double lambda = kLambdaAuto;
    double sigma = kSigmaAuto;
    int levels = 4;
    bool register_nonrigid = false;
    int register_iterations = 1;
    bool literal_sba = false;        // plain spectral sum, no 1/M
    bool rescale_lambda = false;     // resolution-independent lambda scale for sfba
    bool threshold_lowpass = false;  // shrink the lowpass residual too
    BoundaryMode boundary = BoundaryMode::Symmetric;
    FlowOptions flow;

    double resolved_lambda() const;
};

// ---- wavelet-domain accumulation -------------------------------------------

struct SubbandWeights {
    // weights[n][i]: weight field of frame i in subband n. Spatial fields
    // for wwba, frequency-plane fields for wwfba.
    std::vector<std::vector<WeightField>> weights;
};

struct WwbaResult {
    ImageGrid image;
    SubbandWeights weights;
};

// Weighted wavelet burst accumulation: weights computed pointwise on the
// subband coefficients, smoothed spatially with the same sigma rule as the
// Fourier case. The _detailed variant also captures every weight field,
// which is sizeable on long bursts; the plain call skips the capture.
WwbaResult wwba_detailed(const FrameSequence& burst, const FilterBank& bank, int levels,
                         const SpectralParams& params,
                         BoundaryMode boundary = BoundaryMode::Symmetric,
                         StageTimes* stages = nullptr);
ImageGrid wwba(const FrameSequence& burst, const FilterBank& bank, int levels,
               const SpectralParams& params, BoundaryMode boundary = BoundaryMode::Symmetric,
               StageTimes* stages = nullptr);

struct WwfbaResult {
    ImageGrid image;
    SubbandWeights weights;  // frequency-domain, captured per subband
};

// Full Fourier burst accumulation run independently inside every subband.
WwfbaResult wwfba_detailed(const FrameSequence& burst, const FilterBank& bank, int levels,
                           const SpectralParams& params,
                           BoundaryMode boundary = BoundaryMode::Symmetric,
                           StageTimes* stages = nullptr);
ImageGrid wwfba(const FrameSequence& burst, const FilterBank& bank, int levels,
                const SpectralParams& params, BoundaryMode boundary = BoundaryMode::Symmetric,
                StageTimes* stages = nullptr);

struct SwbaOptions {
    bool normalize_mean = true;
    bool threshold_lowpass = false;
};

struct SwbaResult {
    ImageGrid image;
    std::size_t nonzero_coefficients = 0;
    std::size_t total_coefficients = 0;

    double nonzero_fraction() const {
        return total_coefficients ? double(nonzero_coefficients) / double(total_coefficients)
                                  : 0.0;
    }
};

// Sparse wavelet burst accumulation: soft-threshold the detail coefficients
// of every frame, average per subband, synthesize. The lowpass residual is
// averaged untouched unless threshold_lowpass is set.
SwbaResult swba_detailed(const FrameSequence& burst, const FilterBank& bank, int levels,
                         double lambda, const SwbaOptions& options = {},
                         BoundaryMode boundary = BoundaryMode::Symmetric,
                         StageTimes* stages = nullptr);
ImageGrid swba(const FrameSequence& burst, const FilterBank& bank, int levels, double lambda);

// ---- dispatch ----------------------------------------------------------------

struct RunReport {
    std::string method;
    double p = 0.0;
    std::optional<double> lambda;
    double sigma = 0.0;
    int levels = 0;
    std::string registration = "none";
    int register_iterations = 0;
    bool literal_sba = false;
    bool rescale_lambda = false;
    bool threshold_lowpass = false;
    int frame_count = 0;
    int width = 0;
    int height = 0;
    StageTimes stages;
    double total_seconds = 0.0;
    std::optional<double> psnr;
    std::optional<double> nonzero_fraction;

    std::string to_json() const;
};

struct RunResult {
    ImageGrid image;
    RunReport report;
};

// Optional non-rigid registration, then dispatch on config.method.
RunResult run_method(const FrameSequence& burst, const BurstConfig& config);

}  // namespace burstacc
