#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "burstacc/grid.hpp"
#include "burstacc/io.hpp"
#include "burstacc/registration.hpp"

namespace burstacc {

// Degradation recipe: per-frame smooth random warp, blur, additive Gaussian
// noise. The seed fully determines the burst.
struct DegradationSpec {
    double warp_amplitude = 0.0;   // peak displacement, pixels
    double warp_smoothness = 8.0;  // autocorrelation half-width, pixels
    std::vector<BlurKernel> kernels;  // empty: none; one: shared; M: per frame
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    bool blur_then_warp = true;  // degradation order; flag for sensitivity runs
};

// Everything needed to evaluate a generated burst against its source.
struct GroundTruth {
    ImageGrid clean;
    std::vector<FlowField> flows;
    std::vector<ImageGrid> noises;
    std::vector<BlurKernel> kernels;  // one entry per frame (empty if no blur)
};

struct SyntheticBurst {
    FrameSequence frames;
    GroundTruth truth;
};

// White Gaussian displacement field smoothed to the requested correlation
// length and rescaled so the peak |displacement| equals warp_amplitude.
// Deterministic in (spec.seed, frame_index).
FlowField random_smooth_warp(int width, int height, const DegradationSpec& spec,
                             int frame_index);

// frame_i = warp(blur(clean)) + noise, per the spec; records all of it.
SyntheticBurst generate_burst(const ImageGrid& clean, int frame_count,
                              const DegradationSpec& spec);

// 10*log10(1/MSE) for [0,1] images; identical inputs report 150 dB.
double psnr(const ImageGrid& a, const ImageGrid& b);

// Resolution-target test chart: vertical bar groups of decreasing width
// plus horizontal bars and solid blocks, so both gradient orientations and
// corners are present.
ImageGrid make_bar_chart(int width, int height);

// Smooth random texture (blurred noise in [0,1]); handy as flow-test input.
ImageGrid make_smooth_texture(int width, int height, std::uint64_t seed,
                              double smoothing_sigma = 3.0);

// Writes frames as 16-bit PNGs (frame_001.png, ...) plus ground_truth.json
// holding the degradation record.
void persist_burst(const SyntheticBurst& burst, const DegradationSpec& spec,
                   const std::filesystem::path& directory);

}  // namespace burstacc
