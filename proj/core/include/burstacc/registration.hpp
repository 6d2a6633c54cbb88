#pragma once

#include "burstacc/grid.hpp"
#include "burstacc/io.hpp"
#include "burstacc/report.hpp"

namespace burstacc {

// Per-pixel backward displacement: sampling the moving frame at
// (x + dx, y + dy) lands on the reference frame's geometry.
struct FlowField {
    ImageGrid dx;
    ImageGrid dy;

    FlowField() = default;
    FlowField(int width, int height)
        : dx(width, height, 0.0), dy(width, height, 0.0) {}

    int width() const { return dx.width(); }
    int height() const { return dx.height(); }
};

struct FlowOptions {
    int window = 11;          // odd Lucas-Kanade window side
    int pyramid_levels = 3;   // coarse-to-fine, factor 2
    int iterations = 3;       // fixed-point refinements per level
    // Structure-tensor guard. Windows whose largest eigenvalue falls below
    // it get no update; windows where only the smallest does are treated as
    // aperture cases and updated along the dominant direction only. Sized so
    // sensor-noise tensors (~30 * window^2 * sigma^2) stay below it.
    double min_eigenvalue = 1e-3;
    double max_step = 1.0;  // per-iteration update clamp, pixels
    double max_flow_fraction = 0.25;  // displacement cap, fraction of min dim

    // Largest pyramid depth this frame size supports (>= 1).
    int clamped_levels(int width, int height) const;
};

// Pixel-wise arithmetic mean of the burst.
ImageGrid average_frame(const FrameSequence& burst);

// Dense pyramidal Lucas-Kanade. Requires
// min(width, height) >= 2^(levels-1) * window for the requested depth.
FlowField lk_flow(const ImageGrid& reference, const ImageGrid& moving,
                  const FlowOptions& opts = {});

// Backward warp with bilinear sampling; out-of-domain coordinates are
// clamped to the edge.
ImageGrid warp_bilinear(const ImageGrid& image, const FlowField& flow);

// Iteratively averages the burst, estimates per-frame flow from the average,
// and warps each frame onto the average's geometry. Pyramid depth is clamped
// to what the frame size supports.
FrameSequence register_sequence(const FrameSequence& burst, int iterations = 1,
                                const FlowOptions& opts = {}, StageTimes* stages = nullptr);

}  // namespace burstacc
