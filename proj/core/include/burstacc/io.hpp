#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "burstacc/grid.hpp"

namespace burstacc {

// Ordered burst of same-sized frames.
struct FrameSequence {
    std::vector<ImageGrid> frames;

    FrameSequence() = default;
    explicit FrameSequence(std::vector<ImageGrid> f);

    int count() const { return int(frames.size()); }
    int width() const { return frames.empty() ? 0 : frames.front().width(); }
    int height() const { return frames.empty() ? 0 : frames.front().height(); }

    const ImageGrid& operator[](std::size_t i) const { return frames[i]; }
    ImageGrid& operator[](std::size_t i) { return frames[i]; }
};

// Loads one grayscale image. Supports binary PGM (P5, maxval 255 or 65535)
// and PNG (8/16-bit gray or color; color is reduced to BT.601 luminance).
// Values are scaled to [0, 1].
ImageGrid load_image(const std::filesystem::path& path);

// Saves as 16-bit grayscale PNG; values clamped to [0, 1] first.
void save_image(const ImageGrid& image, const std::filesystem::path& path);

// Loads every file in `directory` whose name matches `pattern` (shell glob,
// e.g. "*.png"), in natural filename order. Throws if nothing matches or if
// frame dimensions disagree (the error names the offending file).
FrameSequence load_sequence(const std::filesystem::path& directory, const std::string& pattern);

// Natural-order comparison: digit runs compare numerically ("2" < "10").
bool natural_less(const std::string& a, const std::string& b);

}  // namespace burstacc
