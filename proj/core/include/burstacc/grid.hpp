#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace burstacc {

// Boundary handling for spatial filtering. Symmetric is half-sample mirror
// extension (the edge sample is repeated: ... x1 x0 | x0 x1 ...), which keeps
// normalized filters mean-preserving. Periodic wraps around.
enum class BoundaryMode { Symmetric, Periodic };

// 2-D scalar raster, row-major, (x, y) with x along a row.
class ImageGrid {
public:
    ImageGrid() = default;

    ImageGrid(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          samples_(checked_size(width, height), fill) {}

    ImageGrid(int width, int height, std::vector<double> samples)
        : width_(width), height_(height), samples_(std::move(samples)) {
        if (samples_.size() != checked_size(width, height))
            throw std::invalid_argument("ImageGrid: sample count does not match dimensions");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

    double& at(int x, int y) { return samples_[std::size_t(y) * width_ + x]; }
    double at(int x, int y) const { return samples_[std::size_t(y) * width_ + x]; }

    double& operator[](std::size_t i) { return samples_[i]; }
    double operator[](std::size_t i) const { return samples_[i]; }

    std::span<double> samples() { return samples_; }
    std::span<const double> samples() const { return samples_; }
    double* data() { return samples_.data(); }
    const double* data() const { return samples_.data(); }

    bool same_shape(const ImageGrid& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

    bool is_finite() const {
        for (double v : samples_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    static std::size_t checked_size(int w, int h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("ImageGrid: dimensions must be positive");
        return std::size_t(w) * std::size_t(h);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

// 2-D complex raster holding an unnormalized DFT; DC bin at index (0,0).
class ComplexSpectrum {
public:
    using value_type = std::complex<double>;

    ComplexSpectrum() = default;

    ComplexSpectrum(int width, int height)
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("ComplexSpectrum: dimensions must be positive");
        bins_.assign(std::size_t(width) * height, value_type(0.0, 0.0));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return bins_.size(); }

    value_type& at(int kx, int ky) { return bins_[std::size_t(ky) * width_ + kx]; }
    value_type at(int kx, int ky) const { return bins_[std::size_t(ky) * width_ + kx]; }

    value_type& operator[](std::size_t i) { return bins_[i]; }
    value_type operator[](std::size_t i) const { return bins_[i]; }

    std::span<value_type> bins() { return bins_; }
    std::span<const value_type> bins() const { return bins_; }

    bool same_shape(const ComplexSpectrum& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<value_type> bins_;
};

// Odd-sized convolution kernel with its center tap at the geometric center.
struct BlurKernel {
    ImageGrid grid;
    bool normalized = false;

    BlurKernel() = default;

    explicit BlurKernel(ImageGrid g, bool normalize_taps = true) : grid(std::move(g)) {
        if (grid.width() % 2 == 0 || grid.height() % 2 == 0)
            throw std::invalid_argument("BlurKernel: dimensions must be odd");
        if (normalize_taps) normalize();
    }

    int radius_x() const { return grid.width() / 2; }
    int radius_y() const { return grid.height() / 2; }

    double tap_sum() const {
        double s = 0.0;
        for (double v : grid.samples()) s += v;
        return s;
    }

    void normalize() {
        const double s = tap_sum();
        if (std::abs(s) < 1e-300)
            throw std::invalid_argument("BlurKernel: cannot normalize zero-sum kernel");
        for (double& v : grid.samples()) v /= s;
        normalized = true;
    }
};

// ---- small arithmetic helpers shared across modules ------------------------

inline double l2_norm(const ImageGrid& a) {
    double s = 0.0;
    for (double v : a.samples()) s += v * v;
    return std::sqrt(s);
}

inline double l2_distance(const ImageGrid& a, const ImageGrid& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("l2_distance: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double relative_l2_error(const ImageGrid& got, const ImageGrid& want) {
    const double denom = l2_norm(want);
    const double dist = l2_distance(got, want);
    return denom > 0.0 ? dist / denom : dist;
}

inline double linf_distance(const ImageGrid& a, const ImageGrid& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("linf_distance: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double mean_value(const ImageGrid& a) {
    double s = 0.0;
    for (double v : a.samples()) s += v;
    return s / double(a.size());
}

}  // namespace burstacc
