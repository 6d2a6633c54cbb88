#include "burstacc/synth.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

#include "burstacc/convolve.hpp"
#include "burstacc/parallel.hpp"
#include "burstacc/rng.hpp"

namespace burstacc {

namespace {

constexpr std::uint64_t kWarpStream = 0x77617270;   // per-frame warp noise
constexpr std::uint64_t kNoiseStream = 0x6e6f6973;  // per-frame sensor noise

const BlurKernel& kernel_for_frame(const DegradationSpec& spec, int frame_index) {
    if (spec.kernels.size() == 1) return spec.kernels.front();
    return spec.kernels[std::size_t(frame_index)];
}

}  // namespace

FlowField random_smooth_warp(int width, int height, const DegradationSpec& spec,
                             int frame_index) {
    FlowField flow(width, height);
    if (spec.warp_amplitude <= 0.0) return flow;

    Rng rng(Rng::mix(Rng::mix(spec.seed, kWarpStream), std::uint64_t(frame_index)));
    for (double& v : flow.dx.samples()) v = rng.next_gaussian();
    for (double& v : flow.dy.samples()) v = rng.next_gaussian();

    if (spec.warp_smoothness > 0.0) {
        // The half-width of the autocorrelation of G_s-smoothed white noise
        // is 2*s*sqrt(ln 2); invert that so warp_smoothness lands on the
        // measured half-width.
        const double s = spec.warp_smoothness / (2.0 * std::sqrt(std::log(2.0)));
        flow.dx = gaussian_blur(flow.dx, s);
        flow.dy = gaussian_blur(flow.dy, s);
    }

    double peak = 0.0;
    for (std::size_t i = 0; i < flow.dx.size(); ++i)
        peak = std::max(peak, std::hypot(flow.dx[i], flow.dy[i]));
    if (peak > 0.0) {
        const double scale = spec.warp_amplitude / peak;
        for (std::size_t i = 0; i < flow.dx.size(); ++i) {
            flow.dx[i] *= scale;
            flow.dy[i] *= scale;
        }
    }
    return flow;
}

SyntheticBurst generate_burst(const ImageGrid& clean, int frame_count,
                              const DegradationSpec& spec) {
    if (frame_count < 1)
        throw std::invalid_argument("generate_burst: frame_count must be >= 1");
    if (!spec.kernels.empty() && spec.kernels.size() != 1 &&
        int(spec.kernels.size()) != frame_count)
        throw std::invalid_argument("generate_burst: need 0, 1, or M kernels");

    SyntheticBurst burst;
    burst.truth.clean = clean;
    burst.truth.flows.resize(std::size_t(frame_count));
    burst.truth.noises.resize(std::size_t(frame_count));
    if (!spec.kernels.empty()) burst.truth.kernels.resize(std::size_t(frame_count));
    burst.frames.frames.resize(std::size_t(frame_count));

    parallel_for(std::size_t(frame_count), [&](std::size_t i) {
        const int fi = int(i);
        const FlowField flow = random_smooth_warp(clean.width(), clean.height(), spec, fi);

        ImageGrid frame = clean;
        if (spec.blur_then_warp) {
            if (!spec.kernels.empty())
                frame = convolve(frame, kernel_for_frame(spec, fi), BoundaryMode::Symmetric);
            frame = warp_bilinear(frame, flow);
        } else {
            frame = warp_bilinear(frame, flow);
            if (!spec.kernels.empty())
                frame = convolve(frame, kernel_for_frame(spec, fi), BoundaryMode::Symmetric);
        }

        ImageGrid noise(clean.width(), clean.height(), 0.0);
        if (spec.noise_sigma > 0.0) {
            Rng rng(Rng::mix(Rng::mix(spec.seed, kNoiseStream), std::uint64_t(fi)));
            for (double& v : noise.samples()) v = spec.noise_sigma * rng.next_gaussian();
            for (std::size_t k = 0; k < frame.size(); ++k) frame[k] += noise[k];
        }

        burst.truth.flows[i] = flow;
        burst.truth.noises[i] = std::move(noise);
        if (!spec.kernels.empty()) burst.truth.kernels[i] = kernel_for_frame(spec, fi);
        burst.frames.frames[i] = std::move(frame);
    });
    return burst;
}

double psnr(const ImageGrid& a, const ImageGrid& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("psnr: dimension mismatch");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        mse += d * d;
    }
    mse /= double(a.size());
    if (mse == 0.0) return 150.0;  // identical-image sentinel
    return 10.0 * std::log10(1.0 / mse);
}

ImageGrid make_bar_chart(int width, int height) {
    const double bg = 0.85, fg = 0.12;
    ImageGrid img(width, height, bg);

    auto fill = [&](int x0, int y0, int x1, int y1, double v) {
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, width);
        y1 = std::min(y1, height);
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x) img.at(x, y) = v;
    };

    // frame border
    const int b = std::max(1, std::min(width, height) / 40);
    fill(0, 0, width, b, fg);
    fill(0, height - b, width, height, fg);
    fill(0, 0, b, height, fg);
    fill(width - b, 0, width, height, fg);

    // vertical bar groups of decreasing width across the upper band
    const int top = height / 7, bottom = height / 2;
    const int margin = width / 12;
    const int max_bar = std::max(2, std::min(width, height) / 16);
    const int min_bar = std::max(2, std::min(width, height) / 21);
    int x = margin;
    for (int bar_w = max_bar; bar_w >= min_bar; --bar_w) {
        for (int k = 0; k < 5 && x + bar_w <= width - margin; ++k) {
            fill(x, top, x + bar_w, bottom, fg);
            x += 2 * bar_w;
        }
        x += bar_w;
    }

    // horizontal bars of decreasing height, lower-left
    const int hb_bottom = (height * 13) / 14;
    int y = (height * 4) / 7;
    for (int bar_h = max_bar; bar_h >= min_bar; --bar_h) {
        for (int k = 0; k < 3 && y + bar_h <= hb_bottom; ++k) {
            fill(margin, y, width / 2 - margin, y + bar_h, fg);
            y += 2 * bar_h;
        }
        y += bar_h;
    }

    // lower-right: solid block, mid-gray block, and a checkerboard for
    // unambiguous corners
    fill((width * 11) / 20, (height * 4) / 7, (width * 15) / 20, (height * 11) / 14, fg);
    fill((width * 16) / 20, (height * 9) / 14, (width * 19) / 20, (height * 11) / 14, 0.5);
    const int cell = std::max(3, min_bar);
    const int cx0 = (width * 11) / 20, cy0 = (height * 23) / 28;
    for (int cy = 0; cy < 4; ++cy)
        for (int cx = 0; cx < 8; ++cx)
            if ((cx + cy) % 2 == 0)
                fill(cx0 + cx * cell, cy0 + cy * cell, cx0 + (cx + 1) * cell,
                     cy0 + (cy + 1) * cell, fg);

    return img;
}

ImageGrid make_smooth_texture(int width, int height, std::uint64_t seed,
                              double smoothing_sigma) {
    Rng rng(Rng::mix(seed, 0x74657874));
    ImageGrid img(width, height);
    for (double& v : img.samples()) v = rng.next_gaussian();
    if (smoothing_sigma > 0.0) img = gaussian_blur(img, smoothing_sigma);

    double lo = img[0], hi = img[0];
    for (double v : img.samples()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    for (double& v : img.samples()) v = (v - lo) / span;
    return img;
}

void persist_burst(const SyntheticBurst& burst, const DegradationSpec& spec,
                   const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);

    char name[32];
    for (int i = 0; i < burst.frames.count(); ++i) {
        std::snprintf(name, sizeof(name), "frame_%03d.png", i + 1);
        save_image(burst.frames[std::size_t(i)], directory / name);
    }

    nlohmann::json j;
    j["spec"] = {
        {"warp_amplitude", spec.warp_amplitude},
        {"warp_smoothness", spec.warp_smoothness},
        {"noise_sigma", spec.noise_sigma},
        {"seed", spec.seed},
        {"blur_then_warp", spec.blur_then_warp},
        {"kernel_count", spec.kernels.size()},
    };
    j["frames"] = burst.frames.count();
    j["width"] = burst.frames.width();
    j["height"] = burst.frames.height();

    nlohmann::json flows = nlohmann::json::array();
    for (const auto& f : burst.truth.flows) {
        flows.push_back({
            {"dx", std::vector<double>(f.dx.samples().begin(), f.dx.samples().end())},
            {"dy", std::vector<double>(f.dy.samples().begin(), f.dy.samples().end())},
        });
    }
    j["flows"] = std::move(flows);

    nlohmann::json noises = nlohmann::json::array();
    for (const auto& n : burst.truth.noises)
        noises.push_back(std::vector<double>(n.samples().begin(), n.samples().end()));
    j["noises"] = std::move(noises);

    nlohmann::json kernels = nlohmann::json::array();
    for (const auto& k : burst.truth.kernels) {
        kernels.push_back({
            {"width", k.grid.width()},
            {"height", k.grid.height()},
            {"taps", std::vector<double>(k.grid.samples().begin(), k.grid.samples().end())},
        });
    }
    j["kernels"] = std::move(kernels);

    std::ofstream out(directory / "ground_truth.json");
    if (!out)
        throw std::runtime_error((directory / "ground_truth.json").string() +
                                 ": cannot open for writing");
    out << j.dump();
}

}  // namespace burstacc
