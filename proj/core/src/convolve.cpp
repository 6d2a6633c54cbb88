#include "burstacc/convolve.hpp"

#include <algorithm>
#include <cmath>

namespace burstacc {

ImageGrid filter_rows(const ImageGrid& img, const std::vector<double>& taps,
                      int center, int dilation, Extension ext) {
    const int w = img.width(), h = img.height();
    ImageGrid out(w, h);
    const int nt = int(taps.size());
    for (int y = 0; y < h; ++y) {
        const double* row = img.data() + std::size_t(y) * w;
        double* orow = out.data() + std::size_t(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = 0; t < nt; ++t) {
                const long xi = long(x) - long(dilation) * (t - center);
                acc += taps[t] * extended_sample(row, 1, w, xi, ext);
            }
            orow[x] = acc;
        }
    }
    return out;
}

ImageGrid filter_cols(const ImageGrid& img, const std::vector<double>& taps,
                      int center, int dilation, Extension ext) {
    const int w = img.width(), h = img.height();
    ImageGrid out(w, h);
    const int nt = int(taps.size());
    for (int x = 0; x < w; ++x) {
        const double* col = img.data() + x;
        for (int y = 0; y < h; ++y) {
            double acc = 0.0;
            for (int t = 0; t < nt; ++t) {
                const long yi = long(y) - long(dilation) * (t - center);
                acc += taps[t] * extended_sample(col, w, h, yi, ext);
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

ImageGrid convolve(const ImageGrid& image, const BlurKernel& kernel, BoundaryMode boundary) {
    const ImageGrid& k = kernel.grid;
    if (k.width() % 2 == 0 || k.height() % 2 == 0)
        throw std::invalid_argument("convolve: kernel dimensions must be odd");
    if (k.width() > image.width() || k.height() > image.height())
        throw std::invalid_argument("convolve: kernel larger than image");

    const Extension ext = extension_for(boundary);
    const int w = image.width(), h = image.height();
    const int rx = kernel.radius_x(), ry = kernel.radius_y();
    ImageGrid out(w, h);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int v = -ry; v <= ry; ++v) {
                const long ys = long(y) - v;
                for (int u = -rx; u <= rx; ++u) {
                    const long xs = long(x) - u;
                    long xi = xs;
                    if (xi < 0 || xi >= w) {
                        if (ext == Extension::Periodic) {
                            xi %= w;
                            if (xi < 0) xi += w;
                        } else {
                            const long p = 2L * w;
                            xi %= p;
                            if (xi < 0) xi += p;
                            if (xi >= w) xi = p - 1 - xi;
                        }
                    }
                    long yi = ys;
                    if (yi < 0 || yi >= h) {
                        if (ext == Extension::Periodic) {
                            yi %= h;
                            if (yi < 0) yi += h;
                        } else {
                            const long p = 2L * h;
                            yi %= p;
                            if (yi < 0) yi += p;
                            if (yi >= h) yi = p - 1 - yi;
                        }
                    }
                    acc += k.at(u + rx, v + ry) * image.at(int(xi), int(yi));
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

ImageGrid convolve_periodic_full(const ImageGrid& image, const ImageGrid& kernel) {
    if (!image.same_shape(kernel))
        throw std::invalid_argument("convolve_periodic_full: shape mismatch");
    const int w = image.width(), h = image.height();
    ImageGrid out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int v = 0; v < h; ++v) {
                const int ys = (y - v) % h < 0 ? (y - v) % h + h : (y - v) % h;
                for (int u = 0; u < w; ++u) {
                    const int xs = (x - u) % w < 0 ? (x - u) % w + w : (x - u) % w;
                    acc += kernel.at(u, v) * image.at(xs, ys);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

std::vector<double> gaussian_taps(double sigma, int* center) {
    if (sigma <= 0.0)
        throw std::invalid_argument("gaussian_taps: sigma must be positive");
    const int r = int(std::ceil(4.0 * sigma));
    std::vector<double> taps(2 * r + 1);
    double sum = 0.0;
    for (int k = -r; k <= r; ++k) {
        const double v = std::exp(-0.5 * double(k) * double(k) / (sigma * sigma));
        taps[k + r] = v;
        sum += v;
    }
    for (double& v : taps) v /= sum;
    if (center) *center = r;
    return taps;
}

ImageGrid gaussian_blur(const ImageGrid& image, double sigma, BoundaryMode boundary) {
    int center = 0;
    const std::vector<double> taps = gaussian_taps(sigma, &center);
    const Extension ext = extension_for(boundary);
    return filter_cols(filter_rows(image, taps, center, 1, ext), taps, center, 1, ext);
}

ImageGrid gaussian_blur(const ImageGrid& image, double sigma) {
    return gaussian_blur(image, sigma, BoundaryMode::Symmetric);
}

BlurKernel gaussian_kernel(double sigma) {
    int center = 0;
    const std::vector<double> taps = gaussian_taps(sigma, &center);
    const int n = int(taps.size());
    ImageGrid g(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            g.at(x, y) = taps[x] * taps[y];
    return BlurKernel(std::move(g));
}

BlurKernel identity_kernel() {
    ImageGrid g(1, 1, 1.0);
    return BlurKernel(std::move(g));
}

BlurKernel motion_kernel(double length, double angle_deg) {
    if (length < 1.0)
        throw std::invalid_argument("motion_kernel: length must be >= 1");
    const double theta = angle_deg * M_PI / 180.0;
    const double dx = std::cos(theta), dy = std::sin(theta);
    const double half = 0.5 * (length - 1.0);
    const int r = int(std::ceil(half)) + 1;
    const int n = 2 * r + 1;
    ImageGrid g(n, n, 0.0);
    // splat evenly spaced samples along the segment with bilinear weights
    const int steps = std::max(2, int(std::ceil(length * 8)));
    for (int s = 0; s < steps; ++s) {
        const double t = -half + (2.0 * half) * (steps == 1 ? 0.5 : double(s) / (steps - 1));
        const double px = r + t * dx, py = r + t * dy;
        const int x0 = int(std::floor(px)), y0 = int(std::floor(py));
        const double ax = px - x0, ay = py - y0;
        g.at(x0, y0) += (1 - ax) * (1 - ay);
        g.at(x0 + 1, y0) += ax * (1 - ay);
        g.at(x0, y0 + 1) += (1 - ax) * ay;
        g.at(x0 + 1, y0 + 1) += ax * ay;
    }
    return BlurKernel(std::move(g));
}

}  // namespace burstacc
