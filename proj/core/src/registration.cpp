#include "burstacc/registration.hpp"

#include <cmath>

#include "burstacc/convolve.hpp"
#include "burstacc/parallel.hpp"

namespace burstacc {

namespace {

// Decimate by 2 after a sigma=1 smoothing.
ImageGrid downsample2(const ImageGrid& img) {
    const ImageGrid smoothed = gaussian_blur(img, 1.0);
    const int w = (img.width() + 1) / 2, h = (img.height() + 1) / 2;
    ImageGrid out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = smoothed.at(std::min(2 * x, img.width() - 1),
                                       std::min(2 * y, img.height() - 1));
    return out;
}

ImageGrid resize_bilinear(const ImageGrid& img, int w, int h) {
    ImageGrid out(w, h);
    const double sx = double(img.width()) / w, sy = double(img.height()) / h;
    for (int y = 0; y < h; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, double(img.height() - 1));
        const int y0 = int(fy);
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double ay = fy - y0;
        for (int x = 0; x < w; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, double(img.width() - 1));
            const int x0 = int(fx);
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double ax = fx - x0;
            out.at(x, y) = (1 - ax) * (1 - ay) * img.at(x0, y0) +
                           ax * (1 - ay) * img.at(x1, y0) +
                           (1 - ax) * ay * img.at(x0, y1) + ax * ay * img.at(x1, y1);
        }
    }
    return out;
}

// Central differences, symmetric boundary.
void gradients(const ImageGrid& img, ImageGrid& gx, ImageGrid& gy) {
    const int w = img.width(), h = img.height();
    gx = ImageGrid(w, h);
    gy = ImageGrid(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int xm = x > 0 ? x - 1 : 0, xp = x < w - 1 ? x + 1 : w - 1;
            const int ym = y > 0 ? y - 1 : 0, yp = y < h - 1 ? y + 1 : h - 1;
            gx.at(x, y) = 0.5 * (img.at(xp, y) - img.at(xm, y));
            gy.at(x, y) = 0.5 * (img.at(x, yp) - img.at(x, ym));
        }
    }
}

// Window sum with symmetric extension (separable box filter).
ImageGrid box_sum(const ImageGrid& img, int window) {
    const std::vector<double> taps(std::size_t(window), 1.0);
    const int center = window / 2;
    return filter_cols(filter_rows(img, taps, center, 1, Extension::SymmetricEven), taps,
                       center, 1, Extension::SymmetricEven);
}

ImageGrid multiply(const ImageGrid& a, const ImageGrid& b) {
    ImageGrid out(a.width(), a.height());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

}  // namespace

int FlowOptions::clamped_levels(int width, int height) const {
    const int limit = std::min(width, height);
    int levels = 1;
    while (levels < pyramid_levels && (1 << levels) * window <= limit) ++levels;
    return levels;
}

ImageGrid average_frame(const FrameSequence& burst) {
    if (burst.count() < 1)
        throw std::invalid_argument("average_frame: empty burst");
    ImageGrid acc(burst.width(), burst.height(), 0.0);
    for (const auto& frame : burst.frames)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += frame[i];
    const double inv = 1.0 / burst.count();
    for (double& v : acc.samples()) v *= inv;
    return acc;
}

FlowField lk_flow(const ImageGrid& reference, const ImageGrid& moving, const FlowOptions& opts) {
    if (!reference.same_shape(moving))
        throw std::invalid_argument("lk_flow: dimension mismatch");
    if (opts.pyramid_levels < 1 || opts.window < 3 || opts.window % 2 == 0)
        throw std::invalid_argument("lk_flow: bad options");
    if ((1 << (opts.pyramid_levels - 1)) * opts.window > std::min(reference.width(),
                                                                  reference.height()))
        throw std::invalid_argument(
            "lk_flow: min dimension must be >= 2^(levels-1) * window");

    // Pyramids, index 0 = finest.
    std::vector<ImageGrid> ref_pyr{reference}, mov_pyr{moving};
    for (int l = 1; l < opts.pyramid_levels; ++l) {
        ref_pyr.push_back(downsample2(ref_pyr.back()));
        mov_pyr.push_back(downsample2(mov_pyr.back()));
    }

    FlowField flow(ref_pyr.back().width(), ref_pyr.back().height());
    for (int level = opts.pyramid_levels - 1; level >= 0; --level) {
        const ImageGrid& ref = ref_pyr[std::size_t(level)];
        const ImageGrid& mov = mov_pyr[std::size_t(level)];

        if (flow.width() != ref.width() || flow.height() != ref.height()) {
            FlowField up(ref.width(), ref.height());
            up.dx = resize_bilinear(flow.dx, ref.width(), ref.height());
            up.dy = resize_bilinear(flow.dy, ref.width(), ref.height());
            for (std::size_t i = 0; i < up.dx.size(); ++i) {
                up.dx[i] *= 2.0;
                up.dy[i] *= 2.0;
            }
            flow = std::move(up);
        }
        const FlowField level_init = flow;

        ImageGrid ref_gx, ref_gy;
        gradients(ref, ref_gx, ref_gy);

        for (int it = 0; it < opts.iterations; ++it) {
            const ImageGrid warped = warp_bilinear(mov, flow);
            ImageGrid resid(ref.width(), ref.height());
            for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = ref[i] - warped[i];

            // symmetric gradients (average of both images) for sub-pixel
            // accuracy at edges
            ImageGrid gx, gy;
            gradients(warped, gx, gy);
            for (std::size_t i = 0; i < gx.size(); ++i) {
                gx[i] = 0.5 * (gx[i] + ref_gx[i]);
                gy[i] = 0.5 * (gy[i] + ref_gy[i]);
            }
            const ImageGrid gxx = box_sum(multiply(gx, gx), opts.window);
            const ImageGrid gxy = box_sum(multiply(gx, gy), opts.window);
            const ImageGrid gyy = box_sum(multiply(gy, gy), opts.window);

            const ImageGrid bx = box_sum(multiply(gx, resid), opts.window);
            const ImageGrid by = box_sum(multiply(gy, resid), opts.window);

            for (std::size_t i = 0; i < resid.size(); ++i) {
                const double a = gxx[i], b = gxy[i], c = gyy[i];
                const double trace = a + c;
                const double det = a * c - b * b;
                const double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det));
                const double lambda_max = 0.5 * (trace + disc);
                const double lambda_min = 0.5 * (trace - disc);
                if (lambda_max < opts.min_eigenvalue) continue;  // untextured

                double ux = 0.0, uy = 0.0;
                if (lambda_min < opts.min_eigenvalue) {
                    // aperture case: only the dominant eigendirection is
                    // observable, so step along it (normal flow)
                    double ex, ey;
                    if (std::abs(b) > 1e-30) {
                        ex = b;
                        ey = lambda_max - a;
                    } else if (a >= c) {
                        ex = 1.0;
                        ey = 0.0;
                    } else {
                        ex = 0.0;
                        ey = 1.0;
                    }
                    const double norm = std::hypot(ex, ey);
                    ex /= norm;
                    ey /= norm;
                    const double step = (ex * bx[i] + ey * by[i]) / lambda_max;
                    ux = step * ex;
                    uy = step * ey;
                } else {
                    const double inv_det = 1.0 / det;
                    ux = inv_det * (c * bx[i] - b * by[i]);
                    uy = inv_det * (a * by[i] - b * bx[i]);
                }
                // the linearization is only trusted for sub-pixel steps
                const double mag = std::hypot(ux, uy);
                if (mag > opts.max_step) {
                    ux *= opts.max_step / mag;
                    uy *= opts.max_step / mag;
                }
                flow.dx[i] += ux;
                flow.dy[i] += uy;
            }
        }

        // keep the refinement only where it beats this level's
        // initialization (divergence guard for ambiguous structure)
        {
            const ImageGrid w_new = warp_bilinear(mov, flow);
            const ImageGrid w_init = warp_bilinear(mov, level_init);
            ImageGrid e_new(ref.width(), ref.height()), e_init(ref.width(), ref.height());
            for (std::size_t i = 0; i < e_new.size(); ++i) {
                const double dn = ref[i] - w_new[i];
                const double di = ref[i] - w_init[i];
                e_new[i] = dn * dn;
                e_init[i] = di * di;
            }
            const ImageGrid rn = box_sum(e_new, opts.window);
            const ImageGrid ri = box_sum(e_init, opts.window);
            for (std::size_t i = 0; i < rn.size(); ++i) {
                if (rn[i] > ri[i]) {
                    flow.dx[i] = level_init.dx[i];
                    flow.dy[i] = level_init.dy[i];
                }
            }
        }
    }

    // Cap displacement magnitudes.
    const double cap =
        opts.max_flow_fraction * std::min(reference.width(), reference.height());
    for (std::size_t i = 0; i < flow.dx.size(); ++i) {
        const double mag = std::hypot(flow.dx[i], flow.dy[i]);
        if (mag > cap) {
            const double s = cap / mag;
            flow.dx[i] *= s;
            flow.dy[i] *= s;
        }
    }
    return flow;
}

ImageGrid warp_bilinear(const ImageGrid& image, const FlowField& flow) {
    if (image.width() != flow.width() || image.height() != flow.height())
        throw std::invalid_argument("warp_bilinear: dimension mismatch");
    const int w = image.width(), h = image.height();
    ImageGrid out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double fx = std::clamp(x + flow.dx.at(x, y), 0.0, double(w - 1));
            const double fy = std::clamp(y + flow.dy.at(x, y), 0.0, double(h - 1));
            const int x0 = int(fx), y0 = int(fy);
            const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
            const double ax = fx - x0, ay = fy - y0;
            out.at(x, y) = (1 - ax) * (1 - ay) * image.at(x0, y0) +
                           ax * (1 - ay) * image.at(x1, y0) +
                           (1 - ax) * ay * image.at(x0, y1) + ax * ay * image.at(x1, y1);
        }
    }
    return out;
}

FrameSequence register_sequence(const FrameSequence& burst, int iterations,
                                const FlowOptions& opts, StageTimes* stages) {
    if (burst.count() < 1)
        throw std::invalid_argument("register_sequence: empty burst");
    if (iterations < 1)
        throw std::invalid_argument("register_sequence: iterations must be >= 1");

    FlowOptions fitted = opts;
    fitted.pyramid_levels = opts.clamped_levels(burst.width(), burst.height());

    Stopwatch clock;
    // Each pass re-estimates against the current average, but displacement
    // fields are composed so every output frame is resampled from its
    // original exactly once (repeated bilinear warps compound interpolation
    // blur).
    std::vector<FlowField> cumulative(burst.frames.size());
    FrameSequence current = burst;
    for (int pass = 0; pass < iterations; ++pass) {
        const ImageGrid reference = average_frame(current);
        parallel_for(current.frames.size(), [&](std::size_t i) {
            const FlowField delta = lk_flow(reference, current[i], fitted);
            if (pass == 0) {
                cumulative[i] = delta;
            } else {
                // cum'(x) = delta(x) + cum(x + delta(x))
                FlowField composed(burst.width(), burst.height());
                composed.dx = warp_bilinear(cumulative[i].dx, delta);
                composed.dy = warp_bilinear(cumulative[i].dy, delta);
                for (std::size_t k = 0; k < composed.dx.size(); ++k) {
                    composed.dx[k] += delta.dx[k];
                    composed.dy[k] += delta.dy[k];
                }
                cumulative[i] = std::move(composed);
            }
            current.frames[i] = warp_bilinear(burst[i], cumulative[i]);
        });
    }
    if (stages) stages->registration += clock.lap();
    return current;
}

}  // namespace burstacc
