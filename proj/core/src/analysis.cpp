#include "burstacc/analysis.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <ostream>

#include "burstacc/convolve.hpp"
#include "burstacc/fft.hpp"
#include "burstacc/rng.hpp"
#include "burstacc/synth.hpp"

namespace burstacc {

std::string EquivalenceReport::to_jsonl() const {
    nlohmann::json j = {
        {"case", case_name},
        {"mode", mode},
        {"rel_l2", relative_l2_error},
        {"passed", tolerance_passed},
    };
    return j.dump();
}

ImageGrid pad_kernel_periodic(const BlurKernel& kernel, int width, int height) {
    if (kernel.grid.width() > width || kernel.grid.height() > height)
        throw std::invalid_argument("pad_kernel_periodic: kernel larger than frame");
    ImageGrid out(width, height, 0.0);
    const int rx = kernel.radius_x(), ry = kernel.radius_y();
    for (int v = -ry; v <= ry; ++v) {
        const int y = ((v % height) + height) % height;
        for (int u = -rx; u <= rx; ++u) {
            const int x = ((u % width) + width) % width;
            out.at(x, y) += kernel.grid.at(u + rx, v + ry);
        }
    }
    return out;
}

ImageGrid apply_kernel_periodic(const ImageGrid& image, const EquivalentKernel& kernel) {
    if (!image.same_shape(kernel))
        throw std::invalid_argument("apply_kernel_periodic: shape mismatch");
    const ComplexSpectrum a = fft2(image);
    const ComplexSpectrum b = fft2(kernel);
    ComplexSpectrum prod(image.width(), image.height());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * b[i];
    return ifft2(prod);
}

EquivalentKernel equivalent_kernel_fba(const std::vector<BlurKernel>& kernels,
                                       const std::vector<WeightField>& weights) {
    if (kernels.size() != weights.size())
        throw std::invalid_argument("equivalent_kernel_fba: kernels/weights length mismatch");
    if (kernels.empty())
        throw std::invalid_argument("equivalent_kernel_fba: empty burst");

    const int w = weights[0].values.width(), h = weights[0].values.height();
    ComplexSpectrum acc(w, h);
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        if (weights[i].values.width() != w || weights[i].values.height() != h)
            throw std::invalid_argument("equivalent_kernel_fba: weight shape mismatch");
        const ComplexSpectrum ks = fft2(pad_kernel_periodic(kernels[i], w, h));
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc[k] += weights[i].values[k] * ks[k];
    }
    return ifft2(acc);
}

std::vector<ComplexSpectrum> subband_filter_spectra(const FilterBank& bank, int levels,
                                                    int width, int height) {
    using cd = std::complex<double>;

    // 1-D transfer function of a dilated filter on an N-point grid.
    auto symbol = [](const Filter1D& f, int dilation, int n) {
        std::vector<cd> out(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            cd acc(0.0, 0.0);
            for (int t = 0; t < int(f.taps.size()); ++t) {
                const double phase =
                    -2.0 * M_PI * double(k) * double(dilation) * double(t - f.center) / n;
                acc += f.taps[std::size_t(t)] * cd(std::cos(phase), std::sin(phase));
            }
            out[std::size_t(k)] = acc;
        }
        return out;
    };

    const int nf = bank.filter_count();
    std::vector<std::vector<std::vector<cd>>> per_level_x(static_cast<std::size_t>(levels)),
        per_level_y(static_cast<std::size_t>(levels));
    for (int j = 0; j < levels; ++j) {
        const int dilation = 1 << j;
        per_level_x[std::size_t(j)].reserve(std::size_t(nf));
        per_level_y[std::size_t(j)].reserve(std::size_t(nf));
        for (int a = 0; a < nf; ++a) {
            per_level_x[std::size_t(j)].push_back(symbol(bank.synthesis[std::size_t(a)],
                                                         dilation, width));
            per_level_y[std::size_t(j)].push_back(symbol(bank.synthesis[std::size_t(a)],
                                                         dilation, height));
        }
    }

    // Lowpass chain product up to (but excluding) each level.
    std::vector<std::vector<cd>> chain_x(static_cast<std::size_t>(levels + 1)),
        chain_y(static_cast<std::size_t>(levels + 1));
    chain_x[0].assign(std::size_t(width), cd(1.0, 0.0));
    chain_y[0].assign(std::size_t(height), cd(1.0, 0.0));
    for (int j = 0; j < levels; ++j) {
        chain_x[std::size_t(j + 1)] = chain_x[std::size_t(j)];
        chain_y[std::size_t(j + 1)] = chain_y[std::size_t(j)];
        for (int k = 0; k < width; ++k)
            chain_x[std::size_t(j + 1)][std::size_t(k)] *=
                per_level_x[std::size_t(j)][0][std::size_t(k)];
        for (int k = 0; k < height; ++k)
            chain_y[std::size_t(j + 1)][std::size_t(k)] *=
                per_level_y[std::size_t(j)][0][std::size_t(k)];
    }

    std::vector<ComplexSpectrum> spectra;
    spectra.reserve(std::size_t(levels * (nf * nf - 1) + 1));
    for (int j = 1; j <= levels; ++j) {
        for (int a = 0; a < nf; ++a) {
            for (int b = 0; b < nf; ++b) {
                if (a == 0 && b == 0) continue;
                ComplexSpectrum s(width, height);
                for (int ky = 0; ky < height; ++ky) {
                    const cd fy = chain_y[std::size_t(j - 1)][std::size_t(ky)] *
                                  per_level_y[std::size_t(j - 1)][std::size_t(b)][std::size_t(ky)];
                    for (int kx = 0; kx < width; ++kx) {
                        const cd fx =
                            chain_x[std::size_t(j - 1)][std::size_t(kx)] *
                            per_level_x[std::size_t(j - 1)][std::size_t(a)][std::size_t(kx)];
                        s.at(kx, ky) = fx * fy;
                    }
                }
                spectra.push_back(std::move(s));
            }
        }
    }
    ComplexSpectrum low(width, height);
    for (int ky = 0; ky < height; ++ky)
        for (int kx = 0; kx < width; ++kx)
            low.at(kx, ky) = chain_x[std::size_t(levels)][std::size_t(kx)] *
                             chain_y[std::size_t(levels)][std::size_t(ky)];
    spectra.push_back(std::move(low));
    return spectra;
}

EquivalentKernel equivalent_kernel_wwfba(const std::vector<BlurKernel>& kernels,
                                         const SubbandWeights& subband_weights,
                                         const FilterBank& bank, int levels) {
    if (subband_weights.weights.empty())
        throw std::invalid_argument("equivalent_kernel_wwfba: no subband weights");
    const std::size_t m = subband_weights.weights[0].size();
    if (kernels.size() != m)
        throw std::invalid_argument("equivalent_kernel_wwfba: kernels/weights length mismatch");

    const int w = subband_weights.weights[0][0].values.width();
    const int h = subband_weights.weights[0][0].values.height();
    const std::vector<ComplexSpectrum> psi = subband_filter_spectra(bank, levels, w, h);
    if (psi.size() != subband_weights.weights.size())
        throw std::invalid_argument("equivalent_kernel_wwfba: subband count mismatch");

    std::vector<ComplexSpectrum> kernel_spectra;
    kernel_spectra.reserve(m);
    for (const auto& k : kernels)
        kernel_spectra.push_back(fft2(pad_kernel_periodic(k, w, h)));

    ComplexSpectrum acc(w, h);
    for (std::size_t n = 0; n < psi.size(); ++n) {
        for (std::size_t i = 0; i < m; ++i) {
            const ImageGrid& wf = subband_weights.weights[n][i].values;
            for (std::size_t k = 0; k < acc.size(); ++k)
                acc[k] += wf[k] * kernel_spectra[i][k] * std::norm(psi[n][k]);
        }
    }
    return ifft2(acc);
}

ImageGrid verify_noise_term(const std::vector<ImageGrid>& noises,
                            const std::vector<WeightField>& weights) {
    if (noises.size() != weights.size())
        throw std::invalid_argument("verify_noise_term: noises/weights length mismatch");
    if (noises.empty())
        throw std::invalid_argument("verify_noise_term: empty burst");

    const int w = noises[0].width(), h = noises[0].height();
    ComplexSpectrum acc(w, h);
    for (std::size_t i = 0; i < noises.size(); ++i) {
        const ComplexSpectrum ns = fft2(noises[i]);
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc[k] += weights[i].values[k] * ns[k];
    }
    return ifft2(acc);
}

ImageGrid verify_noise_term(const std::vector<ImageGrid>& noises,
                            const SubbandWeights& subband_weights, const FilterBank& bank,
                            int levels) {
    if (subband_weights.weights.empty() || noises.empty())
        throw std::invalid_argument("verify_noise_term: empty inputs");
    if (noises.size() != subband_weights.weights[0].size())
        throw std::invalid_argument("verify_noise_term: noises/weights length mismatch");

    const int w = noises[0].width(), h = noises[0].height();
    const std::vector<ComplexSpectrum> psi = subband_filter_spectra(bank, levels, w, h);

    std::vector<ComplexSpectrum> noise_spectra;
    noise_spectra.reserve(noises.size());
    for (const auto& n : noises) noise_spectra.push_back(fft2(n));

    ComplexSpectrum acc(w, h);
    for (std::size_t n = 0; n < psi.size(); ++n) {
        for (std::size_t i = 0; i < noises.size(); ++i) {
            const ImageGrid& wf = subband_weights.weights[n][i].values;
            for (std::size_t k = 0; k < acc.size(); ++k)
                acc[k] += wf[k] * noise_spectra[i][k] * std::norm(psi[n][k]);
        }
    }
    return ifft2(acc);
}

// ---- test matrix --------------------------------------------------------------

namespace {

std::string size_tag(int w, int h) {
    return std::to_string(w) + "x" + std::to_string(h);
}

std::vector<BlurKernel> case_kernels(const EquivalenceCase& c) {
    std::vector<BlurKernel> kernels;
    kernels.reserve(std::size_t(c.frame_count));
    Rng rng(Rng::mix(c.seed, 0x6b65726e));
    for (int i = 0; i < c.frame_count; ++i) {
        if (c.gaussian_blur) {
            kernels.push_back(gaussian_kernel(rng.uniform(0.6, 1.8)));
        } else {
            kernels.push_back(motion_kernel(rng.uniform(3.0, 9.0), rng.uniform(0.0, 180.0)));
        }
    }
    return kernels;
}

}  // namespace

std::vector<EquivalenceCase> equivalence_matrix(bool small_matrix) {
    struct Size {
        int w, h;
    };
    const std::vector<Size> sizes = small_matrix ? std::vector<Size>{{32, 32}, {64, 48}}
                                                 : std::vector<Size>{{32, 32}, {64, 48},
                                                                     {128, 128}};
    const std::vector<int> frame_counts = small_matrix ? std::vector<int>{2, 5}
                                                       : std::vector<int>{2, 5, 10};

    std::vector<EquivalenceCase> cases;
    std::uint64_t seed = 100;
    for (const bool gaussian : {true, false}) {
        for (const double noise : {0.0, 0.01}) {
            for (const auto& sz : sizes) {
                for (const int m : frame_counts) {
                    const std::string suffix = std::string(gaussian ? "gauss" : "motion") +
                                               (noise > 0.0 ? "-noisy" : "-noiseless");
                    EquivalenceCase base;
                    base.width = sz.w;
                    base.height = sz.h;
                    base.frame_count = m;
                    base.gaussian_blur = gaussian;
                    base.noise_sigma = noise;

                    EquivalenceCase fba_case = base;
                    fba_case.mode = "fba";
                    fba_case.seed = seed++;
                    fba_case.name = "prop1-M" + std::to_string(m) + "-" +
                                    size_tag(sz.w, sz.h) + "-" + suffix;
                    cases.push_back(fba_case);

                    for (const int j : {1, 2}) {
                        EquivalenceCase ww = base;
                        ww.mode = "wwfba";
                        ww.levels = j;
                        ww.seed = seed++;
                        ww.name = "prop2-J" + std::to_string(j) + "-M" + std::to_string(m) +
                                  "-" + size_tag(sz.w, sz.h) + "-" + suffix;
                        cases.push_back(ww);
                    }
                }
            }
        }
    }
    return cases;
}

EquivalenceReport run_equivalence_case(const EquivalenceCase& c) {
    const ImageGrid clean = make_bar_chart(c.width, c.height);
    const std::vector<BlurKernel> kernels = case_kernels(c);

    // Periodic degradation: spectra multiply exactly.
    const ComplexSpectrum clean_spec = fft2(clean);
    FrameSequence burst;
    std::vector<ImageGrid> noises;
    burst.frames.reserve(std::size_t(c.frame_count));
    for (int i = 0; i < c.frame_count; ++i) {
        const ComplexSpectrum ks =
            fft2(pad_kernel_periodic(kernels[std::size_t(i)], c.width, c.height));
        ComplexSpectrum prod(c.width, c.height);
        for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = clean_spec[k] * ks[k];
        ImageGrid frame = ifft2(prod);
        if (c.noise_sigma > 0.0) {
            ImageGrid noise(c.width, c.height);
            Rng rng(Rng::mix(Rng::mix(c.seed, 0x6e7a), std::uint64_t(i)));
            for (double& v : noise.samples()) v = c.noise_sigma * rng.next_gaussian();
            for (std::size_t k = 0; k < frame.size(); ++k) frame[k] += noise[k];
            noises.push_back(std::move(noise));
        }
        burst.frames.push_back(std::move(frame));
    }

    EquivalenceReport report;
    report.case_name = c.name;
    report.mode = c.mode;

    const SpectralParams params{11.0, kSigmaAuto};
    ImageGrid restored, expected;
    if (c.mode == "fba") {
        FbaResult r = fba_detailed(burst, params);
        report.kernel = equivalent_kernel_fba(kernels, r.weights);
        expected = apply_kernel_periodic(clean, report.kernel);
        if (!noises.empty()) {
            report.noise_term = verify_noise_term(noises, r.weights);
            for (std::size_t k = 0; k < expected.size(); ++k)
                expected[k] += report.noise_term[k];
        }
        restored = std::move(r.image);
    } else if (c.mode == "wwfba") {
        const FilterBank bank = build_framelet_bank();
        WwfbaResult r =
            wwfba_detailed(burst, bank, c.levels, params, BoundaryMode::Periodic);
        report.kernel = equivalent_kernel_wwfba(kernels, r.weights, bank, c.levels);
        expected = apply_kernel_periodic(clean, report.kernel);
        if (!noises.empty()) {
            report.noise_term = verify_noise_term(noises, r.weights, bank, c.levels);
            for (std::size_t k = 0; k < expected.size(); ++k)
                expected[k] += report.noise_term[k];
        }
        restored = std::move(r.image);
    } else {
        throw std::invalid_argument("run_equivalence_case: unknown mode " + c.mode);
    }

    report.relative_l2_error = relative_l2_error(restored, expected);
    report.tolerance_passed = report.relative_l2_error <= c.tolerance;
    return report;
}

void write_jsonl(std::ostream& out, const std::vector<EquivalenceReport>& reports) {
    for (const auto& r : reports) out << r.to_jsonl() << "\n";
}

WitnessResult run_noncommutativity_witness() {
    const int n = 64;

    // left half: vertical bars; right half: horizontal bars
    ImageGrid chart(n, n, 0.85);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n / 2; ++x)
            if ((x / 4) % 2 == 0) chart.at(x, y) = 0.15;
    for (int y = 0; y < n; ++y)
        for (int x = n / 2; x < n; ++x)
            if ((y / 4) % 2 == 0) chart.at(x, y) = 0.15;

    const std::vector<BlurKernel> kernels = {motion_kernel(7.0, 0.0),
                                             motion_kernel(7.0, 90.0)};

    const ComplexSpectrum chart_spec = fft2(chart);
    FrameSequence burst;
    for (const auto& k : kernels) {
        const ComplexSpectrum ks = fft2(pad_kernel_periodic(k, n, n));
        ComplexSpectrum prod(n, n);
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = chart_spec[i] * ks[i];
        burst.frames.push_back(ifft2(prod));
    }

    const FilterBank bank = build_framelet_bank();
    const SpectralParams params{11.0, kSigmaAuto};
    const int levels = 2;

    const ImageGrid wwba_out = wwba(burst, bank, levels, params, BoundaryMode::Periodic);
    const WwfbaResult wwfba_out =
        wwfba_detailed(burst, bank, levels, params, BoundaryMode::Periodic);

    const EquivalentKernel ke =
        equivalent_kernel_wwfba(kernels, wwfba_out.weights, bank, levels);
    const ImageGrid expected = apply_kernel_periodic(chart, ke);

    WitnessResult result;
    result.wwba_vs_wwfba_rel = relative_l2_error(wwba_out, wwfba_out.image);
    result.wwba_vs_kernel_rel = relative_l2_error(wwba_out, expected);
    result.wwfba_vs_kernel_rel = relative_l2_error(wwfba_out.image, expected);
    return result;
}

}  // namespace burstacc
