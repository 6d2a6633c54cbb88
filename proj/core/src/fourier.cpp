#include "burstacc/fourier.hpp"

#include <cmath>

#include "burstacc/convolve.hpp"
#include "burstacc/parallel.hpp"
#include "burstacc/threshold.hpp"

namespace burstacc {

double resolve_sigma(const SpectralParams& params, int width, int height) {
    if (params.sigma >= 0.0) return params.sigma;
    return double(std::min(width, height)) / 50.0;
}

std::vector<WeightField> weights_from_magnitudes(const std::vector<ImageGrid>& magnitudes,
                                                 double p, double sigma,
                                                 BoundaryMode smoothing_boundary) {
    if (magnitudes.empty())
        throw std::invalid_argument("weights_from_magnitudes: empty burst");
    const int m = int(magnitudes.size());
    const int w = magnitudes[0].width(), h = magnitudes[0].height();
    for (const auto& g : magnitudes)
        if (g.width() != w || g.height() != h)
            throw std::invalid_argument("weights_from_magnitudes: dimension mismatch");

    const std::size_t n = std::size_t(w) * h;

    // Per-bin max across frames; dividing by it keeps |.|^p in [0,1] so
    // p = 11 cannot overflow, and it cancels in the final ratio.
    std::vector<double> peak(n, 0.0);
    for (const auto& g : magnitudes)
        for (std::size_t i = 0; i < n; ++i) peak[i] = std::max(peak[i], std::abs(g[i]));

    std::vector<ImageGrid> powed(static_cast<std::size_t>(m));
    parallel_for(std::size_t(m), [&](std::size_t fi) {
        ImageGrid field(w, h);
        const ImageGrid& g = magnitudes[fi];
        for (std::size_t i = 0; i < n; ++i) {
            const double base = peak[i] > 0.0 ? std::abs(g[i]) / peak[i] : 0.0;
            field[i] = std::pow(base, p);
        }
        if (sigma > 0.0) field = gaussian_blur(field, sigma, smoothing_boundary);
        powed[fi] = std::move(field);
    });

    std::vector<double> denom(n, 0.0);
    for (int fi = 0; fi < m; ++fi)
        for (std::size_t i = 0; i < n; ++i) denom[i] += powed[std::size_t(fi)][i];

    std::vector<WeightField> weights(static_cast<std::size_t>(m));
    const double uniform = 1.0 / double(m);
    for (int fi = 0; fi < m; ++fi) {
        ImageGrid field(w, h);
        for (std::size_t i = 0; i < n; ++i)
            field[i] = denom[i] < 1e-30 ? uniform : powed[std::size_t(fi)][i] / denom[i];
        weights[std::size_t(fi)] = WeightField{std::move(field), fi};
    }
    return weights;
}

std::vector<WeightField> fba_weights(const std::vector<ComplexSpectrum>& spectra,
                                     const SpectralParams& params) {
    if (spectra.empty())
        throw std::invalid_argument("fba_weights: empty spectrum list");
    const int w = spectra[0].width(), h = spectra[0].height();

    std::vector<ImageGrid> magnitudes;
    magnitudes.reserve(spectra.size());
    for (const auto& s : spectra) {
        if (s.width() != w || s.height() != h)
            throw std::invalid_argument("fba_weights: dimension mismatch");
        ImageGrid mag(w, h);
        for (std::size_t i = 0; i < s.size(); ++i) mag[i] = std::abs(s[i]);
        magnitudes.push_back(std::move(mag));
    }
    // The frequency plane wraps around, so its smoothing is periodic.
    return weights_from_magnitudes(magnitudes, params.p, resolve_sigma(params, w, h),
                                   BoundaryMode::Periodic);
}

FbaResult fba_detailed(const FrameSequence& burst, const SpectralParams& params,
                       StageTimes* stages) {
    if (burst.count() < 1)
        throw std::invalid_argument("fba: empty burst");

    Stopwatch clock;
    std::vector<ComplexSpectrum> spectra(burst.frames.size());
    parallel_for(burst.frames.size(), [&](std::size_t i) { spectra[i] = fft2(burst[i]); });
    if (stages) stages->forward_transform += clock.lap();

    std::vector<WeightField> weights = fba_weights(spectra, params);
    if (stages) stages->weight_threshold += clock.lap();

    ComplexSpectrum acc(burst.width(), burst.height());
    for (std::size_t fi = 0; fi < spectra.size(); ++fi)
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += weights[fi].values[i] * spectra[fi][i];
    if (stages) stages->accumulation += clock.lap();

    FbaResult result{ifft2(acc), std::move(weights)};
    if (stages) stages->inverse_transform += clock.lap();
    return result;
}

ImageGrid fba(const FrameSequence& burst, const SpectralParams& params) {
    return fba_detailed(burst, params).image;
}

SfbaResult sfba_detailed(const FrameSequence& burst, double lambda,
                         const SparseOptions& options, StageTimes* stages) {
    if (burst.count() < 1)
        throw std::invalid_argument("sfba: empty burst");
    if (lambda <= 0.0)
        throw std::invalid_argument("sfba: lambda must be positive");

    const int w = burst.width(), h = burst.height();
    const double scale = options.rescale_lambda ? 1.0 / std::sqrt(double(w) * double(h)) : 1.0;

    Stopwatch clock;
    std::vector<ComplexSpectrum> spectra(burst.frames.size());
    parallel_for(burst.frames.size(), [&](std::size_t i) { spectra[i] = fft2(burst[i]); });
    if (stages) stages->forward_transform += clock.lap();

    SfbaResult result;
    std::vector<std::size_t> nonzero(spectra.size(), 0);
    parallel_for(spectra.size(), [&](std::size_t fi) {
        ComplexSpectrum& s = spectra[fi];
        std::size_t nz = 0;
        for (auto& bin : s.bins()) {
            bin = soft_threshold(bin * scale, lambda);
            if (bin != std::complex<double>(0.0, 0.0)) ++nz;
        }
        nonzero[fi] = nz;
    });
    for (std::size_t fi = 0; fi < spectra.size(); ++fi) {
        result.nonzero_coefficients += nonzero[fi];
        result.total_coefficients += spectra[fi].size();
    }
    if (stages) stages->weight_threshold += clock.lap();

    ComplexSpectrum acc(w, h);
    for (const auto& s : spectra)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s[i];

    double post = options.rescale_lambda ? std::sqrt(double(w) * double(h)) : 1.0;
    if (options.normalize_mean) post /= double(burst.count());
    for (auto& bin : acc.bins()) bin *= post;
    if (stages) stages->accumulation += clock.lap();

    result.image = ifft2(acc);
    if (stages) stages->inverse_transform += clock.lap();
    return result;
}

ImageGrid sfba(const FrameSequence& burst, double lambda) {
    return sfba_detailed(burst, lambda).image;
}

}  // namespace burstacc
