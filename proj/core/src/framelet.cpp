#include "burstacc/framelet.hpp"

#include <cmath>
#include <complex>

namespace burstacc {

int FilterBank::max_filter_length() const {
    int m = 0;
    for (const auto& f : synthesis) m = std::max(m, int(f.taps.size()));
    return m;
}

std::string SubbandInfo::label() const {
    if (lowpass) return "L" + std::to_string(level);
    return "D" + std::to_string(level) + "." + std::to_string(row_filter) +
           std::to_string(col_filter);
}

namespace {

Filter1D reversed(const Filter1D& f) {
    Filter1D r = f;
    std::reverse(r.taps.begin(), r.taps.end());
    r.center = int(f.taps.size()) - 1 - f.center;
    return r;
}

void verify_tight_frame(const FilterBank& bank) {
    constexpr int kGrid = 1024;
    for (int k = 0; k < kGrid; ++k) {
        const double w = 2.0 * M_PI * k / kGrid;
        double total = 0.0;
        for (const auto& f : bank.synthesis) {
            std::complex<double> resp(0.0, 0.0);
            for (int t = 0; t < int(f.taps.size()); ++t)
                resp += f.taps[t] * std::exp(std::complex<double>(0.0, -w * (t - f.center)));
            total += std::norm(resp);
        }
        if (std::abs(total - bank.frame_constant) > 1e-12)
            throw std::logic_error("framelet bank violates the tight-frame identity");
    }
}

}  // namespace

FilterBank build_framelet_bank() {
    FilterBank bank;
    bank.frame_constant = 1.0;

    const double s = std::sqrt(2.0) / 4.0;
    bank.synthesis = {
        Filter1D{{0.25, 0.5, 0.25}, 1, false},
        Filter1D{{s, 0.0, -s}, 1, true},
        Filter1D{{-0.25, 0.5, -0.25}, 1, false},
    };
    bank.analysis.reserve(bank.synthesis.size());
    for (const auto& f : bank.synthesis) bank.analysis.push_back(reversed(f));

    verify_tight_frame(bank);
    return bank;
}

int max_levels(int width, int height, const FilterBank& bank) {
    const int len = bank.max_filter_length();
    const int limit = std::min(width, height);
    int levels = 0;
    while ((1 << levels) * len <= limit) ++levels;  // dilation at level j is 2^(j-1)
    return levels;
}

Extension synthesis_extension(const Filter1D& filter, BoundaryMode boundary) {
    if (boundary == BoundaryMode::Periodic) return Extension::Periodic;
    return filter.antisymmetric ? Extension::SymmetricOdd : Extension::SymmetricEven;
}

std::vector<double> apply_filter_1d(const std::vector<double>& signal, const Filter1D& filter,
                                    int dilation, Extension ext) {
    const int n = int(signal.size());
    std::vector<double> out(signal.size());
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int t = 0; t < int(filter.taps.size()); ++t) {
            const long j = long(i) - long(dilation) * (t - filter.center);
            acc += filter.taps[t] * extended_sample(signal.data(), 1, n, j, ext);
        }
        out[i] = acc;
    }
    return out;
}

SubbandSet analyze(const ImageGrid& image, const FilterBank& bank, int levels,
                   BoundaryMode boundary) {
    if (levels < 1)
        throw std::invalid_argument("analyze: levels must be >= 1");
    const int feasible = max_levels(image.width(), image.height(), bank);
    if (levels > feasible)
        throw std::invalid_argument(
            "analyze: " + std::to_string(levels) + " levels need 2^(J-1)*" +
            std::to_string(bank.max_filter_length()) + " <= min(width,height) = " +
            std::to_string(std::min(image.width(), image.height())) +
            " (max feasible J is " + std::to_string(feasible) + ")");

    const int nf = bank.filter_count();
    const Extension ext = extension_for(boundary);

    SubbandSet set;
    set.levels = levels;
    set.boundary = boundary;
    set.subbands.reserve(std::size_t(levels) * (nf * nf - 1) + 1);
    set.info.reserve(set.subbands.capacity());

    ImageGrid current = image;
    for (int j = 1; j <= levels; ++j) {
        const int dilation = 1 << (j - 1);

        std::vector<ImageGrid> row_passes;
        row_passes.reserve(nf);
        for (int a = 0; a < nf; ++a) {
            const Filter1D& f = bank.analysis[a];
            row_passes.push_back(filter_rows(current, f.taps, f.center, dilation, ext));
        }

        ImageGrid next_lowpass;
        for (int a = 0; a < nf; ++a) {
            for (int b = 0; b < nf; ++b) {
                const Filter1D& f = bank.analysis[b];
                ImageGrid band = filter_cols(row_passes[a], f.taps, f.center, dilation, ext);
                if (a == 0 && b == 0) {
                    next_lowpass = std::move(band);
                } else {
                    set.subbands.push_back(std::move(band));
                    set.info.push_back(SubbandInfo{j, a, b, false});
                }
            }
        }
        current = std::move(next_lowpass);
    }

    set.subbands.push_back(std::move(current));
    set.info.push_back(SubbandInfo{levels, 0, 0, true});
    return set;
}

ImageGrid synthesize(const SubbandSet& set, const FilterBank& bank) {
    const int nf = bank.filter_count();
    const int expected = set.levels * (nf * nf - 1) + 1;
    if (set.levels < 1 || set.count() != expected)
        throw std::invalid_argument("synthesize: subband count does not match bank and levels");
    for (const auto& band : set.subbands)
        if (band.width() != set.width() || band.height() != set.height())
            throw std::invalid_argument("synthesize: subband dimensions disagree");
    if (!set.info.back().lowpass)
        throw std::invalid_argument("synthesize: lowpass residual must be the final subband");

    // Rebuild from the deepest level up. Subbands are stored level-major, so
    // level j's details start at (j-1)*(nf^2-1).
    ImageGrid current = set.lowpass();
    for (int j = set.levels; j >= 1; --j) {
        const int dilation = 1 << (j - 1);
        ImageGrid rec(set.width(), set.height(), 0.0);

        for (int a = 0; a < nf; ++a) {
            const Filter1D& fa = bank.synthesis[a];
            ImageGrid col_sum(set.width(), set.height(), 0.0);
            bool any = false;
            for (int b = 0; b < nf; ++b) {
                const Filter1D& fb = bank.synthesis[b];
                const ImageGrid* band = nullptr;
                if (a == 0 && b == 0) {
                    band = &current;
                } else {
                    const int idx = (j - 1) * (nf * nf - 1) + (a * nf + b) - 1;
                    band = &set.subbands[std::size_t(idx)];
                }
                const Extension ext_b = synthesis_extension(fb, set.boundary);
                ImageGrid cols = filter_cols(*band, fb.taps, fb.center, dilation, ext_b);
                for (std::size_t i = 0; i < cols.size(); ++i) col_sum[i] += cols[i];
                any = true;
            }
            (void)any;
            const Extension ext_a = synthesis_extension(fa, set.boundary);
            ImageGrid rows = filter_rows(col_sum, fa.taps, fa.center, dilation, ext_a);
            for (std::size_t i = 0; i < rows.size(); ++i) rec[i] += rows[i];
        }
        current = std::move(rec);
    }
    return current;
}

}  // namespace burstacc
