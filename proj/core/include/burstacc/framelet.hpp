#pragma once

#include <string>
#include <vector>

#include "burstacc/convolve.hpp"
#include "burstacc/grid.hpp"

namespace burstacc {

// 1-D filter with explicit center tap. Symmetry matters for exact mirror
// reconstruction: reflected samples of an antisymmetric subband flip sign.
struct Filter1D {
    std::vector<double> taps;
    int center = 0;
    bool antisymmetric = false;

    double tap_sum() const {
        double s = 0.0;
        for (double t : taps) s += t;
        return s;
    }
};

// Undecimated tight-frame filter bank; analysis filters are the
// time-reversed synthesis filters and sum_n |h_n(w)|^2 == frame_constant.
struct FilterBank {
    std::vector<Filter1D> synthesis;
    std::vector<Filter1D> analysis;
    double frame_constant = 1.0;

    int filter_count() const { return int(synthesis.size()); }
    int max_filter_length() const;
};

struct SubbandInfo {
    int level = 1;       // 1..J
    int row_filter = 0;  // filter index applied along rows (x)
    int col_filter = 0;  // filter index applied along columns (y)
    bool lowpass = false;

    std::string label() const;
};

// Full-resolution subbands: J * (N^2 - 1) detail bands followed by the
// final lowpass residual.
struct SubbandSet {
    std::vector<ImageGrid> subbands;
    std::vector<SubbandInfo> info;
    int levels = 0;
    BoundaryMode boundary = BoundaryMode::Symmetric;

    int count() const { return int(subbands.size()); }
    int width() const { return subbands.empty() ? 0 : subbands.front().width(); }
    int height() const { return subbands.empty() ? 0 : subbands.front().height(); }
    const ImageGrid& lowpass() const { return subbands.back(); }
};

// Piecewise-linear B-spline framelet bank:
//   h0 = [1 2 1]/4,  h1 = sqrt(2)/4 [1 0 -1],  h2 = [-1 2 -1]/4.
// Construction self-checks the tight-frame identity on a dense frequency
// grid (1e-12) and throws if it fails.
FilterBank build_framelet_bank();

// Largest level count the a-trous dilation admits for this image size.
int max_levels(int width, int height, const FilterBank& bank);

// A-trous analysis: level-j filters are dilated by 2^(j-1); the lowpass of
// each level feeds the next. All subbands keep the input resolution.
SubbandSet analyze(const ImageGrid& image, const FilterBank& bank, int levels,
                   BoundaryMode boundary = BoundaryMode::Symmetric);

// Exact inverse of analyze for the same bank and boundary mode.
ImageGrid synthesize(const SubbandSet& subbands, const FilterBank& bank);

// 1-D single-level helpers (the 2-D transform is built from these; also
// convenient for direct filter-bank tests).
std::vector<double> apply_filter_1d(const std::vector<double>& signal, const Filter1D& filter,
                                    int dilation, Extension ext);

// Extension for reconstructing a subband axis that was produced by `filter`.
Extension synthesis_extension(const Filter1D& filter, BoundaryMode boundary);

}  // namespace burstacc
