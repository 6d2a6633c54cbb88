#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "burstacc/convolve.hpp"
#include "burstacc/grid.hpp"
#include "oracles.hpp"

using namespace burstacc;

TEST_CASE("ImageGrid basics and invariants") {
    ImageGrid img(4, 3, 0.5);
    CHECK(img.size() == 12);
    img.at(3, 2) = 1.25;
    CHECK(img.at(3, 2) == 1.25);
    CHECK(img.is_finite());
    CHECK_THROWS_AS(ImageGrid(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(ImageGrid(2, 2, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("BlurKernel normalization") {
    ImageGrid taps(3, 3, 1.0);
    BlurKernel k(taps);
    CHECK(k.normalized);
    CHECK(k.tap_sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(BlurKernel(ImageGrid(2, 3, 1.0)), std::invalid_argument);
}

TEST_CASE("convolve with the 1x1 identity kernel returns the image") {
    const ImageGrid img = oracles::random_image(9, 7, 42);
    const ImageGrid out = convolve(img, identity_kernel(), BoundaryMode::Symmetric);
    CHECK(linf_distance(out, img) == 0.0);
}

TEST_CASE("convolve keeps constants constant for normalized kernels") {
    const ImageGrid img(16, 16, 0.37);
    const BlurKernel k = gaussian_kernel(1.1);
    for (const auto mode : {BoundaryMode::Periodic, BoundaryMode::Symmetric}) {
        const ImageGrid out = convolve(img, k, mode);
        for (double v : out.samples()) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
    }
}

TEST_CASE("periodic convolve agrees with the DFT product oracle") {
    const ImageGrid img = oracles::random_image(8, 8, 7);
    ImageGrid ktaps = oracles::random_image(3, 3, 8, -0.5, 1.0);
    const BlurKernel kernel(ktaps, /*normalize_taps=*/false);

    // oracle: pad kernel periodically at the origin, multiply naive DFTs
    ImageGrid padded(8, 8, 0.0);
    for (int v = -1; v <= 1; ++v)
        for (int u = -1; u <= 1; ++u)
            padded.at((u + 8) % 8, (v + 8) % 8) = ktaps.at(u + 1, v + 1);
    const auto fi = oracles::naive_dft2(img);
    const auto fk = oracles::naive_dft2(padded);
    std::vector<oracles::cd> prod(fi.size());
    for (std::size_t i = 0; i < fi.size(); ++i) prod[i] = fi[i] * fk[i];
    const ImageGrid expected = oracles::naive_idft2(prod, 8, 8);

    const ImageGrid got = convolve(img, kernel, BoundaryMode::Periodic);
    CHECK(relative_l2_error(got, expected) < 1e-10);
}

TEST_CASE("convolve rejects bad kernels") {
    const ImageGrid img = oracles::random_image(4, 4, 1);
    CHECK_THROWS_AS(convolve(img, BlurKernel(ImageGrid(5, 5, 1.0)), BoundaryMode::Periodic),
                    std::invalid_argument);
    BlurKernel even;
    even.grid = ImageGrid(2, 2, 0.25);  // bypass the factory check
    CHECK_THROWS_AS(convolve(img, even, BoundaryMode::Periodic), std::invalid_argument);
}

TEST_CASE("convolution is linear in the image") {
    const ImageGrid x = oracles::random_image(12, 10, 3);
    const ImageGrid y = oracles::random_image(12, 10, 4);
    const BlurKernel k = gaussian_kernel(0.8);
    const double a = 1.7, b = -0.4;

    ImageGrid combo(12, 10);
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * x[i] + b * y[i];

    for (const auto mode : {BoundaryMode::Periodic, BoundaryMode::Symmetric}) {
        const ImageGrid lhs = convolve(combo, k, mode);
        const ImageGrid cx = convolve(x, k, mode);
        const ImageGrid cy = convolve(y, k, mode);
        ImageGrid rhs(12, 10);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = a * cx[i] + b * cy[i];
        CHECK(linf_distance(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("gaussian_blur keeps constants and rejects bad sigma") {
    const ImageGrid img(10, 6, 0.42);
    const ImageGrid out = gaussian_blur(img, 1.5);
    for (double v : out.samples()) CHECK(v == doctest::Approx(0.42).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_blur(img, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_blur(img, -1.0), std::invalid_argument);
}

TEST_CASE("gaussian_blur of an impulse matches the dense-convolution oracle") {
    const int n = 33;
    ImageGrid impulse(n, n, 0.0);
    impulse.at(n / 2, n / 2) = 1.0;

    const double sigma = 2.0;
    const ImageGrid got = gaussian_blur(impulse, sigma);

    int center = 0;
    const std::vector<double> taps = gaussian_taps(sigma, &center);
    ImageGrid kernel(int(taps.size()), int(taps.size()));
    for (std::size_t y = 0; y < taps.size(); ++y)
        for (std::size_t x = 0; x < taps.size(); ++x)
            kernel.at(int(x), int(y)) = taps[x] * taps[y];
    const ImageGrid expected = oracles::dense_convolve(impulse, kernel, oracles::Edge::Mirror);

    CHECK(linf_distance(got, expected) < 1e-14);
    // peak value equals the normalized 2-D tap product at the center
    CHECK(got.at(n / 2, n / 2) ==
          doctest::Approx(taps[std::size_t(center)] * taps[std::size_t(center)])
              .epsilon(1e-12));
}

TEST_CASE("two sigma=1 blurs approximate one sqrt(2) blur away from the boundary") {
    const ImageGrid img = oracles::random_image(48, 48, 11, 0.2, 0.8);
    const ImageGrid smooth = gaussian_blur(img, 3.0);  // gentle content

    const ImageGrid twice = gaussian_blur(gaussian_blur(smooth, 1.0), 1.0);
    const ImageGrid once = gaussian_blur(smooth, std::sqrt(2.0));

    const int margin = 12;
    double max_diff = 0.0;
    for (int y = margin; y < 48 - margin; ++y)
        for (int x = margin; x < 48 - margin; ++x)
            max_diff = std::max(max_diff, std::abs(twice.at(x, y) - once.at(x, y)));
    CHECK(max_diff < 1e-6);
}

TEST_CASE("gaussian_blur preserves the mean under symmetric boundary") {
    for (const std::uint64_t seed : {21u, 22u, 23u}) {
        const ImageGrid img = oracles::random_image(17, 13, seed);
        const ImageGrid out = gaussian_blur(img, 1.7);
        CHECK(mean_value(out) == doctest::Approx(mean_value(img)).epsilon(1e-10));
    }
}

TEST_CASE("motion kernels are normalized and line-like") {
    const BlurKernel k = motion_kernel(7.0, 30.0);
    CHECK(k.tap_sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.grid.width() % 2 == 1);
    CHECK(k.grid.is_finite());
}
