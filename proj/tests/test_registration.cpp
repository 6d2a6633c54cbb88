#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "burstacc/registration.hpp"
#include "burstacc/synth.hpp"
#include "oracles.hpp"

using namespace burstacc;

TEST_CASE("average_frame basics") {
    const ImageGrid a = oracles::random_image(8, 8, 1);

    SUBCASE("identical frames average to themselves") {
        FrameSequence seq;
        seq.frames = {a, a, a};
        CHECK(linf_distance(average_frame(seq), a) < 1e-15);
    }

    SUBCASE("zero and one average to one half") {
        FrameSequence seq;
        seq.frames = {ImageGrid(4, 4, 0.0), ImageGrid(4, 4, 1.0)};
        const ImageGrid avg = average_frame(seq);
        for (double v : avg.samples()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
    }

    SUBCASE("fifty random frames match direct summation") {
        FrameSequence seq;
        for (std::uint64_t s = 0; s < 50; ++s)
            seq.frames.push_back(oracles::random_image(8, 8, 100 + s));
        const ImageGrid avg = average_frame(seq);

        ImageGrid expected(8, 8, 0.0);
        for (const auto& f : seq.frames)
            for (std::size_t i = 0; i < expected.size(); ++i) expected[i] += f[i];
        for (double& v : expected.samples()) v /= 50.0;
        CHECK(linf_distance(avg, expected) < 1e-12);
    }
}

TEST_CASE("warp_bilinear fundamentals") {
    const ImageGrid img = oracles::random_image(8, 8, 5);

    SUBCASE("zero flow is the identity") {
        const FlowField zero(8, 8);
        CHECK(linf_distance(warp_bilinear(img, zero), img) == 0.0);
    }

    SUBCASE("constant integer flow shifts with edge replication") {
        FlowField flow(8, 8);
        for (double& v : flow.dx.samples()) v = 1.0;
        const ImageGrid out = warp_bilinear(img, flow);
        for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 7; ++x) CHECK(out.at(x, y) == img.at(x + 1, y));
            CHECK(out.at(7, y) == img.at(7, y));
        }
    }

    SUBCASE("random flow matches the scalar bilinear oracle exactly") {
        burstacc::Rng rng(9);
        FlowField flow(8, 8);
        for (double& v : flow.dx.samples()) v = rng.uniform(-3.0, 3.0);
        for (double& v : flow.dy.samples()) v = rng.uniform(-3.0, 3.0);
        const ImageGrid out = warp_bilinear(img, flow);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
                CHECK(out.at(x, y) ==
                      oracles::bilinear_sample(img, x + flow.dx.at(x, y), y + flow.dy.at(x, y)));
    }

    SUBCASE("warping is linear in the image for fixed flow") {
        FlowField flow(8, 8);
        burstacc::Rng rng(10);
        for (double& v : flow.dx.samples()) v = rng.uniform(-2.0, 2.0);
        for (double& v : flow.dy.samples()) v = rng.uniform(-2.0, 2.0);

        const ImageGrid x = oracles::random_image(8, 8, 11);
        const ImageGrid y = oracles::random_image(8, 8, 12);
        ImageGrid combo(8, 8);
        for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 2.0 * x[i] - 0.5 * y[i];

        const ImageGrid wx = warp_bilinear(x, flow);
        const ImageGrid wy = warp_bilinear(y, flow);
        const ImageGrid wc = warp_bilinear(combo, flow);
        for (std::size_t i = 0; i < wc.size(); ++i)
            CHECK(wc[i] == doctest::Approx(2.0 * wx[i] - 0.5 * wy[i]).epsilon(1e-12));
    }

    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(warp_bilinear(img, FlowField(4, 4)), std::invalid_argument);
    }
}

TEST_CASE("lk_flow on identical images is zero") {
    const ImageGrid img = make_smooth_texture(64, 64, 3);
    const FlowField flow = lk_flow(img, img);
    for (std::size_t i = 0; i < flow.dx.size(); ++i) {
        CHECK(std::abs(flow.dx[i]) < 1e-8);
        CHECK(std::abs(flow.dy[i]) < 1e-8);
    }
}

TEST_CASE("lk_flow recovers a pure translation within 0.2 px") {
    const ImageGrid moving = make_smooth_texture(96, 96, 17);
    FlowField truth(96, 96);
    for (double& v : truth.dx.samples()) v = 2.0;
    for (double& v : truth.dy.samples()) v = 3.0;
    const ImageGrid reference = warp_bilinear(moving, truth);  // ref(x) = mov(x + (2,3))

    const FlowField flow = lk_flow(reference, moving);

    const int margin = 12;
    double err_sum = 0.0;
    int count = 0;
    for (int y = margin; y < 96 - margin; ++y)
        for (int x = margin; x < 96 - margin; ++x) {
            err_sum += std::hypot(flow.dx.at(x, y) - 2.0, flow.dy.at(x, y) - 3.0);
            ++count;
        }
    CHECK(err_sum / count <= 0.2);
}

TEST_CASE("lk_flow recovers a smooth sinusoidal warp within 0.3 px") {
    const int n = 96;
    const ImageGrid moving = make_smooth_texture(n, n, 23, 2.5);
    FlowField truth(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            truth.dx.at(x, y) = 1.5 * std::sin(2.0 * M_PI * y / 64.0);
            truth.dy.at(x, y) = 1.5 * std::cos(2.0 * M_PI * x / 64.0);
        }
    const ImageGrid reference = warp_bilinear(moving, truth);

    const FlowField flow = lk_flow(reference, moving);

    const int margin = 12;
    double err_sum = 0.0;
    int count = 0;
    for (int y = margin; y < n - margin; ++y)
        for (int x = margin; x < n - margin; ++x) {
            err_sum += std::hypot(flow.dx.at(x, y) - truth.dx.at(x, y),
                                  flow.dy.at(x, y) - truth.dy.at(x, y));
            ++count;
        }
    CHECK(err_sum / count < 0.3);
}

TEST_CASE("lk_flow input validation") {
    const ImageGrid a(32, 32, 0.5), b(16, 16, 0.5);
    CHECK_THROWS_AS(lk_flow(a, b), std::invalid_argument);
    FlowOptions opts;
    opts.pyramid_levels = 4;  // needs min dim >= 88
    CHECK_THROWS_AS(lk_flow(a, a, opts), std::invalid_argument);
    CHECK(opts.clamped_levels(32, 32) == 2);
}

TEST_CASE("register_sequence is a no-op on stable bursts") {
    const ImageGrid frame = make_smooth_texture(64, 64, 31);

    SUBCASE("identical frames") {
        FrameSequence seq;
        seq.frames = {frame, frame, frame};
        const FrameSequence out = register_sequence(seq);
        REQUIRE(out.count() == 3);
        for (const auto& f : out.frames) CHECK(linf_distance(f, frame) < 1e-8);
    }

    SUBCASE("single frame") {
        FrameSequence seq;
        seq.frames = {frame};
        const FrameSequence out = register_sequence(seq);
        CHECK(linf_distance(out[0], frame) < 1e-8);
    }
}

TEST_CASE("register_sequence aligns a synthetically warped burst") {
    const ImageGrid clean = make_smooth_texture(96, 96, 37);
    DegradationSpec spec;
    spec.warp_amplitude = 2.0;
    spec.warp_smoothness = 12.0;
    spec.seed = 41;
    const SyntheticBurst burst = generate_burst(clean, 50, spec);

    const FrameSequence registered = register_sequence(burst.frames);
    REQUIRE(registered.count() == burst.frames.count());
    CHECK(registered.width() == burst.frames.width());

    auto mean_pixel_stddev = [](const FrameSequence& seq) {
        const ImageGrid mean = average_frame(seq);
        double acc = 0.0;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            double var = 0.0;
            for (const auto& f : seq.frames) {
                const double d = f[i] - mean[i];
                var += d * d;
            }
            acc += std::sqrt(var / double(seq.count()));
        }
        return acc / double(mean.size());
    };

    const double before = mean_pixel_stddev(burst.frames);
    const double after = mean_pixel_stddev(registered);
    CHECK(after <= 0.5 * before);  // at least a 50% reduction

    // residual-reduction invariant
    const ImageGrid va = average_frame(burst.frames);
    const ImageGrid va_reg = average_frame(registered);
    double raw = 0.0, reg = 0.0;
    for (int i = 0; i < burst.frames.count(); ++i) {
        raw += l2_distance(burst.frames[std::size_t(i)], va);
        reg += l2_distance(registered[std::size_t(i)], va_reg);
    }
    CHECK(reg <= raw);
}
