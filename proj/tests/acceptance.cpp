// Acceptance suite: every release-gating property of the pipeline, one
// pass/fail line each. Exits nonzero if any hard criterion fails. The final
// timing comparison is reported but never asserted (machine-dependent).
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "burstacc/accumulate.hpp"
#include "burstacc/analysis.hpp"
#include "burstacc/convolve.hpp"
#include "burstacc/io.hpp"
#include "burstacc/registration.hpp"
#include "burstacc/rng.hpp"
#include "burstacc/synth.hpp"
#include "oracles.hpp"

using namespace burstacc;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
    bool soft = false;  // reported, never failing
};

struct SizeSpec {
    int w, h;
};

const std::vector<SizeSpec> kRoundTripSizes{{16, 16}, {37, 23}, {64, 64}, {128, 128}};

// ---- 1 + 2: tight-frame round trip and energy conservation --------------------

bool criterion_round_trip_and_energy(bool energy_check, std::string& detail) {
    const FilterBank bank = build_framelet_bank();
    Stopwatch clock;

    double worst = 0.0;
    int tested = 0;
    std::uint64_t seed = 9000;
    while (tested < 50) {
        for (const auto& sz : kRoundTripSizes) {
            const int feasible = max_levels(sz.w, sz.h, bank);
            for (int levels = 1; levels <= std::min(4, feasible) && tested < 50; ++levels) {
                const ImageGrid img = oracles::random_image(sz.w, sz.h, seed++);
                const SubbandSet set = analyze(img, bank, levels);
                if (energy_check) {
                    double energy = 0.0;
                    for (const auto& band : set.subbands)
                        for (double v : band.samples()) energy += v * v;
                    double ref = 0.0;
                    for (double v : img.samples()) ref += v * v;
                    worst = std::max(worst, std::abs(energy - ref) / ref);
                } else {
                    const ImageGrid back = synthesize(set, bank);
                    worst = std::max(worst, relative_l2_error(back, img));
                }
                ++tested;
            }
        }
    }

    const double elapsed = clock.seconds();
    const double tol = energy_check ? 1e-9 : 1e-10;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d images, max rel err %.2e (tol %.0e), %.1f s", tested,
                  worst, tol, elapsed);
    detail = buf;
    return worst <= tol && elapsed < 10.0;
}

// ---- 3: weight normalization ----------------------------------------------------

bool criterion_weight_normalization(std::string& detail) {
    double worst = 0.0;

    // FBA weights on a generic burst and on an all-zero burst (fallback).
    {
        std::vector<ComplexSpectrum> spectra;
        for (std::uint64_t s = 0; s < 5; ++s)
            spectra.push_back(fft2(oracles::random_image(24, 20, 300 + s)));
        const auto weights = fba_weights(spectra, SpectralParams{11.0, kSigmaAuto});
        for (std::size_t i = 0; i < spectra[0].size(); ++i) {
            double sum = 0.0;
            for (const auto& w : weights) sum += w.values[i];
            worst = std::max(worst, std::abs(sum - 1.0));
        }

        std::vector<ComplexSpectrum> zeros(4, fft2(ImageGrid(16, 16, 0.0)));
        const auto fallback = fba_weights(zeros, SpectralParams{11.0, kSigmaAuto});
        for (std::size_t i = 0; i < zeros[0].size(); ++i) {
            double sum = 0.0;
            for (const auto& w : fallback) sum += w.values[i];
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    }

    // WWBA spatial weights, with a flat patch shared by all frames so the
    // detail subbands hit the fallback rule there.
    {
        const FilterBank bank = build_framelet_bank();
        FrameSequence burst;
        for (std::uint64_t s = 0; s < 3; ++s) {
            ImageGrid frame = oracles::random_image(32, 32, 400 + s);
            for (int y = 8; y < 24; ++y)
                for (int x = 8; x < 24; ++x) frame.at(x, y) = 0.5;
            burst.frames.push_back(std::move(frame));
        }
        const WwbaResult r =
            wwba_detailed(burst, bank, 2, SpectralParams{11.0, kSigmaAuto});
        for (const auto& per_band : r.weights.weights) {
            for (std::size_t i = 0; i < per_band[0].values.size(); ++i) {
                double sum = 0.0;
                for (const auto& w : per_band) sum += w.values[i];
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
    }

    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |sum - 1| = %.2e (tol 1e-9)", worst);
    detail = buf;
    return worst <= 1e-9;
}

// ---- 4 + 5: proposition equivalences --------------------------------------------

bool criterion_equivalence(const std::string& mode, double time_budget, std::string& detail) {
    Stopwatch clock;
    double worst = 0.0;
    int count = 0;
    std::string worst_case;
    for (const auto& c : equivalence_matrix(/*small_matrix=*/false)) {
        if (c.mode != mode) continue;
        const EquivalenceReport r = run_equivalence_case(c);
        if (r.relative_l2_error > worst) {
            worst = r.relative_l2_error;
            worst_case = c.name;
        }
        ++count;
        if (!r.tolerance_passed) {
            detail = c.name + " rel_l2 " + std::to_string(r.relative_l2_error) + " > 1e-6";
            return false;
        }
    }
    const double elapsed = clock.seconds();
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%d cases, worst rel err %.2e (%s), %.1f s", count, worst,
                  worst_case.c_str(), elapsed);
    detail = buf;
    return time_budget <= 0.0 || elapsed < time_budget;
}

// ---- 6: non-commutativity witness ------------------------------------------------

bool criterion_witness(std::string& detail) {
    const WitnessResult w = run_noncommutativity_witness();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "wwba vs wwfba rel %.3e (> 1e-3), wwfba kernel check %.2e (<= 1e-6)",
                  w.wwba_vs_wwfba_rel, w.wwfba_vs_kernel_rel);
    detail = buf;
    return w.wwba_vs_wwfba_rel > 1e-3 && w.wwba_vs_kernel_rel > 1e-3 &&
           w.wwfba_vs_kernel_rel <= 1e-6;
}

// ---- 7: soft-threshold prox oracle ------------------------------------------------

bool criterion_prox(std::string& detail) {
    Rng rng(777);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double f = rng.uniform(-1.5, 1.5);
        const double lambda = rng.uniform(0.01, 0.8);
        const double closed = soft_threshold(f, lambda);
        const double grid = oracles::prox_grid_argmin(f, lambda);
        worst = std::max(worst, std::abs(closed - grid));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "100 pairs, max |closed - grid| = %.2e (tol 1e-3)", worst);
    detail = buf;
    return worst <= 1e-3 + 1e-12;
}

// ---- 8: flow recovery ---------------------------------------------------------------

double mean_interior_epe(const FlowField& flow, const FlowField& truth, int margin) {
    double acc = 0.0;
    int count = 0;
    for (int y = margin; y < flow.height() - margin; ++y)
        for (int x = margin; x < flow.width() - margin; ++x) {
            acc += std::hypot(flow.dx.at(x, y) - truth.dx.at(x, y),
                              flow.dy.at(x, y) - truth.dy.at(x, y));
            ++count;
        }
    return acc / count;
}

bool criterion_flow(std::string& detail) {
    const ImageGrid moving = make_smooth_texture(96, 96, 17);
    FlowField shift(96, 96);
    for (double& v : shift.dx.samples()) v = 2.0;
    for (double& v : shift.dy.samples()) v = 3.0;
    const double epe_shift =
        mean_interior_epe(lk_flow(warp_bilinear(moving, shift), moving), shift, 12);

    const ImageGrid moving2 = make_smooth_texture(96, 96, 23, 2.5);
    FlowField wave(96, 96);
    for (int y = 0; y < 96; ++y)
        for (int x = 0; x < 96; ++x) {
            wave.dx.at(x, y) = 1.5 * std::sin(2.0 * M_PI * y / 64.0);
            wave.dy.at(x, y) = 1.5 * std::cos(2.0 * M_PI * x / 64.0);
        }
    const double epe_wave =
        mean_interior_epe(lk_flow(warp_bilinear(moving2, wave), moving2), wave, 12);

    char buf[128];
    std::snprintf(buf, sizeof(buf), "translation EPE %.3f px (<= 0.2), sinusoid EPE %.3f px (<= 0.3)",
                  epe_shift, epe_wave);
    detail = buf;
    return epe_shift <= 0.2 && epe_wave <= 0.3;
}

// ---- 9 + 12: registration benefit and timing order --------------------------------

struct MethodTiming {
    Method method;
    double seconds = 0.0;
};

struct BenefitOutcome {
    bool passed = false;
    std::string detail;
    std::vector<MethodTiming> timings;
};

BenefitOutcome registration_benefit() {
    BenefitOutcome outcome;
    Stopwatch clock;

    const ImageGrid clean = make_bar_chart(128, 128);
    DegradationSpec spec;
    spec.warp_amplitude = 2.0;
    spec.warp_smoothness = 96.0;  // large-scale wobble, the worst case for naive averaging
    spec.kernels = {gaussian_kernel(0.35)};
    spec.noise_sigma = 0.005;
    spec.seed = 20250810;
    const SyntheticBurst burst = generate_burst(clean, 50, spec);

    const FrameSequence registered = register_sequence(burst.frames);
    const double mean_raw_psnr = psnr(average_frame(burst.frames), clean);

    std::string rows;
    bool all_ok = true;
    for (const Method m :
         {Method::Fba, Method::FrWwba, Method::FrWwfba, Method::Sfba, Method::FrSwba}) {
        BurstConfig config;
        config.method = m;

        Stopwatch method_clock;
        const double with_reg = psnr(run_method(registered, config).image, clean);
        outcome.timings.push_back({m, method_clock.seconds()});
        const double without = psnr(run_method(burst.frames, config).image, clean);

        const bool ok = with_reg >= without + 1.0 && with_reg >= mean_raw_psnr + 2.0;
        all_ok = all_ok && ok;
        char row[160];
        std::snprintf(row, sizeof(row), "\n      %-8s reg %6.2f dB | no-reg %6.2f dB | %s",
                      method_name(m).c_str(), with_reg, without, ok ? "ok" : "FAIL");
        rows += row;
    }

    const double elapsed = clock.seconds();
    char head[128];
    std::snprintf(head, sizeof(head), "raw temporal mean %.2f dB, total %.0f s (< 300 s)%s",
                  mean_raw_psnr, elapsed, rows.c_str());
    outcome.detail = head;
    outcome.passed = all_ok && elapsed < 300.0;
    return outcome;
}

// ---- 10: determinism ------------------------------------------------------------------

std::vector<char> run_pipeline_to_png_bytes(Method method, std::uint64_t seed,
                                            const std::filesystem::path& path) {
    const ImageGrid clean = make_bar_chart(64, 64);
    DegradationSpec spec;
    spec.warp_amplitude = 1.5;
    spec.warp_smoothness = 10.0;
    spec.kernels = {gaussian_kernel(0.8)};
    spec.noise_sigma = 0.004;
    spec.seed = seed;
    const SyntheticBurst burst = generate_burst(clean, 12, spec);

    BurstConfig config;
    config.method = method;
    config.register_nonrigid = true;
    const RunResult result = run_method(burst.frames, config);

    save_image(result.image, path);
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>());
}

bool criterion_determinism(std::string& detail) {
    const auto dir = std::filesystem::temp_directory_path() / "burstacc_acceptance";
    std::filesystem::create_directories(dir);

    bool ok = true;
    for (const Method m : {Method::Fba, Method::FrSwba}) {
        const auto b1 = run_pipeline_to_png_bytes(m, 31337, dir / "run1.png");
        const auto b2 = run_pipeline_to_png_bytes(m, 31337, dir / "run2.png");
        ok = ok && b1 == b2 && !b1.empty();
    }
    std::filesystem::remove_all(dir);
    detail = ok ? "generate + register + restore twice: PNG bytes identical (fba, fr-swba)"
                : "outputs differ between identical runs";
    return ok;
}

// ---- 11: sparsity monotonicity ----------------------------------------------------------

bool criterion_sparsity(std::string& detail) {
    const FilterBank bank = build_framelet_bank();
    const ImageGrid clean = make_bar_chart(48, 48);
    DegradationSpec spec;
    spec.warp_amplitude = 1.0;
    spec.noise_sigma = 0.01;
    spec.seed = 5;
    const SyntheticBurst burst = generate_burst(clean, 4, spec);

    std::string fractions;
    double prev = 2.0;
    bool monotone = true;
    for (const double lambda : {0.0005, 0.001, 0.005, 0.02}) {
        const SwbaResult r = swba_detailed(burst.frames, bank, 3, lambda);
        const double frac = r.nonzero_fraction();
        monotone = monotone && frac <= prev;
        prev = frac;
        char buf[48];
        std::snprintf(buf, sizeof(buf), " %.4f", frac);
        fractions += buf;
    }
    detail = "fr-swba nonzero fractions across lambda sweep:" + fractions;
    return monotone;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;

    criteria.push_back({"tight-frame round trip (1e-10, < 10 s)",
                        [](std::string& d) { return criterion_round_trip_and_energy(false, d); }});
    criteria.push_back({"subband energy conservation (1e-9)",
                        [](std::string& d) { return criterion_round_trip_and_energy(true, d); }});
    criteria.push_back({"weight normalization incl. fallback (1e-9)",
                        criterion_weight_normalization});
    criteria.push_back({"equivalent-kernel identity, Fourier accumulation (1e-6, < 60 s)",
                        [](std::string& d) { return criterion_equivalence("fba", 60.0, d); }});
    criteria.push_back({"equivalent-kernel identity, per-subband accumulation (1e-6)",
                        [](std::string& d) { return criterion_equivalence("wwfba", 0.0, d); }});
    criteria.push_back({"pointwise/spectral weighting non-commutativity witness (> 1e-3)",
                        criterion_witness});
    criteria.push_back({"soft-threshold prox grid oracle (100 pairs, 1e-3)", criterion_prox});
    criteria.push_back({"flow recovery: translation and sinusoid", criterion_flow});

    BenefitOutcome benefit;  // computed in criterion 9, reused by criterion 12
    criteria.push_back({"registration benefit, 50-frame burst (>= +1 dB / +2 dB, < 5 min)",
                        [&benefit](std::string& d) {
                            benefit = registration_benefit();
                            d = benefit.detail;
                            return benefit.passed;
                        }});
    criteria.push_back({"determinism: bit-identical restored images", criterion_determinism});
    criteria.push_back({"sparsity monotone in lambda {0.0005, 0.001, 0.005, 0.02}",
                        criterion_sparsity});
    criteria.push_back({"timing order, sparse vs weighted (reported, not asserted)",
                        [&benefit](std::string& d) {
                            double fba = 0, wwba = 0, wwfba = 0, sfba = 0, swba = 0;
                            for (const auto& t : benefit.timings) {
                                if (t.method == Method::Fba) fba = t.seconds;
                                if (t.method == Method::FrWwba) wwba = t.seconds;
                                if (t.method == Method::FrWwfba) wwfba = t.seconds;
                                if (t.method == Method::Sfba) sfba = t.seconds;
                                if (t.method == Method::FrSwba) swba = t.seconds;
                            }
                            char buf[200];
                            std::snprintf(buf, sizeof(buf),
                                          "sfba/fba %.2fx; fr-swba/fr-wwba %.2fx; "
                                          "fr-swba/fr-wwfba %.2fx",
                                          fba > 0 ? sfba / fba : 0.0,
                                          wwba > 0 ? swba / wwba : 0.0,
                                          wwfba > 0 ? swba / wwfba : 0.0);
                            d = buf;
                            return true;
                        },
                        /*soft=*/true});

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool passed = false;
        try {
            passed = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (criteria[i].soft) {
            std::printf("[%2zu/%zu] PASS (soft) %s — %s\n", i + 1, criteria.size(),
                        criteria[i].name.c_str(), detail.c_str());
            continue;
        }
        std::printf("[%2zu/%zu] %s %s — %s\n", i + 1, criteria.size(),
                    passed ? "PASS" : "FAIL", criteria[i].name.c_str(), detail.c_str());
        if (!passed) ++failures;
    }

    if (failures == 0) {
        std::printf("RESULT: all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("RESULT: %d criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
