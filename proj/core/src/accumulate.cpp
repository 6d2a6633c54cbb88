#include "burstacc/accumulate.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "burstacc/parallel.hpp"

namespace burstacc {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

// Analyzes every frame of the burst; sets[i] holds frame i's subbands.
std::vector<SubbandSet> analyze_burst(const FrameSequence& burst, const FilterBank& bank,
                                      int levels, BoundaryMode boundary) {
    std::vector<SubbandSet> sets(burst.frames.size());
    parallel_for(burst.frames.size(),
                 [&](std::size_t i) { sets[i] = analyze(burst[i], bank, levels, boundary); });
    return sets;
}

}  // namespace

Method parse_method(const std::string& name) {
    const std::string key = lowercase(name);
    if (key == "fba") return Method::Fba;
    if (key == "fr-wwba") return Method::FrWwba;
    if (key == "fr-wwfba") return Method::FrWwfba;
    if (key == "sfba") return Method::Sfba;
    if (key == "fr-swba") return Method::FrSwba;
    if (key == "c-wwba" || key == "c-wwfba" || key == "c-swba")
        throw UnsupportedVariant("unsupported variant '" + name +
                                 "': curvelet-based methods are not built; supported "
                                 "methods: fba, fr-wwba, fr-wwfba, sfba, fr-swba");
    throw std::invalid_argument("unknown method '" + name +
                                "'; supported: fba, fr-wwba, fr-wwfba, sfba, fr-swba");
}

std::string method_name(Method method) {
    switch (method) {
        case Method::Fba: return "fba";
        case Method::FrWwba: return "fr-wwba";
        case Method::FrWwfba: return "fr-wwfba";
        case Method::Sfba: return "sfba";
        case Method::FrSwba: return "fr-swba";
    }
    return "?";
}

bool is_sparse(Method method) {
    return method == Method::Sfba || method == Method::FrSwba;
}

double BurstConfig::resolved_lambda() const {
    if (lambda >= 0.0) return lambda;
    return method == Method::Sfba ? 0.5 : 0.001;
}

// ---- wwba -------------------------------------------------------------------

namespace {

ImageGrid wwba_run(const FrameSequence& burst, const FilterBank& bank, int levels,
                   const SpectralParams& params, BoundaryMode boundary, StageTimes* stages,
                   SubbandWeights* capture) {
    if (burst.count() < 1)
        throw std::invalid_argument("wwba: empty burst");

    Stopwatch clock;
    const std::vector<SubbandSet> sets = analyze_burst(burst, bank, levels, boundary);
    if (stages) stages->forward_transform += clock.lap();

    const std::size_t bands = std::size_t(sets[0].count());
    const std::size_t m = burst.frames.size();
    const double sigma = resolve_sigma(params, burst.width(), burst.height());

    SubbandSet acc = sets[0];  // structure template; samples overwritten below
    if (capture) capture->weights.resize(bands);

    std::vector<double> weight_sec(bands, 0.0), acc_sec(bands, 0.0);
    parallel_for(bands, [&](std::size_t n) {
        Stopwatch band_clock;
        std::vector<ImageGrid> magnitudes(m);
        for (std::size_t i = 0; i < m; ++i) {
            ImageGrid mag = sets[i].subbands[n];
            for (double& v : mag.samples()) v = std::abs(v);
            magnitudes[i] = std::move(mag);
        }
        std::vector<WeightField> weights =
            weights_from_magnitudes(magnitudes, params.p, sigma, boundary);
        weight_sec[n] = band_clock.lap();

        ImageGrid sum(burst.width(), burst.height(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const ImageGrid& band = sets[i].subbands[n];
            const ImageGrid& wf = weights[i].values;
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += wf[k] * band[k];
        }
        acc.subbands[n] = std::move(sum);
        if (capture) capture->weights[n] = std::move(weights);
        acc_sec[n] = band_clock.lap();
    });
    if (stages) {
        for (double s : weight_sec) stages->weight_threshold += s;
        for (double s : acc_sec) stages->accumulation += s;
    }

    clock.lap();
    ImageGrid image = synthesize(acc, bank);
    if (stages) stages->inverse_transform += clock.lap();
    return image;
}

}  // namespace

WwbaResult wwba_detailed(const FrameSequence& burst, const FilterBank& bank, int levels,
                         const SpectralParams& params, BoundaryMode boundary,
                         StageTimes* stages) {
    WwbaResult result;
    result.image = wwba_run(burst, bank, levels, params, boundary, stages, &result.weights);
    return result;
}

ImageGrid wwba(const FrameSequence& burst, const FilterBank& bank, int levels,
               const SpectralParams& params, BoundaryMode boundary, StageTimes* stages) {
    return wwba_run(burst, bank, levels, params, boundary, stages, nullptr);
}

// ---- wwfba ------------------------------------------------------------------

namespace {

ImageGrid wwfba_run(const FrameSequence& burst, const FilterBank& bank, int levels,
                    const SpectralParams& params, BoundaryMode boundary, StageTimes* stages,
                    SubbandWeights* capture) {
    if (burst.count() < 1)
        throw std::invalid_argument("wwfba: empty burst");

    Stopwatch clock;
    const std::vector<SubbandSet> sets = analyze_burst(burst, bank, levels, boundary);
    if (stages) stages->forward_transform += clock.lap();

    const std::size_t bands = std::size_t(sets[0].count());
    const std::size_t m = burst.frames.size();

    SubbandSet acc = sets[0];
    if (capture) capture->weights.resize(bands);

    std::vector<StageTimes> band_stages(bands);
    parallel_for(bands, [&](std::size_t n) {
        FrameSequence band_seq;
        band_seq.frames.reserve(m);
        for (std::size_t i = 0; i < m; ++i) band_seq.frames.push_back(sets[i].subbands[n]);
        FbaResult r = fba_detailed(band_seq, params, &band_stages[n]);
        acc.subbands[n] = std::move(r.image);
        if (capture) capture->weights[n] = std::move(r.weights);
    });
    if (stages) {
        for (const auto& bs : band_stages) {
            stages->forward_transform += bs.forward_transform;
            stages->weight_threshold += bs.weight_threshold;
            stages->accumulation += bs.accumulation;
            stages->inverse_transform += bs.inverse_transform;
        }
    }

    clock.lap();
    ImageGrid image = synthesize(acc, bank);
    if (stages) stages->inverse_transform += clock.lap();
    return image;
}

}  // namespace

WwfbaResult wwfba_detailed(const FrameSequence& burst, const FilterBank& bank, int levels,
                           const SpectralParams& params, BoundaryMode boundary,
                           StageTimes* stages) {
    WwfbaResult result;
    result.image = wwfba_run(burst, bank, levels, params, boundary, stages, &result.weights);
    return result;
}

ImageGrid wwfba(const FrameSequence& burst, const FilterBank& bank, int levels,
                const SpectralParams& params, BoundaryMode boundary, StageTimes* stages) {
    return wwfba_run(burst, bank, levels, params, boundary, stages, nullptr);
}

// ---- swba -------------------------------------------------------------------

SwbaResult swba_detailed(const FrameSequence& burst, const FilterBank& bank, int levels,
                         double lambda, const SwbaOptions& options, BoundaryMode boundary,
                         StageTimes* stages) {
    if (burst.count() < 1)
        throw std::invalid_argument("swba: empty burst");
    if (lambda <= 0.0)
        throw std::invalid_argument("swba: lambda must be positive");

    Stopwatch clock;
    const std::vector<SubbandSet> sets = analyze_burst(burst, bank, levels, boundary);
    if (stages) stages->forward_transform += clock.lap();

    const std::size_t bands = std::size_t(sets[0].count());
    const std::size_t m = burst.frames.size();
    const double post = options.normalize_mean ? 1.0 / double(m) : 1.0;

    SubbandSet acc = sets[0];
    SwbaResult result;

    std::vector<std::size_t> nonzero(bands, 0), total(bands, 0);
    std::vector<double> thresh_sec(bands, 0.0);
    parallel_for(bands, [&](std::size_t n) {
        Stopwatch band_clock;
        const bool shrink = !sets[0].info[n].lowpass || options.threshold_lowpass;
        ImageGrid sum(burst.width(), burst.height(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const ImageGrid& band = sets[i].subbands[n];
            if (shrink) {
                for (std::size_t k = 0; k < sum.size(); ++k) {
                    const double v = soft_threshold(band[k], lambda);
                    if (v != 0.0) ++nonzero[n];
                    sum[k] += v;
                }
                total[n] += band.size();
            } else {
                for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += band[k];
            }
        }
        for (double& v : sum.samples()) v *= post;
        acc.subbands[n] = std::move(sum);
        thresh_sec[n] = band_clock.lap();
    });
    for (std::size_t n = 0; n < bands; ++n) {
        result.nonzero_coefficients += nonzero[n];
        result.total_coefficients += total[n];
    }
    if (stages)
        for (double s : thresh_sec) stages->weight_threshold += s;

    clock.lap();
    result.image = synthesize(acc, bank);
    if (stages) stages->inverse_transform += clock.lap();
    return result;
}

ImageGrid swba(const FrameSequence& burst, const FilterBank& bank, int levels, double lambda) {
    return swba_detailed(burst, bank, levels, lambda).image;
}

// ---- dispatch -----------------------------------------------------------------

std::string RunReport::to_json() const {
    nlohmann::json j;
    j["method"] = method;
    j["parameters"] = {
        {"p", p},
        {"lambda", lambda ? nlohmann::json(*lambda) : nlohmann::json(nullptr)},
        {"sigma", sigma},
        {"levels", levels},
        {"registration", registration},
        {"register_iterations", register_iterations},
        {"literal_sba", literal_sba},
        {"rescale_lambda", rescale_lambda},
        {"threshold_lowpass", threshold_lowpass},
    };
    j["input"] = {{"frames", frame_count}, {"width", width}, {"height", height}};
    j["stages_seconds"] = {
        {"registration", stages.registration},
        {"forward_transform", stages.forward_transform},
        {"weight_threshold", stages.weight_threshold},
        {"accumulation", stages.accumulation},
        {"inverse_transform", stages.inverse_transform},
    };
    j["total_seconds"] = total_seconds;
    if (psnr) j["psnr_db"] = *psnr;
    if (nonzero_fraction) j["nonzero_fraction"] = *nonzero_fraction;
    return j.dump(2);
}

RunResult run_method(const FrameSequence& burst, const BurstConfig& config) {
    if (burst.count() < 1)
        throw std::invalid_argument("run_method: empty burst");

    Stopwatch total_clock;
    RunReport report;
    report.method = method_name(config.method);
    report.p = config.p;
    report.sigma = resolve_sigma(SpectralParams{config.p, config.sigma}, burst.width(),
                                 burst.height());
    report.levels = config.levels;
    report.registration = config.register_nonrigid ? "nonrigid" : "none";
    report.register_iterations = config.register_nonrigid ? config.register_iterations : 0;
    report.literal_sba = config.literal_sba;
    report.rescale_lambda = config.rescale_lambda && !config.literal_sba;
    report.threshold_lowpass = config.threshold_lowpass;
    report.frame_count = burst.count();
    report.width = burst.width();
    report.height = burst.height();
    if (is_sparse(config.method)) report.lambda = config.resolved_lambda();

    const FrameSequence* input = &burst;
    FrameSequence registered;
    if (config.register_nonrigid) {
        registered = register_sequence(burst, config.register_iterations, config.flow,
                                       &report.stages);
        input = &registered;
    }

    const SpectralParams params{config.p, config.sigma};
    ImageGrid image;
    switch (config.method) {
        case Method::Fba:
            image = fba_detailed(*input, params, &report.stages).image;
            break;
        case Method::FrWwba: {
            const FilterBank bank = build_framelet_bank();
            image = wwba(*input, bank, config.levels, params, config.boundary, &report.stages);
            break;
        }
        case Method::FrWwfba: {
            const FilterBank bank = build_framelet_bank();
            image = wwfba(*input, bank, config.levels, params, config.boundary, &report.stages);
            break;
        }
        case Method::Sfba: {
            SparseOptions opts;
            opts.normalize_mean = !config.literal_sba;
            opts.rescale_lambda = config.rescale_lambda && !config.literal_sba;
            SfbaResult r =
                sfba_detailed(*input, config.resolved_lambda(), opts, &report.stages);
            report.nonzero_fraction = r.nonzero_fraction();
            image = std::move(r.image);
            break;
        }
        case Method::FrSwba: {
            const FilterBank bank = build_framelet_bank();
            SwbaOptions opts;
            opts.normalize_mean = !config.literal_sba;
            opts.threshold_lowpass = config.threshold_lowpass;
            SwbaResult r = swba_detailed(*input, bank, config.levels, config.resolved_lambda(),
                                         opts, config.boundary, &report.stages);
            report.nonzero_fraction = r.nonzero_fraction();
            image = std::move(r.image);
            break;
        }
    }

    report.total_seconds = total_clock.seconds();
    return RunResult{std::move(image), std::move(report)};
}

}  // namespace burstacc
