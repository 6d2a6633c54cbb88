// burstacc: burst restoration on turbulence-degraded frame sequences.
//
// Subcommands:
//   restore   run one accumulation method over a frame directory
//   sweep     run a method across a list of p or lambda values
//   verify    self-check the pipeline against its analytic predictions
//   generate  write a seeded synthetic burst plus its ground-truth record
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "burstacc/accumulate.hpp"
#include "burstacc/analysis.hpp"
#include "burstacc/convolve.hpp"
#include "burstacc/io.hpp"
#include "burstacc/synth.hpp"

namespace fs = std::filesystem;
using namespace burstacc;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;  // verification failure or runtime error
constexpr int kExitUsage = 2;

struct RestoreArgs {
    std::string input;
    std::string pattern = "*.png";
    std::string method;
    double p = 11.0;
    double lambda = kLambdaAuto;
    double sigma = kSigmaAuto;
    int levels = 4;
    std::string registration = "none";
    int register_iters = 1;
    bool literal_sba = false;
    bool rescale_lambda = false;
    bool threshold_lowpass = false;
    std::string out;
    std::string report;
    std::string ground_truth;
};

BurstConfig config_from(const RestoreArgs& a) {
    BurstConfig config;
    config.method = parse_method(a.method);
    config.p = a.p;
    config.lambda = a.lambda;
    config.sigma = a.sigma;
    config.levels = a.levels;
    config.register_nonrigid = a.registration == "nonrigid";
    config.register_iterations = a.register_iters;
    config.literal_sba = a.literal_sba;
    config.rescale_lambda = a.rescale_lambda;
    config.threshold_lowpass = a.threshold_lowpass;
    return config;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text << "\n";
}

int cmd_restore(const RestoreArgs& args) {
    const BurstConfig config = config_from(args);
    const FrameSequence burst = load_sequence(args.input, args.pattern);

    RunResult result = run_method(burst, config);
    if (!args.ground_truth.empty()) {
        const ImageGrid truth = load_image(args.ground_truth);
        result.report.psnr = psnr(result.image, truth);
    }

    save_image(result.image, args.out);
    const std::string json = result.report.to_json();
    if (!args.report.empty()) write_text(args.report, json);
    std::cout << json << "\n";
    return kExitSuccess;
}

int cmd_sweep(const RestoreArgs& args, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir) {
    if (values.empty()) throw CLI::ValidationError("--values", "sweep list is empty");
    fs::create_directories(out_dir);

    const FrameSequence burst = load_sequence(args.input, args.pattern);
    std::optional<ImageGrid> truth;
    if (!args.ground_truth.empty()) truth = load_image(args.ground_truth);

    nlohmann::json rows = nlohmann::json::array();
    std::printf("%-10s %-12s %-14s %-10s\n", param.c_str(), "psnr_db", "nonzero_frac",
                "seconds");
    for (const double value : values) {
        RestoreArgs one = args;
        if (param == "p") {
            one.p = value;
        } else {
            one.lambda = value;
        }
        const BurstConfig config = config_from(one);
        RunResult result = run_method(burst, config);
        if (truth) result.report.psnr = psnr(result.image, *truth);

        std::ostringstream name;
        name << args.method << "-" << param << "-" << value << ".png";
        save_image(result.image, fs::path(out_dir) / name.str());

        nlohmann::json row = {{"value", value},
                              {"image", name.str()},
                              {"seconds", result.report.total_seconds}};
        if (result.report.psnr) row["psnr_db"] = *result.report.psnr;
        if (result.report.nonzero_fraction)
            row["nonzero_fraction"] = *result.report.nonzero_fraction;
        rows.push_back(row);

        char psnr_text[32] = "-", nz_text[32] = "-";
        if (result.report.psnr) std::snprintf(psnr_text, sizeof(psnr_text), "%.3f", *result.report.psnr);
        if (result.report.nonzero_fraction)
            std::snprintf(nz_text, sizeof(nz_text), "%.6f", *result.report.nonzero_fraction);
        std::printf("%-10.4g %-12s %-14s %-10.3f\n", value, psnr_text, nz_text,
                    result.report.total_seconds);
    }

    nlohmann::json summary = {{"method", args.method}, {"param", param}, {"rows", rows}};
    write_text((fs::path(out_dir) / "sweep.json").string(), summary.dump(2));
    if (!args.report.empty()) write_text(args.report, summary.dump(2));
    return kExitSuccess;
}

// ---- verify -------------------------------------------------------------------

struct VerifyCheck {
    std::string name;
    std::string mode;
    double metric = 0.0;
    bool passed = false;
    bool is_equivalence = false;  // equivalence checks report rel_l2
};

void emit(std::ostream& out, const VerifyCheck& c) {
    nlohmann::json j = {{"case", c.name},
                        {"mode", c.mode},
                        {c.is_equivalence ? "rel_l2" : "metric", c.metric},
                        {"passed", c.passed}};
    out << j.dump() << "\n";
}

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

std::vector<VerifyCheck> flow_checks() {
    std::vector<VerifyCheck> checks;
    {
        const ImageGrid moving = make_smooth_texture(96, 96, 17);
        FlowField truth(96, 96);
        for (double& v : truth.dx.samples()) v = 2.0;
        for (double& v : truth.dy.samples()) v = 3.0;
        const ImageGrid reference = warp_bilinear(moving, truth);
        const double epe = mean_interior_epe(lk_flow(reference, moving), truth, 12);
        checks.push_back({"flow-translation-2-3", "registration", epe, epe <= 0.2, false});
    }
    {
        const int n = 96;
        const ImageGrid moving = make_smooth_texture(n, n, 23, 2.5);
        FlowField truth(n, n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                truth.dx.at(x, y) = 1.5 * std::sin(2.0 * M_PI * y / 64.0);
                truth.dy.at(x, y) = 1.5 * std::cos(2.0 * M_PI * x / 64.0);
            }
        const ImageGrid reference = warp_bilinear(moving, truth);
        const double epe = mean_interior_epe(lk_flow(reference, moving), truth, 12);
        checks.push_back({"flow-sinusoid-1.5px", "registration", epe, epe <= 0.3, false});
    }
    return checks;
}

VerifyCheck registration_residual_check() {
    const ImageGrid clean = make_bar_chart(96, 96);
    DegradationSpec spec;
    spec.warp_amplitude = 2.0;
    spec.warp_smoothness = 12.0;
    spec.seed = 77;
    const SyntheticBurst burst = generate_burst(clean, 20, spec);
    const FrameSequence registered = register_sequence(burst.frames);

    auto residual = [](const FrameSequence& seq) {
        const ImageGrid mean = average_frame(seq);
        double acc = 0.0;
        for (const auto& f : seq.frames) acc += l2_distance(f, mean);
        return acc;
    };
    const double before = residual(burst.frames);
    const double after = residual(registered);
    return {"registration-residual", "registration", after / before, after <= before, false};
}

std::vector<VerifyCheck> psnr_benefit_checks(int size, int frames) {
    const ImageGrid clean = make_bar_chart(size, size);
    DegradationSpec spec;
    spec.warp_amplitude = 2.0;
    spec.warp_smoothness = size * 3 / 4;
    spec.kernels = {gaussian_kernel(0.35)};
    spec.noise_sigma = 0.005;
    spec.seed = 4242;
    const SyntheticBurst burst = generate_burst(clean, frames, spec);
    const FrameSequence registered = register_sequence(burst.frames);
    const double mean_psnr = psnr(average_frame(burst.frames), clean);

    std::vector<VerifyCheck> checks;
    for (const Method m :
         {Method::Fba, Method::FrWwba, Method::FrWwfba, Method::Sfba, Method::FrSwba}) {
        BurstConfig config;
        config.method = m;
        const double with_reg = psnr(run_method(registered, config).image, clean);
        const double without = psnr(run_method(burst.frames, config).image, clean);
        const bool ok = with_reg >= without + 1.0 && with_reg >= mean_psnr + 2.0;
        // metric: margin above the tighter of the two requirements
        const double margin = with_reg - std::max(without + 1.0, mean_psnr + 2.0);
        checks.push_back({"psnr-benefit-" + method_name(m), "end-to-end", margin, ok, false});
    }
    return checks;
}

int cmd_verify(const std::string& matrix, const std::string& case_filter,
               const std::string& out_path) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error(out_path + ": cannot open for writing");
        out = &file;
    }

    auto matches = [&](const std::string& name) {
        return case_filter.empty() || name.find(case_filter) != std::string::npos;
    };

    std::vector<VerifyCheck> checks;

    for (const auto& c : equivalence_matrix(matrix == "small")) {
        if (!matches(c.name)) continue;
        const EquivalenceReport r = run_equivalence_case(c);
        checks.push_back({r.case_name, r.mode, r.relative_l2_error, r.tolerance_passed, true});
    }

    if (matches("witness-noncommutativity")) {
        const WitnessResult w = run_noncommutativity_witness();
        checks.push_back({"witness-noncommutativity", "wwba-vs-wwfba", w.wwba_vs_wwfba_rel,
                          w.wwba_vs_wwfba_rel > 1e-3 && w.wwfba_vs_kernel_rel <= 1e-6, true});
    }

    for (auto& c : flow_checks())
        if (matches(c.name)) checks.push_back(c);

    if (matches("registration-residual")) checks.push_back(registration_residual_check());

    const int size = 128;
    const int frames = matrix == "small" ? 20 : 50;
    bool want_psnr = false;
    for (const Method m :
         {Method::Fba, Method::FrWwba, Method::FrWwfba, Method::Sfba, Method::FrSwba})
        want_psnr = want_psnr || matches("psnr-benefit-" + method_name(m));
    if (want_psnr)
        for (auto& c : psnr_benefit_checks(size, frames))
            if (matches(c.name)) checks.push_back(c);

    std::string first_failure;
    std::size_t passed = 0;
    for (const auto& c : checks) {
        emit(*out, c);
        if (c.passed) {
            ++passed;
        } else if (first_failure.empty()) {
            first_failure = c.name;
        }
    }
    std::cerr << passed << "/" << checks.size() << " checks passed\n";
    if (checks.empty()) {
        std::cerr << "no case matches filter '" << case_filter << "'\n";
        return kExitUsage;
    }
    if (!first_failure.empty()) {
        std::cerr << "first failing case: " << first_failure << "\n";
        return kExitFailure;
    }
    return kExitSuccess;
}

int cmd_generate(const std::string& out_dir, int width, int height, int frames,
                 double warp_amplitude, double warp_smoothness, double blur_sigma,
                 double noise_sigma, std::uint64_t seed, const std::string& chart) {
    const ImageGrid clean = chart == "texture" ? make_smooth_texture(width, height, seed)
                                               : make_bar_chart(width, height);
    DegradationSpec spec;
    spec.warp_amplitude = warp_amplitude;
    spec.warp_smoothness = warp_smoothness;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    if (blur_sigma > 0.0) spec.kernels = {gaussian_kernel(blur_sigma)};

    const SyntheticBurst burst = generate_burst(clean, frames, spec);
    persist_burst(burst, spec, out_dir);
    save_image(clean, fs::path(out_dir) / "clean.png");
    std::cout << "wrote " << frames << " frames + ground_truth.json + clean.png to " << out_dir
              << "\n";
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted and sparse burst accumulation for turbulence-degraded sequences"};
    app.require_subcommand(1);

    RestoreArgs args;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--input", args.input, "directory holding the frame sequence")
            ->required();
        cmd->add_option("--pattern", args.pattern, "filename glob (default *.png)");
        cmd->add_option("--method", args.method,
                        "fba | fr-wwba | fr-wwfba | sfba | fr-swba (c-* names are "
                        "recognized but unsupported)")
            ->required();
        cmd->add_option("--p", args.p, "weight exponent (default 11)");
        cmd->add_option("--lambda", args.lambda,
                        "threshold; default 0.5 for sfba, 0.001 for fr-swba");
        cmd->add_option("--sigma", args.sigma,
                        "weight smoothing sigma; default min(w,h)/50, 0 disables");
        cmd->add_option("--levels", args.levels, "framelet levels (default 4)");
        cmd->add_option("--register", args.registration, "none | nonrigid")
            ->check(CLI::IsMember({"none", "nonrigid"}));
        cmd->add_option("--register-iters", args.register_iters,
                        "registration passes (default 1)");
        cmd->add_flag("--literal-sba", args.literal_sba,
                      "plain spectral sum: no 1/M and no lambda rescaling");
        cmd->add_flag("--rescale-lambda", args.rescale_lambda,
                      "divide spectra by sqrt(w*h) before thresholding so sfba's "
                      "lambda is resolution independent");
        cmd->add_flag("--threshold-lowpass", args.threshold_lowpass,
                      "also shrink the lowpass residual in fr-swba");
        cmd->add_option("--ground-truth", args.ground_truth,
                        "clean reference image; adds PSNR to the report");
        cmd->add_option("--report", args.report, "write the JSON report here");
        if (with_out)
            cmd->add_option("--out", args.out, "restored image (16-bit PNG)")->required();
    };

    CLI::App* restore = app.add_subcommand("restore", "restore one image from a burst");
    add_common(restore, true);

    CLI::App* sweep = app.add_subcommand("sweep", "sweep p or lambda over a list");
    std::string sweep_param = "p";
    std::vector<double> sweep_values;
    std::string sweep_out_dir;
    add_common(sweep, false);
    sweep->add_option("--param", sweep_param, "p | lambda")
        ->check(CLI::IsMember({"p", "lambda"}));
    sweep->add_option("--values", sweep_values, "comma-separated sweep values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out-dir", sweep_out_dir, "directory for per-value images")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the built-in verification suites");
    std::string matrix = "full", case_filter, verify_out;
    verify->add_option("--matrix", matrix, "small | full (default full)")
        ->check(CLI::IsMember({"small", "full"}));
    verify->add_option("--case", case_filter, "run only cases whose name contains this");
    verify->add_option("--out", verify_out, "write JSONL results here instead of stdout");

    CLI::App* generate = app.add_subcommand("generate", "write a synthetic burst to disk");
    std::string gen_dir, gen_chart = "bars";
    int gen_w = 128, gen_h = 128, gen_frames = 50;
    double gen_amp = 2.0, gen_smooth = 12.0, gen_blur = 0.35, gen_noise = 0.005;
    std::uint64_t gen_seed = 1;
    generate->add_option("--out-dir", gen_dir, "output directory")->required();
    generate->add_option("--width", gen_w);
    generate->add_option("--height", gen_h);
    generate->add_option("--frames", gen_frames);
    generate->add_option("--warp-amplitude", gen_amp, "peak displacement, px");
    generate->add_option("--warp-smoothness", gen_smooth, "correlation length, px");
    generate->add_option("--blur-sigma", gen_blur, "shared Gaussian blur (0 = none)");
    generate->add_option("--noise-sigma", gen_noise);
    generate->add_option("--seed", gen_seed);
    generate->add_option("--chart", gen_chart, "bars | texture")
        ->check(CLI::IsMember({"bars", "texture"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (restore->parsed()) return cmd_restore(args);
        if (sweep->parsed()) return cmd_sweep(args, sweep_param, sweep_values, sweep_out_dir);
        if (verify->parsed()) return cmd_verify(matrix, case_filter, verify_out);
        if (generate->parsed())
            return cmd_generate(gen_dir, gen_w, gen_h, gen_frames, gen_amp, gen_smooth,
                                gen_blur, gen_noise, gen_seed, gen_chart);
    } catch (const std::invalid_argument& e) {  // includes UnsupportedVariant
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
