// Command-line front end: simulate / extract / analyze / estimate-noise.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "salma/salma.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNotConverged = 3;

std::string default_out_dir() {
    if (const char* env = std::getenv("SALMA_OUTPUT_DIR")) return env;
    return ".";
}

// Values from --config act as defaults; explicit flags win because they are
// applied on top during CLI11 parsing.
struct JsonDefaults {
    json j = json::object();

    void load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw CLI::ValidationError("--config", "cannot open " + path);
        f >> j;
    }

    template <typename T>
    void apply(const std::string& key, T& var) const {
        if (j.contains(key)) var = j.at(key).get<T>();
    }

    // String-typed options ('auto' escape hatches) also accept plain JSON
    // numbers, so a run manifest can be fed back in as a config.
    void apply(const std::string& key, std::string& var) const {
        if (!j.contains(key)) return;
        const auto& v = j.at(key);
        var = v.is_string() ? v.get<std::string>() : v.dump();
    }
};

JsonDefaults preload_config(int argc, char** argv) {
    JsonDefaults d;
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") d.load(argv[i + 1]);
    }
    return d;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

void write_history_csv(const std::string& path, const std::vector<salma::IterRecord>& h) {
    auto f = salma::io::open_out(path);
    f << "iteration,stage,a,objective,primal_residual,primal_residual_rel\n";
    for (std::size_t i = 0; i < h.size(); ++i)
        f << i << "," << h[i].stage << "," << salma::io::format_double(h[i].a) << ","
          << salma::io::format_double(h[i].objective) << ","
          << salma::io::format_double(h[i].primal_residual) << ","
          << salma::io::format_double(h[i].primal_residual_rel) << "\n";
}

json peaks_to_json(const std::vector<salma::Peak>& peaks, const std::string& unit) {
    json arr = json::array();
    for (const auto& p : peaks) arr.push_back({{unit, p.location}, {"value", p.value}});
    return arr;
}

// A plan whose grid shape matches a stored magnitude grid, for re-running
// the |c|-based diagnostics on files.
salma::Spectrogram grid_to_spectrogram(const salma::io::MagnitudeGrid& g) {
    const auto plan =
        salma::StftPlan::create(2 * g.hop, g.rows, (g.cols - 1) * g.hop);
    salma::Spectrogram c(plan);
    for (int m1 = 0; m1 < g.rows; ++m1)
        for (int m2 = 0; m2 < g.cols; ++m2) c.at(m1, m2) = g.at(m1, m2);
    return c;
}

int cmd_simulate(const salma::SimSpec& spec, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto [clean, noisy] = salma::generate(spec);
    const fs::path dir(out_dir);
    salma::io::write_signal_csv((dir / "clean.csv").string(), clean);
    salma::io::write_signal_csv((dir / "noisy.csv").string(), noisy);
    salma::io::write_wav((dir / "clean.wav").string(), clean);
    salma::io::write_wav((dir / "noisy.wav").string(), noisy);

    json j = {{"fs", spec.fs},
              {"duration", spec.duration},
              {"period", spec.period},
              {"transient-len", spec.transient_len},
              {"tones", spec.tones},
              {"amp-low", spec.amp_low},
              {"amp-high", spec.amp_high},
              {"sigma", spec.noise_sigma},
              {"jitter", spec.onset_jitter},
              {"seed", spec.seed},
              {"samples", spec.num_samples()}};
    write_json((dir / "spec.json").string(), j);
    std::cout << "wrote " << (dir / "noisy.csv").string() << " (" << spec.num_samples()
              << " samples at " << spec.fs << " Hz)\n";
    return 0;
}

struct ExtractOptions {
    std::string input;
    double fs_override = 0.0;
    int R = 32;
    int L = 256;
    double fault_freq = 0.0;
    double period = 0.0;
    int M = 4;
    int K1 = 2;
    int N1 = 2;
    std::string penalty = "atan";
    std::string a = "auto";
    double eps = 1e-8;
    std::string lambda = "auto";
    double sigma = -1.0;
    double mu = 1.0;
    int max_iters = 200;
    double tol = 1e-8;
    bool no_continuation = false;
    std::string out_dir;
};

int cmd_extract(const ExtractOptions& opt) {
    auto y = salma::io::read_signal(opt.input);
    if (opt.fs_override > 0.0) y.fs = opt.fs_override;
    if (y.fs <= 0.0) {
        std::cerr << "error: sample rate unknown; pass --fs\n";
        return kExitConfigError;
    }

    if ((opt.fault_freq > 0.0) == (opt.period > 0.0)) {
        std::cerr << "error: give exactly one of --fault-freq and --period\n";
        return kExitConfigError;
    }
    const double period_s = opt.period > 0.0 ? opt.period : 1.0 / opt.fault_freq;

    const auto plan =
        salma::StftPlan::create(opt.R, opt.L, static_cast<int>(y.size()));
    const auto mask_params =
        salma::MaskParams::from_period(period_s, y.fs, opt.R, opt.K1, opt.N1, opt.M);
    const auto B = salma::build_mask(mask_params);

    double sigma = opt.sigma;
    double lambda;
    if (opt.lambda == "auto") {
        if (sigma < 0.0) sigma = salma::estimate_noise(y);
        lambda = salma::select_lambda(opt.R, opt.L, opt.M, sigma);
    } else {
        lambda = std::stod(opt.lambda);
    }
    if (lambda <= 0.0) {
        std::cerr << "error: resolved lambda must be > 0 (got " << lambda << ")\n";
        return kExitConfigError;
    }

    salma::PenaltySpec spec;
    spec.family = salma::penalty_family_from_string(opt.penalty);
    spec.eps = opt.eps;

    salma::SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.mu = opt.mu;
    cfg.max_iters = opt.max_iters;
    cfg.tol = opt.tol;
    if (spec.family == salma::PenaltyFamily::Abs) {
        cfg.continuation = {0.0};
    } else {
        const double a_target = opt.a == "auto"
                                    ? salma::max_nonconvexity(lambda, B)
                                    : std::stod(opt.a);
        cfg.continuation = opt.no_continuation
                               ? std::vector<double>{a_target}
                               : salma::continuation_schedule(a_target);
    }

    const auto result = salma::solve(y, plan, B, spec, cfg);

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    salma::io::write_signal_csv((dir / "xhat.csv").string(), result.xhat);
    salma::io::write_magnitude_csv((dir / "coeffs_mag.csv").string(), result.coeffs, y.fs);
    write_history_csv((dir / "history.csv").string(), result.history);

    json manifest = {{"input", opt.input},
                     {"fs", y.fs},
                     {"R", opt.R},
                     {"L", opt.L},
                     {"period", period_s},
                     {"M", opt.M},
                     {"K1", opt.K1},
                     {"N1", opt.N1},
                     {"N0", mask_params.N0},
                     {"mask-ones", B.ones_count},
                     {"penalty", opt.penalty},
                     {"a", opt.a},
                     {"a-schedule", cfg.continuation},
                     {"eps", opt.eps},
                     {"lambda", lambda},
                     {"mu", opt.mu},
                     {"max-iters", opt.max_iters},
                     {"tol", opt.tol},
                     {"no-continuation", opt.no_continuation},
                     {"iterations", result.history.size()},
                     {"converged", result.converged},
                     {"final-residual", result.final_residual}};
    if (sigma >= 0.0) manifest["sigma"] = sigma;
    write_json((dir / "run-manifest.json").string(), manifest);

    std::cout << (result.converged ? "converged" : "NOT converged") << " after "
              << result.history.size() << " iterations, final residual "
              << result.final_residual << "\n";
    return result.converged ? 0 : kExitNotConverged;
}

struct AnalyzeOptions {
    std::string xhat;
    std::string coeffs;
    int lpf_len = 0;  // 0 = auto
    int top_k = 5;
    double fault_freq = 0.0;
    std::string out_dir;
};

int cmd_analyze(const AnalyzeOptions& opt) {
    if (opt.xhat.empty() && opt.coeffs.empty()) {
        std::cerr << "error: give --xhat and/or --coeffs\n";
        return kExitConfigError;
    }
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    json peaks = json::object();

    if (!opt.coeffs.empty()) {
        const auto grid = salma::io::read_magnitude_csv(opt.coeffs);
        const auto c = grid_to_spectrogram(grid);

        const auto indicator = salma::frequency_indicator(c, grid.fs);
        salma::io::write_profile_csv((dir / "freq_indicator.csv").string(), indicator);
        peaks["frequency_indicator"] =
            peaks_to_json(salma::top_peaks(indicator, opt.top_k), "hz");

        int lpf = opt.lpf_len;
        if (lpf <= 0) {
            // Default: about one fault period of frames, odd.
            lpf = opt.fault_freq > 0.0
                      ? static_cast<int>(std::lround(grid.fs / opt.fault_freq / grid.hop))
                      : 9;
            if (lpf < 1) lpf = 1;
            if (lpf % 2 == 0) ++lpf;
        }
        const auto profile = salma::smoothed_profile(c, lpf, grid.fs);
        salma::io::write_profile_csv((dir / "profile.csv").string(), profile);
    }

    if (!opt.xhat.empty()) {
        const auto x = salma::io::read_signal(opt.xhat);
        const auto env = salma::envelope_spectrum(x);
        salma::io::write_profile_csv((dir / "envelope_spectrum.csv").string(), env);
        peaks["envelope_spectrum"] = peaks_to_json(salma::top_peaks(env, opt.top_k), "hz");
    }

    write_json((dir / "peaks.json").string(), peaks);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic oscillatory transient extraction in the STFT domain"};
    app.require_subcommand(1);

    JsonDefaults defaults;
    try {
        defaults = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    std::string config_path;

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic transient train");
    salma::SimSpec spec;
    std::string sim_out = default_out_dir();
    defaults.apply("fs", spec.fs);
    defaults.apply("duration", spec.duration);
    defaults.apply("period", spec.period);
    defaults.apply("transient-len", spec.transient_len);
    defaults.apply("tones", spec.tones);
    defaults.apply("amp-low", spec.amp_low);
    defaults.apply("amp-high", spec.amp_high);
    defaults.apply("sigma", spec.noise_sigma);
    defaults.apply("jitter", spec.onset_jitter);
    defaults.apply("seed", spec.seed);
    defaults.apply("out-dir", sim_out);
    sim->add_option("--fs", spec.fs, "Sample rate, Hz");
    sim->add_option("--duration", spec.duration, "Signal length, s");
    sim->add_option("--period", spec.period, "Transient repetition period, s");
    sim->add_option("--transient-len", spec.transient_len, "Transient length, s");
    sim->add_option("--tones", spec.tones, "Oscillation frequencies, Hz");
    sim->add_option("--amp-low", spec.amp_low, "Low end of transient amplitudes");
    sim->add_option("--amp-high", spec.amp_high, "High end of transient amplitudes");
    sim->add_option("--sigma", spec.noise_sigma, "Noise standard deviation");
    sim->add_option("--jitter", spec.onset_jitter, "Onset jitter, s");
    sim->add_option("--seed", spec.seed, "RNG seed");
    sim->add_option("--out-dir", sim_out, "Output directory");

    // extract
    auto* ext = app.add_subcommand("extract", "Extract the transient component");
    ExtractOptions eo;
    eo.out_dir = default_out_dir();
    defaults.apply("input", eo.input);
    defaults.apply("fs", eo.fs_override);
    defaults.apply("R", eo.R);
    defaults.apply("L", eo.L);
    defaults.apply("fault-freq", eo.fault_freq);
    defaults.apply("period", eo.period);
    defaults.apply("M", eo.M);
    defaults.apply("K1", eo.K1);
    defaults.apply("N1", eo.N1);
    defaults.apply("penalty", eo.penalty);
    defaults.apply("a", eo.a);
    defaults.apply("eps", eo.eps);
    defaults.apply("lambda", eo.lambda);
    defaults.apply("sigma", eo.sigma);
    defaults.apply("mu", eo.mu);
    defaults.apply("max-iters", eo.max_iters);
    defaults.apply("tol", eo.tol);
    defaults.apply("no-continuation", eo.no_continuation);
    defaults.apply("out-dir", eo.out_dir);
    ext->add_option("--input", eo.input, "Input signal (CSV or WAV)");
    ext->add_option("--fs", eo.fs_override, "Sample rate override, Hz");
    ext->add_option("--R", eo.R, "STFT window length, samples");
    ext->add_option("--L", eo.L, "FFT length per window");
    ext->add_option("--fault-freq", eo.fault_freq, "Fault characteristic frequency, Hz");
    ext->add_option("--period", eo.period, "Fault period, s");
    ext->add_option("--M", eo.M, "Periods spanned by the mask");
    ext->add_option("--K1", eo.K1, "Mask frequency span, bins");
    ext->add_option("--N1", eo.N1, "Mask ones-run length, frames");
    ext->add_option("--penalty", eo.penalty, "Penalty family: abs|log|rat|atan");
    ext->add_option("--a", eo.a, "Non-convexity parameter or 'auto'");
    ext->add_option("--eps", eo.eps, "Penalty smoothing constant");
    ext->add_option("--lambda", eo.lambda, "Regularization weight or 'auto'");
    ext->add_option("--sigma", eo.sigma, "Noise level (for auto lambda)");
    ext->add_option("--mu", eo.mu, "Penalty parameter of the splitting");
    ext->add_option("--max-iters", eo.max_iters, "Iteration limit per stage");
    ext->add_option("--tol", eo.tol, "Relative-change stopping threshold");
    ext->add_flag("--no-continuation", eo.no_continuation,
                  "Single non-convex stage instead of the schedule");
    ext->add_option("--out-dir", eo.out_dir, "Output directory");

    // analyze
    auto* ana = app.add_subcommand("analyze", "Diagnostics on extraction outputs");
    AnalyzeOptions ao;
    ao.out_dir = default_out_dir();
    defaults.apply("xhat", ao.xhat);
    defaults.apply("coeffs", ao.coeffs);
    defaults.apply("lpf-len", ao.lpf_len);
    defaults.apply("top-k", ao.top_k);
    defaults.apply("fault-freq", ao.fault_freq);
    defaults.apply("out-dir", ao.out_dir);
    ana->add_option("--xhat", ao.xhat, "Extracted signal (CSV or WAV)");
    ana->add_option("--coeffs", ao.coeffs, "Coefficient magnitude grid CSV");
    ana->add_option("--lpf-len", ao.lpf_len, "Smoothing length, frames (odd; 0 = auto)");
    ana->add_option("--top-k", ao.top_k, "Number of peaks to report");
    ana->add_option("--fault-freq", ao.fault_freq, "Fault frequency for auto smoothing, Hz");
    ana->add_option("--out-dir", ao.out_dir, "Output directory");

    // estimate-noise
    auto* est = app.add_subcommand("estimate-noise", "Robust noise level of a signal");
    std::string est_input;
    defaults.apply("input", est_input);
    est->add_option("--input", est_input, "Input signal (CSV or WAV)");

    for (auto* s : {sim, ext, ana, est})
        s->add_option("--config", config_path, "JSON config file (flags win on conflict)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        if (sim->parsed()) return cmd_simulate(spec, sim_out);
        if (ext->parsed()) return cmd_extract(eo);
        if (ana->parsed()) return cmd_analyze(ao);
        if (est->parsed()) {
            if (est_input.empty()) {
                std::cerr << "error: --input is required\n";
                return kExitConfigError;
            }
            std::cout << salma::io::format_double(
                             salma::estimate_noise(salma::io::read_signal(est_input)))
                      << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return 0;
}
