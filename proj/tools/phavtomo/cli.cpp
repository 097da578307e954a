#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <numbers>
#include <functional>
#include <optional>
#include <sstream>

#include "phav/bosonic_states.hpp"
#include "phav/csv_io.hpp"
#include "phav/error.hpp"
#include "phav/experiment_config.hpp"
#include "phav/fock_numerics.hpp"
#include "phav/fock_oracle.hpp"
#include "phav/phav_sampling.hpp"
#include "phav/pipeline.hpp"
#include "phav/raman_model.hpp"
#include "phav/rng.hpp"
#include "phav/spectrum.hpp"
#include "phav/sweeps.hpp"
#include "phav/tomography.hpp"

namespace phav::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

json metadata(const std::string& subcommand, const json& options, std::optional<std::uint64_t> seed) {
    json m = {{"tool", "phavtomo"}, {"version", PHAV_VERSION}, {"subcommand", subcommand}, {"options", options}};
    if (seed) {
        m["seed"] = *seed;
        m["rng"] = std::string(kRngAlgorithm);
    }
    return m;
}

void write_meta(const fs::path& out, const json& meta) {
    write_text_atomic(fs::path(out.string() + ".meta.json"), meta.dump(2) + "\n");
}

std::uint64_t resolve_seed(std::optional<std::uint64_t>& seed, Streams& io) {
    if (!seed) {
        seed = generate_seed();
        io.err << "seed: " << *seed << " (generated)\n";
    }
    return *seed;
}

// Prints JSON to `out` and, when a path is given, writes it there too.
void emit_json(const json& j, const std::string& path, Streams& io, const json& meta) {
    if (path.empty()) {
        io.out << j.dump(2) << "\n";
        return;
    }
    json doc = j;
    doc["metadata"] = meta;
    write_text_atomic(path, doc.dump(2) + "\n");
    write_meta(path, meta);
}

// --- shared option groups -------------------------------------------------

struct StrategyOptions {
    std::string name = "uniform";
    int k = 4;
    double rate = 0.0;
    double quadratic = 0.0;
    double jitter_sigma = 0.0;
    double jump_prob = 0.0;
    double jump_scale = std::numbers::pi / 2.0;

    void add(CLI::App* app) {
        app->add_option("--strategy", name, "phase strategy: uniform | finite | linear | drifting | jittered")
            ->capture_default_str();
        app->add_option("--k", k, "number of equispaced phases for --strategy finite")->capture_default_str();
        app->add_option("--rate", rate, "phase scan rate in rad/pulse (linear, drifting, jittered)");
        app->add_option("--quadratic", quadratic, "drifting-scan quadratic coefficient in rad/pulse^2");
        app->add_option("--jitter-sigma", jitter_sigma, "Gaussian phase jitter in rad (jittered)");
        app->add_option("--jump-prob", jump_prob, "per-pulse probability of a phase jump (jittered)");
        app->add_option("--jump-scale", jump_scale, "phase jump size in rad (jittered)")->capture_default_str();
    }

    PhaseStrategy build() const {
        if (name == "uniform") return UniformRandom{};
        if (name == "finite") return FiniteSet{k};
        if (name == "linear") return LinearScan{rate};
        if (name == "drifting") return DriftingScan{rate, quadratic};
        if (name == "jittered") return JitteredScan{rate, jitter_sigma, jump_prob, jump_scale};
        throw ArgumentError("unknown strategy '" + name + "'");
    }
};

struct StateOptions {
    std::string kind = "coherent";
    double beta_re = 2.0;
    double beta_im = 0.0;
    double n_th = 1.0;
    double zeta_re = -0.2;
    double zeta_im = 0.0;
    double freq_thz = 4.0;
    std::string order = "displace_after_squeeze";

    void add(CLI::App* app) {
        app->add_option("--state", kind, "phonon state: coherent | thermal | squeezed")->capture_default_str();
        app->add_option("--beta", beta_re, "phonon displacement, real part (dimensionless)")->capture_default_str();
        app->add_option("--beta-im", beta_im, "phonon displacement, imaginary part")->capture_default_str();
        app->add_option("--n-th", n_th, "thermal occupation in phonons (thermal only)")->capture_default_str();
        app->add_option("--zeta", zeta_re, "squeezing parameter, real part (squeezed only)")->capture_default_str();
        app->add_option("--zeta-im", zeta_im, "squeezing parameter, imaginary part")->capture_default_str();
        app->add_option("--freq-thz", freq_thz, "phonon frequency Omega/2pi in THz")->capture_default_str();
        app->add_option("--order", order, "displace_after_squeeze | squeeze_after_displace")->capture_default_str();
    }

    PhononState build() const {
        const double omega = kTwoPi * freq_thz;
        const complex beta{beta_re, beta_im};
        PhononState s;
        switch (parse_state_kind(kind)) {
            case StateKind::Coherent: s = PhononState::coherent(beta, omega); break;
            case StateKind::Thermal: s = PhononState::thermal(n_th, beta, omega); break;
            case StateKind::Squeezed: {
                OperatorOrder o = OperatorOrder::DisplaceAfterSqueeze;
                if (order == "squeeze_after_displace") o = OperatorOrder::SqueezeAfterDisplace;
                else if (order != "displace_after_squeeze") throw ArgumentError("unknown --order '" + order + "'");
                s = PhononState::squeezed(complex{zeta_re, zeta_im}, beta, omega, o);
                break;
            }
        }
        s.validate();
        return s;
    }

    json echo() const {
        return {{"state", kind}, {"beta_re", beta_re}, {"beta_im", beta_im}, {"n_th", n_th},
                {"zeta_re", zeta_re}, {"zeta_im", zeta_im}, {"freq_thz", freq_thz}, {"order", order}};
    }
};

struct RamanOptions {
    double alpha_y_sq = 2.9;
    double ratio = 100.0;
    double m = 1e6;
    std::optional<double> tau_chi;
    double modulation = 0.05;
    std::string form = "appendix";
    double p2 = 0.002;
    double p1 = 0.0;
    double p0 = 0.0;

    void add(CLI::App* app) {
        app->add_option("--alpha-y-sq", alpha_y_sq, "residual-polarization photons/pulse")->capture_default_str();
        app->add_option("--ratio", ratio, "intensity ratio alpha_x^2/alpha_y^2")->capture_default_str();
        app->add_option("--m", m, "number of probed oscillators M")->capture_default_str();
        app->add_option("--tau-chi", tau_chi, "coupling tau*chi (dimensionless); calibrated from --modulation if absent");
        app->add_option("--modulation", modulation, "peak-to-peak mean modulation as a fraction of alpha_y^2")
            ->capture_default_str();
        app->add_option("--form", form, "appendix | main_text")->capture_default_str();
        app->add_option("--p2", p2, "detector excess noise coefficient per photon^2")->capture_default_str();
        app->add_option("--p1", p1, "detector excess noise coefficient per photon")->capture_default_str();
        app->add_option("--p0", p0, "detector excess noise constant")->capture_default_str();
    }

    RamanParams build(const PhononState& state) const {
        const RamanForm f = parse_raman_form(form);
        double t = 0.0;
        if (tau_chi) {
            t = *tau_chi;
        } else {
            require_argument(std::abs(state.beta) > 0.0, "--tau-chi is required when the displacement is zero");
            t = calibrate_coupling(std::abs(state.beta), std::sqrt(ratio * alpha_y_sq), std::sqrt(alpha_y_sq), m,
                                   modulation, f);
        }
        return RamanParams::from_photons(alpha_y_sq, ratio, t, m, f);
    }

    NoiseModel noise() const { return NoiseModel{p2, p1, p0}; }

    json echo(const RamanParams& p) const {
        return {{"alpha_y_sq", alpha_y_sq}, {"ratio", ratio}, {"m_oscillators", m}, {"tau_chi", p.tau_chi},
                {"tau_chi_calibrated", !tau_chi.has_value()}, {"modulation", modulation}, {"form", form},
                {"p2", p2}, {"p1", p1}, {"p0", p0}};
    }
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ArgumentError("cannot parse '" + item + "' as a number");
        }
    }
    return v;
}

json spectrum_peak(const std::optional<double>& f) { return f ? json(*f) : json(nullptr); }

// --- subcommands ------------------------------------------------------------

struct Commands {
    explicit Commands(Streams s) : io(s) {}

    Streams io;
    std::function<void()> action;

    // sample
    std::optional<double> s_alpha_sq;
    std::optional<double> s_alpha;
    std::size_t s_n = 100000;
    std::optional<std::uint64_t> s_seed;
    StrategyOptions s_strategy;
    std::string s_out;
    std::string s_hist_out;
    double s_bin = 0.1;

    // reconstruct
    std::string r_in;
    std::string r_hist;
    double r_bin = 0.1;
    int r_nmax = kMaxPhotonNumber;
    int r_iters = 100;
    double r_early = 1e-8;
    std::string r_out;
    std::string r_report;

    // stats
    std::string st_in;
    std::optional<double> st_poisson;
    std::optional<double> st_energy;
    std::optional<double> st_temperature;
    std::optional<double> st_occupation;
    std::string st_out;

    // raman-trace
    StateOptions rt_state;
    RamanOptions rt_raman;
    double rt_start = 0.0;
    double rt_stop = 2.5;
    double rt_step = 0.0625;
    bool rt_excess = false;
    bool rt_no_equilibrium = false;
    int rt_oracle_dim = 0;
    std::string rt_out;

    // fft
    std::string f_in;
    std::string f_column = "mean_n";
    bool f_positive = false;
    std::string f_out;

    // fit-noise
    std::string n_in;
    std::string n_out;

    // phase-compare
    double pc_alpha_sq = 13.8;
    std::size_t pc_n = 100000;
    std::optional<std::uint64_t> pc_seed;
    StrategyOptions pc_strategy;
    double pc_bin = 0.1;
    int pc_lags = 10;
    std::string pc_out;

    // wigner
    StateOptions w_state;
    std::optional<double> w_phav_alpha_sq;
    double w_t = 0.0;
    double w_min = -6.0;
    double w_max = 6.0;
    double w_step = 0.1;
    std::string w_out;

    // sweep
    std::string sw_axis = "probe_photons";
    std::string sw_grid;
    StateOptions sw_state;
    RamanOptions sw_raman;
    int sw_points = 128;
    std::string sw_out;

    // pipeline
    std::string p_config;
    std::string p_out = "pipeline_out";
    std::optional<std::uint64_t> p_seed;
    int p_threads = 0;

    void sample() {
        if (s_alpha_sq && s_alpha) throw ArgumentError("give only one of --alpha-sq and --alpha");
        if (!s_alpha_sq && !s_alpha) throw ArgumentError("one of --alpha-sq or --alpha is required");
        const double alpha = s_alpha ? *s_alpha : std::sqrt(std::max(0.0, *s_alpha_sq));
        if (s_alpha_sq) require_argument(*s_alpha_sq >= 0.0, "--alpha-sq must be >= 0");
        const std::uint64_t seed = resolve_seed(s_seed, io);
        const PhaseStrategy strategy = s_strategy.build();
        const QuadratureDataset data = sample_with_strategy(alpha, s_n, strategy, seed);
        const json meta = metadata("sample",
                                   {{"alpha", alpha}, {"alpha_sq", alpha * alpha}, {"n", s_n},
                                    {"strategy", describe(strategy)}, {"bin", s_bin}},
                                   seed);
        write_dataset(s_out, data.samples);
        write_meta(s_out, meta);
        if (!s_hist_out.empty()) {
            write_histogram(s_hist_out, histogram(data.samples, s_bin));
            write_meta(s_hist_out, meta);
        }
    }

    void reconstruct_cmd() {
        if (r_in.empty() == r_hist.empty()) throw ArgumentError("give exactly one of --in (dataset) or --hist");
        const QuadratureHistogram hist =
            r_in.empty() ? read_histogram(r_hist) : histogram(read_dataset(r_in), r_bin);
        // Input problems outrank a missing --out.
        if (r_out.empty()) throw ArgumentError("--out is required");
        TomographyConfig cfg{.n_max = r_nmax, .iterations = r_iters, .early_stop_delta = r_early};
        const ReconstructionReport rep = reconstruct(hist, cfg);
        const DistributionStats st = distribution_stats(rep.distribution);
        if (rep.support_warning) {
            io.err << "warning: histogram mass beyond the largest basis state's turning point; the tail is underfit\n";
        }
        const json meta = metadata("reconstruct",
                                   {{"in", r_in.empty() ? r_hist : r_in}, {"bin", r_bin}, {"n_max", r_nmax},
                                    {"iterations", r_iters}, {"early_stop_delta", r_early}},
                                   std::nullopt);
        write_fock(r_out, rep.distribution);
        write_meta(r_out, meta);
        json report = {{"distribution", std::vector<double>(rep.distribution.probs().begin(), rep.distribution.probs().end())},
                       {"log_likelihood", rep.log_likelihood_per_iteration},
                       {"iterations_run", rep.iterations_run},
                       {"converged", rep.converged},
                       {"support_warning", rep.support_warning},
                       {"mean", st.mean},
                       {"variance", st.variance},
                       {"mandel_q", st.mandel_q ? json(*st.mandel_q) : json(nullptr)},
                       {"metadata", meta}};
        if (!r_report.empty()) write_text_atomic(r_report, report.dump(2) + "\n");
    }

    void stats() {
        json result;
        if (!st_in.empty()) {
            const FockDistribution d = read_fock(st_in);
            const DistributionStats s = distribution_stats(d);
            result["mean"] = s.mean;
            result["variance"] = s.variance;
            result["mandel_q"] = s.mandel_q ? json(*s.mandel_q) : json(nullptr);
            result["g2"] = s.mandel_q ? json(g2_from_q(*s.mandel_q, s.mean)) : json(nullptr);
            if (st_poisson) result["tv_to_poisson"] = total_variation(d, poisson_distribution(*st_poisson, d.n_max()));
        }
        if (st_energy && st_temperature) {
            result["occupation"] = bose_einstein_occupation(*st_energy, *st_temperature);
            result["note"] =
                "occupation from 1/(exp(E/kT) - 1); for 16.5 meV at 300 K this is about 1.12, not the 0.7 sometimes quoted "
                "for the 4 THz mode";
        }
        if (st_energy && st_occupation) result["effective_temperature_k"] = effective_temperature(*st_occupation, *st_energy);
        if (result.empty()) {
            throw ArgumentError("nothing to compute: give --in, or --energy-mev with --temperature-k or --occupation");
        }
        const json meta = metadata("stats", {{"in", st_in}}, std::nullopt);
        emit_json(result, st_out, io, meta);
    }

    void raman_trace() {
        const PhononState state = rt_state.build();
        const RamanParams params = rt_raman.build(state);
        const std::vector<double> delays = DelayGrid{rt_start, rt_stop, rt_step}.values();
        PumpProbeTrace trace;
        if (rt_oracle_dim > 0) {
            const DensityMatrix rho = build_fock_density(state, rt_oracle_dim);
            const DensityMatrix rho_eq = build_fock_density(equilibrium_state(state), rt_oracle_dim);
            trace = simulate_trace(
                [&](double t) {
                    if (!rt_no_equilibrium && t < 0.0) return moments_from_density(rho_eq, state.omega, 0.0);
                    return moments_from_density(rho, state.omega, t);
                },
                params, rt_raman.noise(), delays, rt_excess);
        } else {
            trace = simulate_trace(state, params, rt_raman.noise(), delays,
                                   TraceOptions{.include_detector_excess = rt_excess,
                                                .equilibrium_before_zero = !rt_no_equilibrium});
        }
        json opts = rt_state.echo();
        opts.update(rt_raman.echo(params));
        opts.update(json{{"start_ps", rt_start}, {"stop_ps", rt_stop}, {"step_ps", rt_step},
                         {"include_detector_excess", rt_excess}, {"equilibrium_before_zero", !rt_no_equilibrium},
                         {"oracle_dim", rt_oracle_dim}});
        write_trace(rt_out, trace);
        write_meta(rt_out, metadata("raman-trace", opts, std::nullopt));
    }

    void fft() {
        const PumpProbeTrace trace = read_trace(f_in);
        std::vector<double> values;
        if (f_column == "mean_n") values = trace.mean_n;
        else if (f_column == "var_n") values = trace.var_n;
        else if (f_column == "q") values = trace.q;
        else if (f_column == "q_det") values = trace.q_det;
        else if (f_column == "excess") {
            for (std::size_t i = 0; i < trace.size(); ++i) values.push_back(trace.var_n[i] - trace.mean_n[i]);
        } else {
            throw ArgumentError("unknown --column '" + f_column + "'");
        }
        const AmplitudeSpectrum spec = amplitude_spectrum(values, trace.delays, f_positive);
        const auto peak = dominant_frequency(values, trace.delays, f_positive);
        const json meta = metadata("fft", {{"in", f_in}, {"column", f_column}, {"positive_only", f_positive}}, std::nullopt);
        if (!f_out.empty()) {
            write_spectrum(f_out, spec);
            write_meta(f_out, meta);
        }
        io.out << json{{"dominant_frequency_thz", spectrum_peak(peak)}}.dump() << "\n";
    }

    void fit_noise() {
        const auto points = read_noise_points(n_in);
        const NoiseFit fit = fit_excess_noise(points);
        const json result = {{"p2", fit.model.p2},
                             {"p1", fit.model.p1},
                             {"p0", fit.model.p0},
                             {"std_errors", {{"p2", fit.std_errors[0]}, {"p1", fit.std_errors[1]}, {"p0", fit.std_errors[2]}}},
                             {"residual_norm", fit.residual_norm},
                             {"points", points.size()}};
        emit_json(result, n_out, io, metadata("fit-noise", {{"in", n_in}}, std::nullopt));
    }

    void phase_compare() {
        require_argument(pc_alpha_sq >= 0.0, "--alpha-sq must be >= 0");
        const std::uint64_t seed = resolve_seed(pc_seed, io);
        const double alpha = std::sqrt(pc_alpha_sq);
        const PhaseStrategy strategy = pc_strategy.build();
        // Independent streams of the same root for the two datasets.
        const QuadratureDataset ref = sample_with_strategy(alpha, pc_n, UniformRandom{}, derive_stream_key(seed, 1));
        const QuadratureDataset test = sample_with_strategy(alpha, pc_n, strategy, derive_stream_key(seed, 2));
        const double ks = ks_distance(histogram(ref.samples, pc_bin), histogram(test.samples, pc_bin));
        const double null_scale = ks_null_scale(pc_n, pc_n);
        const json result = {{"strategy", describe(strategy)},
                             {"ks_distance", ks},
                             {"ks_null_scale", null_scale},
                             {"artifact_detected", ks > 3.0 * null_scale},
                             {"lag_correlation", lag_correlation(test.samples, pc_lags)},
                             {"lag_bound", 3.0 / std::sqrt(static_cast<double>(pc_n))}};
        emit_json(result, pc_out, io,
                  metadata("phase-compare", {{"alpha_sq", pc_alpha_sq}, {"n", pc_n}, {"bin", pc_bin}, {"lags", pc_lags}},
                           seed));
    }

    void wigner_cmd() {
        const std::vector<double> axis = linspace_step(w_min, w_max, w_step);
        WignerGrid grid;
        json opts = {{"t_ps", w_t}, {"min", w_min}, {"max", w_max}, {"step", w_step}};
        if (w_phav_alpha_sq) {
            require_argument(*w_phav_alpha_sq >= 0.0, "--phav-alpha-sq must be >= 0");
            grid = phav_wigner(std::sqrt(*w_phav_alpha_sq), axis, axis);
            opts["phav_alpha_sq"] = *w_phav_alpha_sq;
        } else {
            grid = wigner(w_state.build(), w_t, axis, axis);
            opts.update(w_state.echo());
        }
        write_wigner(w_out, grid);
        write_meta(w_out, metadata("wigner", opts, std::nullopt));
    }

    void sweep() {
        const SweepAxis axis = parse_sweep_axis(sw_axis);
        const std::vector<double> grid = parse_list(sw_grid);
        const PhononState state = sw_state.build();
        const RamanParams params = sw_raman.build(state);
        const auto points = sweep_max_q(axis, grid, SweepBase{state, params, sw_raman.noise()}, sw_points);
        json opts = sw_state.echo();
        opts.update(sw_raman.echo(params));
        opts.update(json{{"axis", to_string(axis)}, {"grid", grid}, {"points_per_period", sw_points}});
        write_sweep(sw_out, points);
        write_meta(sw_out, metadata("sweep", opts, std::nullopt));
    }

    void pipeline() {
        ExperimentConfig cfg = p_config.empty() ? ExperimentConfig{} : load_experiment_config(p_config);
        if (p_seed) cfg.seed = *p_seed;
        if (p_threads > 0) cfg.threads = p_threads;
        const ExperimentResult result = run_experiment(cfg);
        write_result_directory(result, p_out);
        write_text_atomic(fs::path(p_out) / "meta.json",
                          metadata("pipeline", {{"config", p_config}, {"config_echo", cfg.to_json()}}, cfg.seed).dump(2) + "\n");
        const auto peak = result.metadata["dominant_frequency_thz"];
        io.out << json{{"out", p_out}, {"dominant_frequency_thz", peak}}.dump() << "\n";
    }
};

const std::string kFooter =
    "Units: quadratures in quadrature units (X = (a + a^dagger)/sqrt(2), vacuum variance 1/2); photon numbers in "
    "photons/pulse; delays in ps; frequencies in THz; energies in meV; temperatures in K.\n"
    "Exit codes: 0 ok, 1 usage error, 2 invalid input data, 3 numerical failure. PHAV_THREADS sets the default "
    "thread count.";

void build_app(CLI::App& app, Commands& c) {
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(PHAV_VERSION));
    app.footer(kFooter);

    auto* sample = app.add_subcommand("sample", "Generate phase-averaged quadrature samples (pulse_index,x CSV)");
    sample->add_option("--alpha-sq", c.s_alpha_sq, "mean photon number |alpha|^2 in photons/pulse");
    sample->add_option("--alpha", c.s_alpha, "amplitude |alpha| in sqrt(photons)");
    sample->add_option("--n", c.s_n, "number of pulses")->capture_default_str();
    sample->add_option("--seed", c.s_seed, "RNG seed (generated and printed when absent)");
    c.s_strategy.add(sample);
    sample->add_option("--out", c.s_out, "output dataset CSV")->required();
    sample->add_option("--hist-out", c.s_hist_out, "optional histogram CSV (bin_center,density)");
    sample->add_option("--bin", c.s_bin, "histogram bin width in quadrature units")->capture_default_str();
    sample->callback([&c] { c.action = [&c] { c.sample(); }; });

    auto* rec = app.add_subcommand("reconstruct", "Maximum-likelihood photon-number reconstruction (n,p CSV)");
    rec->add_option("--in", c.r_in, "input dataset CSV (pulse_index,x)");
    rec->add_option("--hist", c.r_hist, "input histogram CSV (bin_center,density)");
    rec->add_option("--bin", c.r_bin, "bin width in quadrature units when histogramming --in")->capture_default_str();
    rec->add_option("--nmax", c.r_nmax, "Fock truncation N_max (photons, <= 150)")->capture_default_str();
    rec->add_option("--iters", c.r_iters, "maximum iterations")->capture_default_str();
    rec->add_option("--early-stop", c.r_early, "stop when max |delta p| < this; 0 runs all iterations")
        ->capture_default_str();
    rec->add_option("--out", c.r_out, "output Fock distribution CSV (required)");
    rec->add_option("--report", c.r_report, "optional JSON report with the log-likelihood trace");
    rec->callback([&c] { c.action = [&c] { c.reconstruct_cmd(); }; });

    auto* stats = app.add_subcommand("stats", "Photon statistics of a Fock CSV and Bose-Einstein utilities (JSON)");
    stats->add_option("--in", c.st_in, "Fock distribution CSV (n,p)");
    stats->add_option("--poisson", c.st_poisson, "report TV distance to Poisson with this mean (photons/pulse)");
    stats->add_option("--energy-mev", c.st_energy, "mode energy in meV");
    stats->add_option("--temperature-k", c.st_temperature, "temperature in K (gives the occupation)");
    stats->add_option("--occupation", c.st_occupation, "occupation in phonons (gives the effective temperature in K)");
    stats->add_option("--out", c.st_out, "write JSON here instead of standard output");
    stats->callback([&c] { c.action = [&c] { c.stats(); }; });

    auto* rt = app.add_subcommand("raman-trace", "Closed-form pump-probe photon statistics (trace CSV)");
    c.rt_state.add(rt);
    c.rt_raman.add(rt);
    rt->add_option("--start", c.rt_start, "first delay in ps")->capture_default_str();
    rt->add_option("--stop", c.rt_stop, "last delay in ps")->capture_default_str();
    rt->add_option("--step", c.rt_step, "delay step in ps")->capture_default_str();
    rt->add_flag("--include-excess", c.rt_excess, "add detector excess noise to the variance");
    rt->add_flag("--no-equilibrium", c.rt_no_equilibrium, "evaluate the pumped state at negative delays too");
    rt->add_option("--oracle-dim", c.rt_oracle_dim, "use the truncated-Fock oracle with this dimension (0 = closed form)")
        ->capture_default_str();
    rt->add_option("--out", c.rt_out, "output trace CSV")->required();
    rt->callback([&c] { c.action = [&c] { c.raman_trace(); }; });

    auto* fft = app.add_subcommand("fft", "Spectrum of a trace column (freq_thz,magnitude CSV)");
    fft->add_option("--in", c.f_in, "input trace CSV")->required();
    fft->add_option("--column", c.f_column, "mean_n | var_n | q | q_det | excess (var_n - mean_n)")->capture_default_str();
    fft->add_flag("--positive-only", c.f_positive, "use delays > 0 ps only");
    fft->add_option("--out", c.f_out, "output spectrum CSV");
    fft->callback([&c] { c.action = [&c] { c.fft(); }; });

    auto* fit = app.add_subcommand("fit-noise", "Quadratic excess-noise fit of (mean,variance) points (JSON)");
    fit->add_option("--in", c.n_in, "input CSV with header mean,variance (photons, photons^2)")->required();
    fit->add_option("--out", c.n_out, "write JSON here instead of standard output");
    fit->callback([&c] { c.action = [&c] { c.fit_noise(); }; });

    auto* pc = app.add_subcommand("phase-compare", "KS and lag-correlation diagnostics of a phase strategy (JSON)");
    pc->add_option("--alpha-sq", c.pc_alpha_sq, "mean photon number in photons/pulse")->capture_default_str();
    pc->add_option("--n", c.pc_n, "pulses per dataset")->capture_default_str();
    pc->add_option("--seed", c.pc_seed, "RNG seed (generated and printed when absent)");
    c.pc_strategy.add(pc);
    pc->add_option("--bin", c.pc_bin, "histogram bin width in quadrature units")->capture_default_str();
    pc->add_option("--lags", c.pc_lags, "largest lag in pulses")->capture_default_str();
    pc->add_option("--out", c.pc_out, "write JSON here instead of standard output");
    pc->callback([&c] { c.action = [&c] { c.phase_compare(); }; });

    auto* w = app.add_subcommand("wigner", "Wigner function on a square grid (x,y,w CSV)");
    c.w_state.add(w);
    w->add_option("--phav-alpha-sq", c.w_phav_alpha_sq, "phase-averaged coherent state with this photons/pulse instead");
    w->add_option("--t", c.w_t, "time in ps")->capture_default_str();
    w->add_option("--min", c.w_min, "lower grid bound in quadrature units")->capture_default_str();
    w->add_option("--max", c.w_max, "upper grid bound in quadrature units")->capture_default_str();
    w->add_option("--grid-step", c.w_step, "grid spacing in quadrature units")->capture_default_str();
    w->add_option("--out", c.w_out, "output CSV")->required();
    w->callback([&c] { c.action = [&c] { c.wigner_cmd(); }; });

    auto* sw = app.add_subcommand("sweep", "Max Mandel Q over a phonon period along one parameter (sweep CSV)");
    sw->add_option("--axis", c.sw_axis,
                   "probe_photons (alpha_y^2, photons/pulse) | phonon_amplitude (|beta|) | oscillator_count (M)")
        ->capture_default_str();
    sw->add_option("--grid", c.sw_grid, "comma-separated sorted axis values")->required();
    c.sw_state.add(sw);
    c.sw_raman.add(sw);
    sw->add_option("--points", c.sw_points, "delays per phonon period (>= 64)")->capture_default_str();
    sw->add_option("--out", c.sw_out, "output sweep CSV")->required();
    sw->callback([&c] { c.action = [&c] { c.sweep(); }; });

    auto* pipe = app.add_subcommand("pipeline", "End-to-end synthetic pump-probe tomography run (result directory)");
    pipe->add_option("--config", c.p_config, "key = value configuration file (see configs/fig4d.toml)");
    pipe->add_option("--out", c.p_out, "output directory")->capture_default_str();
    pipe->add_option("--seed", c.p_seed, "override the configuration seed");
    pipe->add_option("--threads", c.p_threads, "worker threads (default PHAV_THREADS or hardware)");
    pipe->callback([&c] { c.action = [&c] { c.pipeline(); }; });

    for (auto* sub : app.get_subcommands({})) sub->footer(kFooter);
    pipe->footer("Configuration keys:\n" + experiment_config_schema() + "\n" + kFooter);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"phavtomo: phase-averaged homodyne tomography and Raman photon-statistics toolkit", "phavtomo"};
    Commands commands(Streams{out, err});
    build_app(app, commands);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }
    try {
        if (commands.action) commands.action();
        return kOk;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, out, err);
}

}  // namespace phav::cli
