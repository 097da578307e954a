#include "phav/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "phav/csv_io.hpp"
#include "phav/error.hpp"

namespace phav {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error captured on a worker, rethrown on the calling thread with its type kept.
struct TaskError {
    enum class Kind { None, Argument, Validation, Numerical, Other } kind = Kind::None;
    std::string message;

    [[noreturn]] void rethrow(const std::string& prefix) const {
        const std::string what = prefix + message;
        switch (kind) {
            case Kind::Argument: throw ArgumentError(what);
            case Kind::Validation: throw ValidationError(what);
            case Kind::Numerical: throw NumericalError(what);
            default: throw Error(what);
        }
    }
};

template <class F>
TaskError capture(F&& f) {
    try {
        f();
    } catch (const ArgumentError& e) {
        return {TaskError::Kind::Argument, e.what()};
    } catch (const ValidationError& e) {
        return {TaskError::Kind::Validation, e.what()};
    } catch (const NumericalError& e) {
        return {TaskError::Kind::Numerical, e.what()};
    } catch (const std::exception& e) {
        return {TaskError::Kind::Other, e.what()};
    }
    return {};
}

// Runs task(i) for i in [0, n) on `threads` workers. Each index is handled
// exactly once; the lowest failing index is reported.
template <class F>
void parallel_for(std::size_t n, int threads, const std::vector<double>& delays, F&& task) {
    std::vector<TaskError> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) errors[i] = capture([&] { task(i); });
    };
    const auto workers = static_cast<std::size_t>(std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(n, 1))));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i].kind != TaskError::Kind::None) {
            errors[i].rethrow("delay index " + std::to_string(i) + " (" + format_double(delays[i]) + " ps): ");
        }
    }
}

nlohmann::json report_json(const ReconstructionReport& r) {
    return {{"distribution", std::vector<double>(r.distribution.probs().begin(), r.distribution.probs().end())},
            {"log_likelihood", r.log_likelihood_per_iteration},
            {"iterations_run", r.iterations_run},
            {"converged", r.converged},
            {"support_warning", r.support_warning}};
}

std::optional<double> safe_dominant(const std::vector<double>& values, const std::vector<double>& delays) {
    try {
        return dominant_frequency(values, delays, true);
    } catch (const Error&) {
        return std::nullopt;
    }
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string to_string(ForwardModel model) {
    return model == ForwardModel::PoissonianPHAV ? "poissonian_phav" : "gamma_mixed_phav";
}

ForwardModel parse_forward_model(const std::string& name) {
    if (name == "poissonian_phav" || name == "PoissonianPHAV" || name == "poissonian") return ForwardModel::PoissonianPHAV;
    if (name == "gamma_mixed_phav" || name == "GammaMixedPHAV" || name == "gamma_mixed") return ForwardModel::GammaMixedPHAV;
    throw ArgumentError("unknown forward model '" + name + "' (expected poissonian_phav or gamma_mixed_phav)");
}

std::vector<double> DelayGrid::values() const {
    require_argument(step > 0.0 && std::isfinite(step), "delay step must be > 0 ps");
    require_argument(stop >= start, "delay stop must be >= start");
    // Index-based so the grid does not accumulate round-off.
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start + static_cast<double>(i) * step;
    return v;
}

RamanParams default_raman_params() {
    constexpr double alpha_y_sq = 2.9;
    constexpr double ratio = 100.0;
    constexpr double m = 1e6;
    const double tau_chi = calibrate_coupling(2.0, std::sqrt(ratio * alpha_y_sq), std::sqrt(alpha_y_sq), m);
    return RamanParams::from_photons(alpha_y_sq, ratio, tau_chi, m);
}

void ExperimentConfig::validate() const {
    phonon.validate();
    raman.validate();
    tomography.validate();
    (void)delays.values();
    require_argument(samples_per_delay >= 1000, "samples_per_delay must be >= 1000");
    require_argument(bin_width > 0.0 && std::isfinite(bin_width), "bin_width must be > 0");
    require_argument(threads >= 0, "threads must be >= 0");
}

nlohmann::json ExperimentConfig::to_json() const {
    return {
        {"phonon",
         {{"kind", to_string(phonon.kind)},
          {"beta_re", phonon.beta.real()},
          {"beta_im", phonon.beta.imag()},
          {"n_th", phonon.n_th},
          {"zeta_re", phonon.zeta.real()},
          {"zeta_im", phonon.zeta.imag()},
          {"frequency_thz", phonon.omega / kTwoPi},
          {"order", phonon.order == OperatorOrder::DisplaceAfterSqueeze ? "displace_after_squeeze"
                                                                         : "squeeze_after_displace"}}},
        {"raman",
         {{"tau_chi", raman.tau_chi},
          {"alpha_x", raman.alpha_x},
          {"alpha_y", raman.alpha_y},
          {"alpha_y_sq", raman.alpha_y * raman.alpha_y},
          {"m_oscillators", raman.m_oscillators},
          {"form", to_string(raman.form)}}},
        {"noise", {{"p2", noise.p2}, {"p1", noise.p1}, {"p0", noise.p0}}},
        {"delays", {{"start", delays.start}, {"stop", delays.stop}, {"step", delays.step}}},
        {"samples_per_delay", samples_per_delay},
        {"tomography",
         {{"n_max", tomography.n_max},
          {"iterations", tomography.iterations},
          {"early_stop_delta", tomography.early_stop_delta},
          {"quadrature_support", tomography.quadrature_support}}},
        {"bin_width", bin_width},
        {"seed", seed},
        {"forward_model", to_string(forward_model)},
        {"threads", threads},
    };
}

int default_thread_count() {
    if (const char* env = std::getenv("PHAV_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    }
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

std::vector<double> forward_sample(double mean_n, double var_n, std::size_t n, ForwardModel model,
                                   RandomStream& rng) {
    require_argument(mean_n > 0.0 && std::isfinite(mean_n), "forward model needs a mean photon number > 0");
    require_argument(n >= 1, "sample count must be >= 1");
    std::vector<double> out;
    const double excess = var_n - mean_n;
    if (model == ForwardModel::PoissonianPHAV || std::abs(excess) <= 1e-12 * mean_n) {
        sample_phav_into(std::sqrt(mean_n), n, rng, out);
        return out;
    }
    if (excess < 0.0) {
        throw ArgumentError("gamma-mixed forward model cannot produce sub-Poissonian light (variance " +
                            std::to_string(var_n) + " < mean " + std::to_string(mean_n) + ")");
    }
    const double shape = mean_n * mean_n / excess;
    const double scale = excess / mean_n;
    const double vacuum_sigma = std::sqrt(0.5);
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double intensity = rng.gamma(shape, scale);
        const double phi = rng.uniform(0.0, kTwoPi);
        out.push_back(std::numbers::sqrt2 * std::sqrt(intensity) * std::cos(phi) + rng.normal(0.0, vacuum_sigma));
    }
    return out;
}

QuadratureDataset forward_sample(double mean_n, double var_n, std::size_t n, ForwardModel model,
                                 std::uint64_t seed) {
    RandomStream rng(seed);
    return QuadratureDataset{.samples = forward_sample(mean_n, var_n, n, model, rng), .seed = seed,
                             .strategy = UniformRandom{}};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    result.config = cfg;
    result.delays = cfg.delays.values();
    const std::size_t nd = result.delays.size();
    const int threads = cfg.threads > 0 ? cfg.threads : default_thread_count();

    result.reference_trace = simulate_trace(cfg.phonon, cfg.raman, cfg.noise, result.delays);

    result.stream_keys.resize(nd);
    std::vector<std::vector<double>> samples(nd);
    parallel_for(nd, threads, result.delays, [&](std::size_t i) {
        RandomStream rng(cfg.seed, delay_stream(i));
        result.stream_keys[i] = rng.key();
        samples[i] = forward_sample(result.reference_trace.mean_n[i], result.reference_trace.var_n[i],
                                    cfg.samples_per_delay, cfg.forward_model, rng);
    });

    // One bin grid for every delay so the projector table is built once.
    double lo = samples[0][0];
    double hi = lo;
    for (const auto& s : samples) {
        const auto [a, b] = std::minmax_element(s.begin(), s.end());
        lo = std::min(lo, *a);
        hi = std::max(hi, *b);
    }
    const std::pair<double, double> range{lo - 3.0 * cfg.bin_width, hi + 3.0 * cfg.bin_width};
    const QuadratureHistogram grid = histogram(samples[0], cfg.bin_width, range);
    const ProjectorMatrix projector(grid, cfg.tomography.n_max);

    std::vector<std::optional<QuadratureHistogram>> hists(nd);
    std::vector<std::optional<ReconstructionReport>> reports(nd);
    parallel_for(nd, threads, result.delays, [&](std::size_t i) {
        hists[i] = histogram(samples[i], cfg.bin_width, range);
        std::vector<double>().swap(samples[i]);
        reports[i] = reconstruct(*hists[i], cfg.tomography, projector);
    });

    result.histograms.reserve(nd);
    result.reports.reserve(nd);
    PumpProbeTrace& trace = result.trace;
    for (std::size_t i = 0; i < nd; ++i) {
        result.histograms.push_back(std::move(*hists[i]));
        result.reports.push_back(std::move(*reports[i]));
        const DistributionStats st = distribution_stats(result.reports.back().distribution);
        trace.delays.push_back(result.delays[i]);
        trace.mean_n.push_back(st.mean);
        trace.var_n.push_back(st.variance);
        trace.q.push_back(mandel_q(st.mean, st.variance));
        trace.q_det.push_back(q_det(st.mean, cfg.noise));
    }

    std::vector<std::string> keys;
    for (auto k : result.stream_keys) keys.push_back(std::to_string(k));
    result.metadata = {
        {"tool", "phavtomo"},
        {"version", PHAV_VERSION},
        {"seed", cfg.seed},
        {"rng", std::string(kRngAlgorithm)},
        {"stream_keys", keys},
        {"threads", threads},
        {"config", cfg.to_json()},
        {"bin_grid", {{"first_edge", grid.edges().front()}, {"last_edge", grid.edges().back()}, {"bins", grid.bins()}}},
        {"dominant_frequency_thz", optional_json(safe_dominant(trace.mean_n, result.delays))},
        {"reference_dominant_frequency_thz",
         optional_json(safe_dominant(result.reference_trace.mean_n, result.delays))},
        {"notes",
         {"delays before zero use the unpumped state; the pump-probe overlap region near zero delay is not modeled",
          "q is computed from the reconstructed distribution; q_det is the detector-noise expectation at the same mean"}},
    };
    return result;
}

TraceComparison compare_traces(const ExperimentResult& result) {
    const auto& tr = result.trace;
    const auto& ref = result.reference_trace;
    TraceComparison c;
    double sm = 0.0;
    double sv = 0.0;
    double srel = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double dm = tr.mean_n[i] - ref.mean_n[i];
        const double dv = tr.var_n[i] - ref.var_n[i];
        c.mean_deviation.push_back(dm);
        c.var_deviation.push_back(dv);
        c.max_abs_mean_deviation = std::max(c.max_abs_mean_deviation, std::abs(dm));
        c.max_abs_var_deviation = std::max(c.max_abs_var_deviation, std::abs(dv));
        sm += dm * dm;
        sv += dv * dv;
        srel += (dv / ref.var_n[i]) * (dv / ref.var_n[i]);

        const auto& d = result.reports[i].distribution;
        std::optional<double> tv;
        if (result.config.forward_model == ForwardModel::PoissonianPHAV) {
            tv = total_variation(d, poisson_distribution(ref.mean_n[i], d.n_max()));
        } else if (ref.var_n[i] >= ref.mean_n[i]) {
            tv = total_variation(d, negative_binomial_distribution(ref.mean_n[i], ref.var_n[i], d.n_max()));
        }
        c.tv_distance.push_back(tv);
    }
    if (tr.size() > 0) {
        const auto n = static_cast<double>(tr.size());
        c.rms_mean_deviation = std::sqrt(sm / n);
        c.rms_var_deviation = std::sqrt(sv / n);
        c.rms_relative_var_deviation = std::sqrt(srel / n);
    }
    return c;
}

void write_result_directory(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ArgumentError("cannot create output directory " + dir.string());

    write_trace(dir / "trace.csv", result.trace);
    write_trace(dir / "reference_trace.csv", result.reference_trace);
    for (std::size_t i = 0; i < result.delays.size(); ++i) {
        write_histogram(dir / ("hist_" + std::to_string(i) + ".csv"), result.histograms[i]);
        write_fock(dir / ("fock_" + std::to_string(i) + ".csv"), result.reports[i].distribution);
    }
    try {
        write_spectrum(dir / "fft.csv", amplitude_spectrum(result.trace.mean_n, result.delays, true));
    } catch (const ArgumentError&) {
        // Too few positive delays for a spectrum; report.json records the null frequency.
    }

    const TraceComparison cmp = compare_traces(result);
    nlohmann::json delays = nlohmann::json::array();
    for (std::size_t i = 0; i < result.delays.size(); ++i) {
        nlohmann::json d = report_json(result.reports[i]);
        d["index"] = i;
        d["delay_ps"] = result.delays[i];
        d["tv_to_reference_law"] = optional_json(cmp.tv_distance[i]);
        delays.push_back(std::move(d));
    }
    nlohmann::json report = result.metadata;
    report["comparison"] = {{"max_abs_mean_deviation", cmp.max_abs_mean_deviation},
                            {"rms_mean_deviation", cmp.rms_mean_deviation},
                            {"max_abs_var_deviation", cmp.max_abs_var_deviation},
                            {"rms_var_deviation", cmp.rms_var_deviation},
                            {"rms_relative_var_deviation", cmp.rms_relative_var_deviation}};
    report["delays"] = std::move(delays);
    write_text_atomic(dir / "report.json", report.dump(2) + "\n");
}

}  // namespace phav
