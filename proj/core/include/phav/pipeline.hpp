#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "phav/bosonic_states.hpp"
#include "phav/fock_numerics.hpp"
#include "phav/phav_sampling.hpp"
#include "phav/raman_model.hpp"
#include "phav/rng.hpp"
#include "phav/spectrum.hpp"
#include "phav/tomography.hpp"

namespace phav {

// PoissonianPHAV: every pulse is a phase-averaged coherent state of fixed mean.
// GammaMixedPHAV: the pulse intensity is Gamma distributed, giving a
// negative-binomial photon law; only super-Poissonian targets are reachable.
enum class ForwardModel { PoissonianPHAV, GammaMixedPHAV };

std::string to_string(ForwardModel model);
ForwardModel parse_forward_model(const std::string& name);

/// Delay grid in ps, start..stop inclusive.
struct DelayGrid {
    double start = 0.0;
    double stop = 2.5;
    double step = 0.0625;

    std::vector<double> values() const;
};

// alpha_y^2 = 2.9, ratio 100, M = 1e6, tau_chi calibrated for a 5% peak-to-peak
// mean modulation at |beta| = 2.
RamanParams default_raman_params();

struct ExperimentConfig {
    PhononState phonon = PhononState::coherent({2.0, 0.0});
    RamanParams raman = default_raman_params();
    NoiseModel noise{.p2 = 0.002, .p1 = 0.0, .p0 = 0.0};
    DelayGrid delays;
    std::size_t samples_per_delay = 100000;
    TomographyConfig tomography;
    double bin_width = 0.1;
    std::uint64_t seed = 0;
    ForwardModel forward_model = ForwardModel::PoissonianPHAV;
    // Worker threads; 0 takes PHAV_THREADS or the hardware concurrency.
    int threads = 0;

    // Throws ArgumentError on an invalid combination.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Thread count from PHAV_THREADS, else std::thread::hardware_concurrency().
int default_thread_count();

/// n quadratures whose photon statistics have the requested mean and variance.
/// PoissonianPHAV ignores var_n. GammaMixedPHAV rejects var_n < mean_n with
/// ArgumentError and reduces to PoissonianPHAV at var_n == mean_n.
std::vector<double> forward_sample(double mean_n, double var_n, std::size_t n, ForwardModel model,
                                   RandomStream& rng);
QuadratureDataset forward_sample(double mean_n, double var_n, std::size_t n, ForwardModel model,
                                 std::uint64_t seed);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<double> delays;
    std::vector<QuadratureHistogram> histograms;
    std::vector<ReconstructionReport> reports;
    PumpProbeTrace trace;            // statistics of the reconstructions
    PumpProbeTrace reference_trace;  // closed-form model
    std::vector<std::uint64_t> stream_keys;
    nlohmann::json metadata;
};

/// RNG stream index used for delay i.
inline std::uint64_t delay_stream(std::size_t i) { return static_cast<std::uint64_t>(i); }

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct TraceComparison {
    std::vector<double> mean_deviation;  // reconstructed - reference, per delay
    std::vector<double> var_deviation;
    std::vector<std::optional<double>> tv_distance;  // against the reference photon law
    double max_abs_mean_deviation = 0.0;
    double rms_mean_deviation = 0.0;
    double max_abs_var_deviation = 0.0;
    double rms_var_deviation = 0.0;
    double rms_relative_var_deviation = 0.0;
};

TraceComparison compare_traces(const ExperimentResult& result);

/// trace.csv, reference_trace.csv, hist_<i>.csv, fock_<i>.csv, fft.csv and report.json.
void write_result_directory(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace phav
