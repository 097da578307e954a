#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phav/bosonic_states.hpp"

namespace phav {

// Appendix: mean and variance carry the ensemble factors sqrt(M) and M.
// MainText: the single-oscillator forms, whose linear term is twice as large
// and which have no M dependence.
enum class RamanForm { Appendix, MainText };

std::string to_string(RamanForm form);
RamanForm parse_raman_form(const std::string& name);

/// Probe and coupling parameters. tau_chi is the dimensionless product of the
/// interaction time and the off-diagonal Raman susceptibility; amplitudes are
/// in sqrt(photons) and enter only as magnitudes.
struct RamanParams {
    double tau_chi = 0.0;
    double alpha_x = 0.0;
    double alpha_y = 0.0;
    double m_oscillators = 1.0;
    RamanForm form = RamanForm::Appendix;

    // alpha_y = sqrt(alpha_y_sq), alpha_x = sqrt(ratio * alpha_y_sq).
    static RamanParams from_photons(double alpha_y_sq, double intensity_ratio, double tau_chi,
                                    double m_oscillators = 1.0, RamanForm form = RamanForm::Appendix);

    // Throws ArgumentError unless tau_chi >= 0, alpha_x >= alpha_y >= 0, M >= 1.
    void validate() const;
};

/// Detector excess noise sigma^2_det = N + p2 N^2 + p1 N + p0.
struct NoiseModel {
    double p2 = 0.0;
    double p1 = 0.0;
    double p0 = 0.0;
};

struct NoiseFit {
    NoiseModel model;
    double residual_norm = 0.0;
    std::array<double, 3> std_errors{};  // p2, p1, p0; zero with exactly three points
};

struct NoisePoint {
    double mean = 0.0;
    double variance = 0.0;
};

/// Delays in ps with the photon statistics at each.
struct PumpProbeTrace {
    std::vector<double> delays;
    std::vector<double> mean_n;
    std::vector<double> var_n;
    std::vector<double> q;
    std::vector<double> q_det;

    std::size_t size() const { return delays.size(); }
    // Throws ValidationError on unequal lengths or a negative variance.
    void validate() const;
};

double mean_photon_number(const RamanParams& p, const PhononMoments& m);

/// Throws NumericalError if the moments give a negative variance.
double photon_variance(const RamanParams& p, const PhononMoments& m);

double mandel_q(double mean, double variance);
double g2_from_q(double q, double mean);

/// p2 N + p1 + p0 / N.
double q_det(double mean, const NoiseModel& noise);

/// Least-squares fit of variance - mean against [mean^2, mean, 1].
NoiseFit fit_excess_noise(std::span<const NoisePoint> points);

struct TraceOptions {
    // Add p2 N^2 + p1 N + p0 to the variance before computing q.
    bool include_detector_excess = false;
    // Delays < 0 use the unpumped state: displacement and squeezing removed,
    // thermal occupation kept.
    bool equilibrium_before_zero = true;
};

using MomentSource = std::function<PhononMoments(double t_ps)>;

/// Unpumped counterpart of `state`.
PhononState equilibrium_state(const PhononState& state);

PumpProbeTrace simulate_trace(const PhononState& state, const RamanParams& p, const NoiseModel& noise,
                              std::span<const double> delays, const TraceOptions& options = {});

/// Same, with moments supplied by the caller (for instance the Fock oracle).
/// The source is queried for every delay as is; equilibrium handling is the caller's.
PumpProbeTrace simulate_trace(const MomentSource& source, const RamanParams& p, const NoiseModel& noise,
                              std::span<const double> delays, bool include_detector_excess = false);

/// tau_chi giving a peak-to-peak mean modulation of `fraction * alpha_y^2` for
/// a displacement of magnitude beta_mag.
double calibrate_coupling(double beta_mag, double alpha_x, double alpha_y, double m_oscillators,
                          double fraction = 0.05, RamanForm form = RamanForm::Appendix);

}  // namespace phav
