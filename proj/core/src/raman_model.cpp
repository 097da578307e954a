#include "phav/raman_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "phav/error.hpp"

namespace phav {

std::string to_string(RamanForm form) { return form == RamanForm::Appendix ? "appendix" : "main_text"; }

RamanForm parse_raman_form(const std::string& name) {
    if (name == "appendix") return RamanForm::Appendix;
    if (name == "main_text" || name == "main-text") return RamanForm::MainText;
    throw ArgumentError("unknown Raman form '" + name + "' (expected appendix or main_text)");
}

RamanParams RamanParams::from_photons(double alpha_y_sq, double intensity_ratio, double tau_chi,
                                      double m_oscillators, RamanForm form) {
    require_argument(alpha_y_sq >= 0.0, "alpha_y^2 must be >= 0 photons");
    require_argument(intensity_ratio >= 1.0, "intensity ratio alpha_x^2/alpha_y^2 must be >= 1");
    RamanParams p{.tau_chi = tau_chi,
                  .alpha_x = std::sqrt(intensity_ratio * alpha_y_sq),
                  .alpha_y = std::sqrt(alpha_y_sq),
                  .m_oscillators = m_oscillators,
                  .form = form};
    p.validate();
    return p;
}

void RamanParams::validate() const {
    require_argument(tau_chi >= 0.0 && std::isfinite(tau_chi), "tau_chi must be >= 0");
    require_argument(alpha_y >= 0.0 && std::isfinite(alpha_y), "alpha_y must be >= 0");
    require_argument(alpha_x >= alpha_y && std::isfinite(alpha_x), "alpha_x must be >= alpha_y");
    require_argument(m_oscillators >= 1.0 && std::isfinite(m_oscillators), "oscillator count M must be >= 1");
}

void PumpProbeTrace::validate() const {
    const std::size_t n = delays.size();
    if (mean_n.size() != n || var_n.size() != n || q.size() != n || q_det.size() != n) {
        throw ValidationError("trace columns have unequal lengths");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (var_n[i] < 0.0) throw ValidationError("negative variance at delay index " + std::to_string(i));
}

double mean_photon_number(const RamanParams& p, const PhononMoments& m) {
    const double displacement = 2.0 * m.b_mean.real();  // <b^dagger + b>
    if (p.form == RamanForm::MainText) return p.alpha_y * p.alpha_y + 2.0 * p.tau_chi * p.alpha_x * p.alpha_y * displacement;
    return p.alpha_y * p.alpha_y + p.tau_chi * p.alpha_y * p.alpha_x * std::sqrt(p.m_oscillators) * displacement;
}

double photon_variance(const RamanParams& p, const PhononMoments& m) {
    const double mm = p.form == RamanForm::MainText ? 1.0 : p.m_oscillators;
    const double anomalous = 2.0 * m.central_b_sq().real();  // <b^dag2> - <b^dag>^2 + <b^2> - <b>^2
    const double normal = m.central_n();
    const double t2 = p.tau_chi * p.tau_chi;
    const double ay2 = p.alpha_y * p.alpha_y;
    const double ax2 = p.alpha_x * p.alpha_x;
    const double var = mean_photon_number(p, m) + 4.0 * t2 * ay2 * ax2 * (mm * (anomalous + 2.0 * normal) + 1.0) +
                       t2 * ay2 * (2.0 * mm * normal + 1.0);
    if (!(var >= 0.0)) {
        throw NumericalError("photon variance is negative (" + std::to_string(var) +
                             "); the phonon moments are inconsistent for these parameters");
    }
    return var;
}

double mandel_q(double mean, double variance) {
    require_argument(mean > 0.0, "Mandel Q needs a positive mean photon number");
    return (variance - mean) / mean;
}

double g2_from_q(double q, double mean) {
    require_argument(mean > 0.0, "g2 needs a positive mean photon number");
    return q / mean + 1.0;
}

double q_det(double mean, const NoiseModel& noise) {
    require_argument(mean > 0.0, "Q_det needs a positive mean photon number");
    return noise.p2 * mean + noise.p1 + noise.p0 / mean;
}

NoiseFit fit_excess_noise(std::span<const NoisePoint> points) {
    std::set<double> distinct;
    for (const auto& pt : points) {
        if (!std::isfinite(pt.mean) || !std::isfinite(pt.variance)) {
            throw ValidationError("noise points must be finite");
        }
        distinct.insert(pt.mean);
    }
    if (distinct.size() < 3) throw ValidationError("noise fit needs at least 3 distinct mean photon numbers");

    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& pt = points[static_cast<std::size_t>(i)];
        a(i, 0) = pt.mean * pt.mean;
        a(i, 1) = pt.mean;
        a(i, 2) = 1.0;
        y(i) = pt.variance - pt.mean;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) throw ValidationError("noise fit design matrix is rank deficient");
    const Eigen::Vector3d c = qr.solve(y);
    const Eigen::VectorXd resid = y - a * c;

    NoiseFit fit;
    fit.model = NoiseModel{.p2 = c(0), .p1 = c(1), .p0 = c(2)};
    fit.residual_norm = resid.norm();
    if (n > 3) {
        const double s2 = resid.squaredNorm() / static_cast<double>(n - 3);
        const Eigen::Matrix3d cov = s2 * (a.transpose() * a).inverse();
        for (int k = 0; k < 3; ++k) fit.std_errors[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, cov(k, k)));
    }
    return fit;
}

PhononState equilibrium_state(const PhononState& state) {
    PhononState eq = state.undisplaced();
    eq.zeta = complex{0.0, 0.0};
    eq.kind = eq.n_th > 0.0 ? StateKind::Thermal : StateKind::Coherent;
    return eq;
}

namespace {

void append_point(PumpProbeTrace& trace, double t, const RamanParams& p, const NoiseModel& noise,
                  const PhononMoments& m, bool include_detector_excess) {
    const double mean = mean_photon_number(p, m);
    double var = photon_variance(p, m);
    if (include_detector_excess) var += noise.p2 * mean * mean + noise.p1 * mean + noise.p0;
    trace.delays.push_back(t);
    trace.mean_n.push_back(mean);
    trace.var_n.push_back(var);
    trace.q.push_back(mandel_q(mean, var));
    trace.q_det.push_back(q_det(mean, noise));
}

}  // namespace

PumpProbeTrace simulate_trace(const PhononState& state, const RamanParams& p, const NoiseModel& noise,
                              std::span<const double> delays, const TraceOptions& options) {
    state.validate();
    p.validate();
    const PhononState eq = equilibrium_state(state);
    PumpProbeTrace trace;
    for (double t : delays) {
        const bool before = options.equilibrium_before_zero && t < 0.0;
        append_point(trace, t, p, noise, before ? moments(eq, 0.0) : moments(state, t), options.include_detector_excess);
    }
    return trace;
}

PumpProbeTrace simulate_trace(const MomentSource& source, const RamanParams& p, const NoiseModel& noise,
                              std::span<const double> delays, bool include_detector_excess) {
    p.validate();
    PumpProbeTrace trace;
    for (double t : delays) append_point(trace, t, p, noise, source(t), include_detector_excess);
    return trace;
}

double calibrate_coupling(double beta_mag, double alpha_x, double alpha_y, double m_oscillators, double fraction,
                          RamanForm form) {
    require_argument(beta_mag > 0.0, "calibration needs a nonzero displacement |beta|");
    require_argument(alpha_x > 0.0 && alpha_y > 0.0, "calibration needs nonzero probe amplitudes");
    require_argument(m_oscillators >= 1.0, "oscillator count M must be >= 1");
    require_argument(fraction >= 0.0, "modulation fraction must be >= 0");
    // Peak-to-peak of <b + b^dagger> is 4 |beta|.
    const double per_unit = 4.0 * beta_mag * alpha_x * alpha_y;
    const double target = fraction * alpha_y * alpha_y;
    if (form == RamanForm::MainText) return target / (2.0 * per_unit);
    return target / (per_unit * std::sqrt(m_oscillators));
}

}  // namespace phav
