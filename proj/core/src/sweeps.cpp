#include "phav/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "phav/error.hpp"

namespace phav {

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::ProbePhotons: return "probe_photons";
        case SweepAxis::PhononAmplitude: return "phonon_amplitude";
        case SweepAxis::OscillatorCount: return "oscillator_count";
    }
    return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "probe_photons" || name == "probe-photons") return SweepAxis::ProbePhotons;
    if (name == "phonon_amplitude" || name == "phonon-amplitude") return SweepAxis::PhononAmplitude;
    if (name == "oscillator_count" || name == "oscillator-count") return SweepAxis::OscillatorCount;
    throw ArgumentError("unknown sweep axis '" + name + "'");
}

double max_q_over_period(const PhononState& state, const RamanParams& params, int points_per_period) {
    require_argument(points_per_period >= 64, "need at least 64 points per phonon period");
    const double period = 2.0 * std::numbers::pi / state.omega;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < points_per_period; ++k) {
        const double t = period * k / points_per_period;
        const PhononMoments m = moments(state, t);
        best = std::max(best, mandel_q(mean_photon_number(params, m), photon_variance(params, m)));
    }
    return best;
}

std::vector<SweepPoint> sweep_max_q(SweepAxis axis, std::span<const double> grid, const SweepBase& base,
                                    int points_per_period) {
    if (grid.empty()) throw ArgumentError("sweep grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end())) throw ArgumentError("sweep grid must be sorted");
    base.state.validate();
    base.params.validate();

    const double beta0 = std::abs(base.state.beta);
    const double coupling_beta = beta0 * base.params.tau_chi;
    const double coupling_m = base.params.tau_chi * std::sqrt(base.params.m_oscillators);

    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double v : grid) {
        PhononState state = base.state;
        RamanParams params = base.params;
        switch (axis) {
            case SweepAxis::ProbePhotons:
                require_argument(v > 0.0, "probe photon number must be > 0");
                params.alpha_y = std::sqrt(v);
                break;
            case SweepAxis::PhononAmplitude: {
                require_argument(v > 0.0, "phonon amplitude must be > 0");
                require_argument(beta0 > 0.0, "base state needs a nonzero displacement for an amplitude sweep");
                state.beta = base.state.beta / beta0 * v;
                params.tau_chi = coupling_beta / v;
                break;
            }
            case SweepAxis::OscillatorCount:
                require_argument(v >= 1.0, "oscillator count must be >= 1");
                params.m_oscillators = v;
                params.tau_chi = coupling_m / std::sqrt(v);
                break;
        }
        params.validate();
        const double unpumped = params.alpha_y * params.alpha_y;
        out.push_back(SweepPoint{.axis_value = v,
                                 .max_q = max_q_over_period(state, params, points_per_period),
                                 .q_det_ref = q_det(unpumped, base.noise)});
    }
    return out;
}

}  // namespace phav
