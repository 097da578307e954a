#pragma once

#include <span>
#include <string>
#include <vector>

#include "phav/bosonic_states.hpp"
#include "phav/raman_model.hpp"

namespace phav {

// ProbePhotons: grid values are alpha_y^2 (photons/pulse); alpha_x, tau_chi and M are held.
// PhononAmplitude: grid values are |beta|; tau_chi is rescaled so |beta| tau_chi stays at its base value.
// OscillatorCount: grid values are M; tau_chi is rescaled so tau_chi sqrt(M) stays at its base value.
enum class SweepAxis { ProbePhotons, PhononAmplitude, OscillatorCount };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepBase {
    PhononState state;
    RamanParams params;
    NoiseModel noise;
};

struct SweepPoint {
    double axis_value = 0.0;
    double max_q = 0.0;      // max of Q over one phonon period
    double q_det_ref = 0.0;  // detector Q at the unpumped mean alpha_y^2
};

/// Max Mandel Q over one period 2 pi / omega, sampled at `points_per_period` delays.
double max_q_over_period(const PhononState& state, const RamanParams& params, int points_per_period = 128);

std::vector<SweepPoint> sweep_max_q(SweepAxis axis, std::span<const double> grid, const SweepBase& base,
                                    int points_per_period = 128);

}  // namespace phav
