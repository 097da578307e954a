#pragma once

#include <optional>
#include <span>
#include <vector>

namespace phav {

struct AmplitudeSpectrum {
    std::vector<double> freq_thz;
    std::vector<double> magnitude;
};

/// Magnitude spectrum of a trace sampled on a uniform delay grid (ps):
/// mean removed, Hann window, zero-padded to 4x the length. Bin 0 is DC.
/// With positive_only, only delays > 0 are used.
AmplitudeSpectrum amplitude_spectrum(std::span<const double> values, std::span<const double> delays_ps,
                                     bool positive_only = false);

/// Frequency (THz) of the strongest non-DC component, refined by a parabolic
/// fit through the peak bin and its neighbours. Absent when the peak is below
/// 5x the median magnitude or the detrended series is flat.
std::optional<double> dominant_frequency(std::span<const double> values, std::span<const double> delays_ps,
                                         bool positive_only = false);

}  // namespace phav
