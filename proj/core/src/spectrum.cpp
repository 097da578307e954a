#include "phav/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "phav/error.hpp"

namespace phav {

namespace {

constexpr std::size_t kMinPoints = 16;
constexpr std::size_t kPadFactor = 4;
constexpr double kPeakToFloor = 5.0;

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Selected {
    std::vector<double> values;
    double dt = 0.0;
};

Selected select(std::span<const double> values, std::span<const double> delays, bool positive_only) {
    if (values.size() != delays.size()) throw ArgumentError("values and delays differ in length");
    Selected s;
    std::vector<double> t;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (positive_only && !(delays[i] > 0.0)) continue;
        if (!std::isfinite(values[i])) throw ValidationError("trace value at index " + std::to_string(i) + " is not finite");
        s.values.push_back(values[i]);
        t.push_back(delays[i]);
    }
    if (s.values.size() < kMinPoints) {
        throw ArgumentError("spectrum needs at least " + std::to_string(kMinPoints) + " delays, got " +
                            std::to_string(s.values.size()));
    }
    s.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(s.dt > 0.0)) throw ValidationError("delays must be increasing");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - s.dt) > 1e-6 * s.dt) {
            throw ValidationError("delay spacing is not uniform near " + std::to_string(t[i]) + " ps");
        }
    }
    return s;
}

}  // namespace

AmplitudeSpectrum amplitude_spectrum(std::span<const double> values, std::span<const double> delays_ps,
                                     bool positive_only) {
    const Selected s = select(values, delays_ps, positive_only);
    const std::size_t n = s.values.size();
    const std::size_t padded = kPadFactor * n;
    const double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(n);

    std::vector<double> in(padded, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        in[i] = (s.values[i] - mean) * hann;
    }
    const std::size_t bins = padded / 2 + 1;
    std::vector<std::complex<double>> out(bins);

    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(padded), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw NumericalError("FFTW could not plan a transform of length " + std::to_string(padded));
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    AmplitudeSpectrum spec;
    spec.freq_thz.resize(bins);
    spec.magnitude.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        spec.freq_thz[k] = static_cast<double>(k) / (static_cast<double>(padded) * s.dt);
        spec.magnitude[k] = std::abs(out[k]);
    }
    return spec;
}

std::optional<double> dominant_frequency(std::span<const double> values, std::span<const double> delays_ps,
                                         bool positive_only) {
    const Selected s = select(values, delays_ps, positive_only);
    const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    if (*hi - *lo <= 1e-12 * std::max(scale, 1e-300)) return std::nullopt;

    const AmplitudeSpectrum spec = amplitude_spectrum(values, delays_ps, positive_only);
    const auto& mag = spec.magnitude;
    std::size_t peak = 1;
    for (std::size_t k = 2; k < mag.size(); ++k)
        if (mag[k] > mag[peak]) peak = k;

    std::vector<double> rest(mag.begin() + 1, mag.end());
    std::nth_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(rest.size() / 2), rest.end());
    const double floor = rest[rest.size() / 2];
    if (!(mag[peak] >= kPeakToFloor * floor) || !(mag[peak] > 0.0)) return std::nullopt;

    double offset = 0.0;
    if (peak + 1 < mag.size()) {
        const double a = mag[peak - 1];
        const double b = mag[peak];
        const double c = mag[peak + 1];
        const double denom = a - 2.0 * b + c;
        if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    }
    const double df = spec.freq_thz[1];
    return (static_cast<double>(peak) + offset) * df;
}

}  // namespace phav
