#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace phav {

using complex = std::complex<double>;

// Angular frequency of the 4 THz Raman mode, rad/ps.
inline constexpr double kDefaultPhononOmega = 2.0 * std::numbers::pi * 4.0;

enum class StateKind { Coherent, Thermal, Squeezed };

// Order in which squeezing and displacement act on the vacuum.
//   DisplaceAfterSqueeze: D(beta) S(zeta) |0>  (default)
//   SqueezeAfterDisplace: S(zeta) D(beta) |0>
enum class OperatorOrder { DisplaceAfterSqueeze, SqueezeAfterDisplace };

std::string to_string(StateKind kind);
StateKind parse_state_kind(const std::string& name);

/// Gaussian phonon state: a displaced coherent, displaced thermal or displaced
/// squeezed single mode with H = omega b^dagger b.
///
/// Squeezing follows S(zeta) = exp[(zeta^* b^2 - zeta b^dagger^2)/2] and
/// displacement D(beta) = exp(beta b^dagger - beta^* b). Time is in ps and
/// omega in rad/ps.
struct PhononState {
    StateKind kind = StateKind::Coherent;
    complex beta{0.0, 0.0};
    double n_th = 0.0;
    complex zeta{0.0, 0.0};
    double omega = kDefaultPhononOmega;
    OperatorOrder order = OperatorOrder::DisplaceAfterSqueeze;

    static PhononState coherent(complex beta, double omega = kDefaultPhononOmega);
    static PhononState thermal(double n_th, complex beta, double omega = kDefaultPhononOmega);
    static PhononState squeezed(complex zeta, complex beta, double omega = kDefaultPhononOmega,
                                OperatorOrder order = OperatorOrder::DisplaceAfterSqueeze);

    // The same state with its displacement removed (the unpumped equilibrium).
    PhononState undisplaced() const;

    // Throws ArgumentError on n_th < 0, omega <= 0 or |zeta| > 2.
    void validate() const;
};

/// First and second moments at a given delay.
struct PhononMoments {
    complex b_mean;  // <b>
    complex b_sq;    // <b^2>
    double n_mean = 0.0;  // <b^dagger b>

    complex central_b_sq() const { return b_sq - b_mean * b_mean; }
    double central_n() const { return n_mean - std::norm(b_mean); }
};

PhononMoments moments(const PhononState& state, double t_ps);

/// Var(q) with q = (b + b^dagger)/sqrt(2).
double displacement_variance(const PhononMoments& m);
double displacement_variance(const PhononState& state, double t_ps);

/// W(X, Y) sampled on a rectangular grid; values are stored row-major with
/// the x index outermost: values[ix * y_axis.size() + iy].
struct WignerGrid {
    std::vector<double> x_axis;
    std::vector<double> y_axis;
    std::vector<double> values;

    double at(std::size_t ix, std::size_t iy) const { return values[ix * y_axis.size() + iy]; }
    // 2-D trapezoidal integral of the values.
    double integral() const;
    // Same rule applied to values * weight(x, y).
    template <class F>
    double integrate(F&& weight) const;
};

// Closed-form Gaussian Wigner function of the state at time t.
double gaussian_wigner(const PhononMoments& m, double x, double y);
WignerGrid wigner(const PhononState& state, double t_ps, std::span<const double> x_axis,
                  std::span<const double> y_axis);

/// Wigner function of a phase-averaged coherent state of amplitude |alpha|:
/// the coherent-state Gaussian averaged over the phase of alpha, a ring of
/// radius sqrt(2)|alpha| in the same quadrature units as `wigner`.
double phav_wigner_value(double alpha_mag, double x, double y);
WignerGrid phav_wigner(double alpha_mag, std::span<const double> x_axis,
                       std::span<const double> y_axis);

enum class WeylObservable { PhotonNumber, QuadX, QuadXSquared };

/// <O> as the phase-space integral of W against the Weyl symbol of O.
/// Throws ValidationError if the grid integral is off from 1 by more than 2e-3.
double expectation_via_wigner(const WignerGrid& grid, WeylObservable observable);

// Uniform axis helper: start, start + step, ... up to and including stop.
std::vector<double> linspace_step(double start, double stop, double step);

template <class F>
double WignerGrid::integrate(F&& weight) const {
    const std::size_t nx = x_axis.size();
    const std::size_t ny = y_axis.size();
    if (nx < 2 || ny < 2) return 0.0;
    double total = 0.0;
    for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
        const double dx = x_axis[ix + 1] - x_axis[ix];
        for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
            const double dy = y_axis[iy + 1] - y_axis[iy];
            const double corner = weight(x_axis[ix], y_axis[iy]) * at(ix, iy) +
                                  weight(x_axis[ix + 1], y_axis[iy]) * at(ix + 1, iy) +
                                  weight(x_axis[ix], y_axis[iy + 1]) * at(ix, iy + 1) +
                                  weight(x_axis[ix + 1], y_axis[iy + 1]) * at(ix + 1, iy + 1);
            total += 0.25 * dx * dy * corner;
        }
    }
    return total;
}

}  // namespace phav
