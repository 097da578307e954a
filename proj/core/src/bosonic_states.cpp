#include "phav/bosonic_states.hpp"

#include <cmath>

#include "phav/error.hpp"

namespace phav {

namespace {

// exp(-z) I0(z) for z >= 0.
double scaled_bessel_i0(double z) {
    if (z < 500.0) return std::cyl_bessel_i(0.0, z) * std::exp(-z);
    const double inv = 1.0 / z;
    const double series = 1.0 + inv / 8.0 + 9.0 * inv * inv / 128.0 +
                          225.0 * inv * inv * inv / 3072.0;
    return series / std::sqrt(2.0 * std::numbers::pi * z);
}

WignerGrid make_grid(std::span<const double> x_axis, std::span<const double> y_axis) {
    auto strictly_increasing = [](std::span<const double> a) {
        for (std::size_t i = 1; i < a.size(); ++i)
            if (!(a[i] > a[i - 1])) return false;
        return !a.empty();
    };
    require_argument(strictly_increasing(x_axis), "Wigner x axis must be strictly increasing");
    require_argument(strictly_increasing(y_axis), "Wigner y axis must be strictly increasing");
    WignerGrid g;
    g.x_axis.assign(x_axis.begin(), x_axis.end());
    g.y_axis.assign(y_axis.begin(), y_axis.end());
    g.values.resize(x_axis.size() * y_axis.size());
    return g;
}

}  // namespace

std::string to_string(StateKind kind) {
    switch (kind) {
        case StateKind::Coherent: return "coherent";
        case StateKind::Thermal: return "thermal";
        case StateKind::Squeezed: return "squeezed";
    }
    return "unknown";
}

StateKind parse_state_kind(const std::string& name) {
    if (name == "coherent") return StateKind::Coherent;
    if (name == "thermal") return StateKind::Thermal;
    if (name == "squeezed") return StateKind::Squeezed;
    throw ArgumentError("unknown phonon state kind '" + name + "'");
}

PhononState PhononState::coherent(complex beta, double omega) {
    PhononState s;
    s.beta = beta;
    s.omega = omega;
    s.validate();
    return s;
}

PhononState PhononState::thermal(double n_th, complex beta, double omega) {
    PhononState s;
    s.kind = StateKind::Thermal;
    s.n_th = n_th;
    s.beta = beta;
    s.omega = omega;
    s.validate();
    return s;
}

PhononState PhononState::squeezed(complex zeta, complex beta, double omega, OperatorOrder order) {
    PhononState s;
    s.kind = StateKind::Squeezed;
    s.zeta = zeta;
    s.beta = beta;
    s.omega = omega;
    s.order = order;
    s.validate();
    return s;
}

PhononState PhononState::undisplaced() const {
    PhononState s = *this;
    s.beta = complex{0.0, 0.0};
    return s;
}

void PhononState::validate() const {
    require_argument(std::isfinite(beta.real()) && std::isfinite(beta.imag()),
                     "displacement beta must be finite");
    require_argument(n_th >= 0.0 && std::isfinite(n_th), "thermal occupation n_th must be >= 0");
    require_argument(omega > 0.0 && std::isfinite(omega), "phonon omega must be > 0 rad/ps");
    require_argument(std::abs(zeta) <= 2.0, "squeezing magnitude |zeta| must be <= 2");
}

PhononMoments moments(const PhononState& state, double t_ps) {
    state.validate();
    complex mean = state.beta;
    complex central_sq{0.0, 0.0};
    double central_n = 0.0;
    switch (state.kind) {
        case StateKind::Coherent:
            break;
        case StateKind::Thermal:
            central_n = state.n_th;
            break;
        case StateKind::Squeezed: {
            const double r = std::abs(state.zeta);
            const complex phase = r > 0.0 ? state.zeta / r : complex{1.0, 0.0};
            const double ch = std::cosh(r);
            const double sh = std::sinh(r);
            central_sq = -phase * sh * ch;
            central_n = sh * sh;
            if (state.order == OperatorOrder::SqueezeAfterDisplace) {
                // S D(beta) S^dagger = D(beta cosh r - beta^* e^{i theta} sinh r)
                mean = state.beta * ch - std::conj(state.beta) * phase * sh;
            }
            break;
        }
    }
    const complex rot = std::polar(1.0, -state.omega * t_ps);
    PhononMoments m;
    m.b_mean = mean * rot;
    m.b_sq = (central_sq + mean * mean) * rot * rot;
    m.n_mean = central_n + std::norm(mean);
    return m;
}

double displacement_variance(const PhononMoments& m) {
    // q = (b + b^dagger)/sqrt(2): Var q = (2 Re<b^2>_c + 2<b^dagger b>_c + 1) / 2
    return (2.0 * m.central_b_sq().real() + 2.0 * m.central_n() + 1.0) / 2.0;
}

double displacement_variance(const PhononState& state, double t_ps) {
    return displacement_variance(moments(state, t_ps));
}

double WignerGrid::integral() const {
    return integrate([](double, double) { return 1.0; });
}

double gaussian_wigner(const PhononMoments& m, double x, double y) {
    const double mx = std::numbers::sqrt2 * m.b_mean.real();
    const double my = std::numbers::sqrt2 * m.b_mean.imag();
    const complex c2 = m.central_b_sq();
    const double cn = m.central_n();
    const double vxx = (2.0 * cn + 1.0 + 2.0 * c2.real()) / 2.0;
    const double vyy = (2.0 * cn + 1.0 - 2.0 * c2.real()) / 2.0;
    const double vxy = c2.imag();
    const double det = vxx * vyy - vxy * vxy;
    const double dx = x - mx;
    const double dy = y - my;
    const double quad = (vyy * dx * dx - 2.0 * vxy * dx * dy + vxx * dy * dy) / det;
    return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
}

WignerGrid wigner(const PhononState& state, double t_ps, std::span<const double> x_axis,
                  std::span<const double> y_axis) {
    WignerGrid g = make_grid(x_axis, y_axis);
    const PhononMoments m = moments(state, t_ps);
    for (std::size_t ix = 0; ix < x_axis.size(); ++ix)
        for (std::size_t iy = 0; iy < y_axis.size(); ++iy)
            g.values[ix * y_axis.size() + iy] = gaussian_wigner(m, x_axis[ix], y_axis[iy]);
    return g;
}

double phav_wigner_value(double alpha_mag, double x, double y) {
    const double r = std::hypot(x, y);
    const double ring = std::numbers::sqrt2 * alpha_mag;
    const double z = 2.0 * ring * r;
    return std::exp(-(r - ring) * (r - ring)) * scaled_bessel_i0(z) / std::numbers::pi;
}

WignerGrid phav_wigner(double alpha_mag, std::span<const double> x_axis,
                       std::span<const double> y_axis) {
    require_argument(alpha_mag >= 0.0 && std::isfinite(alpha_mag), "alpha magnitude must be >= 0");
    WignerGrid g = make_grid(x_axis, y_axis);
    for (std::size_t ix = 0; ix < x_axis.size(); ++ix)
        for (std::size_t iy = 0; iy < y_axis.size(); ++iy)
            g.values[ix * y_axis.size() + iy] = phav_wigner_value(alpha_mag, x_axis[ix], y_axis[iy]);
    return g;
}

double expectation_via_wigner(const WignerGrid& grid, WeylObservable observable) {
    const double norm = grid.integral();
    if (std::abs(norm - 1.0) > 2e-3) {
        throw ValidationError("Wigner grid is not normalized (integral " + std::to_string(norm) +
                              "); widen the axes or refine the step");
    }
    switch (observable) {
        case WeylObservable::PhotonNumber:
            return grid.integrate([](double x, double y) { return 0.5 * (x * x + y * y - 1.0); });
        case WeylObservable::QuadX:
            return grid.integrate([](double x, double) { return x; });
        case WeylObservable::QuadXSquared:
            return grid.integrate([](double x, double) { return x * x; });
    }
    return 0.0;
}

std::vector<double> linspace_step(double start, double stop, double step) {
    require_argument(step > 0.0, "axis step must be > 0");
    require_argument(stop >= start, "axis stop must be >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> axis(count);
    for (std::size_t i = 0; i < count; ++i) axis[i] = start + static_cast<double>(i) * step;
    return axis;
}

}  // namespace phav
