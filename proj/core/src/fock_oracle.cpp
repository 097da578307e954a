#include "phav/fock_oracle.hpp"

#include <cmath>
#include <string>

#include "phav/error.hpp"

namespace phav {

namespace {

constexpr double kTruncationTolerance = 1e-6;

int padded_dimension(int dim) { return dim + std::max(20, dim); }

Eigen::MatrixXcd displacement(const Eigen::MatrixXcd& b, complex beta) {
    const Eigen::MatrixXcd gen = beta * b.adjoint() - std::conj(beta) * b;
    return matrix_exponential(gen);
}

Eigen::MatrixXcd squeezing(const Eigen::MatrixXcd& b, complex zeta) {
    const Eigen::MatrixXcd b2 = b * b;
    const Eigen::MatrixXcd gen = 0.5 * (std::conj(zeta) * b2 - zeta * b2.adjoint());
    return matrix_exponential(gen);
}

}  // namespace

Eigen::MatrixXcd annihilation_operator(int dim) {
    require_argument(dim >= 2, "Fock dimension must be >= 2");
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return b;
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a) {
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);

    const auto n = a.rows();
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 1; k <= 30; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

int minimum_oracle_dimension(const PhononState& state) {
    const double sh = std::sinh(std::abs(state.zeta));
    const double load = std::norm(state.beta) + state.n_th + sh * sh;
    return static_cast<int>(std::ceil(4.0 * load)) + 20;
}

DensityMatrix build_fock_density(const PhononState& state, int dim) {
    state.validate();
    if (dim < minimum_oracle_dimension(state)) {
        throw TruncationError("Fock dimension " + std::to_string(dim) + " below the minimum " +
                              std::to_string(minimum_oracle_dimension(state)) + " for this state");
    }
    const int work = padded_dimension(dim);
    const Eigen::MatrixXcd b = annihilation_operator(work);

    DensityMatrix rho_work;
    if (state.kind == StateKind::Thermal) {
        Eigen::VectorXcd weights(work);
        const double ratio = state.n_th / (state.n_th + 1.0);
        double w = 1.0 / (state.n_th + 1.0);
        double total = 0.0;
        for (int n = 0; n < work; ++n) {
            weights(n) = w;
            total += w;
            w *= ratio;
        }
        weights /= total;
        const Eigen::MatrixXcd d = displacement(b, state.beta);
        rho_work = d * weights.asDiagonal() * d.adjoint();
    } else {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(work, work);
        if (state.kind == StateKind::Squeezed) {
            const Eigen::MatrixXcd d = displacement(b, state.beta);
            const Eigen::MatrixXcd s = squeezing(b, state.zeta);
            u = state.order == OperatorOrder::DisplaceAfterSqueeze ? Eigen::MatrixXcd(d * s)
                                                                   : Eigen::MatrixXcd(s * d);
        } else {
            u = displacement(b, state.beta);
        }
        const Eigen::VectorXcd psi = u.col(0);
        rho_work = psi * psi.adjoint();
    }

    DensityMatrix rho = rho_work.topLeftCorner(dim, dim);
    const double kept = rho.trace().real();
    if (1.0 - kept > kTruncationTolerance) {
        throw TruncationError("Fock truncation at dim " + std::to_string(dim) + " loses " +
                              std::to_string(1.0 - kept) + " of the probability");
    }
    rho /= kept;
    return rho;
}

PhononMoments moments_from_density(const DensityMatrix& rho, double omega, double t_ps) {
    const auto dim = static_cast<int>(rho.rows());
    Eigen::VectorXcd phases(dim);
    for (int n = 0; n < dim; ++n) phases(n) = std::polar(1.0, -omega * t_ps * n);
    const Eigen::MatrixXcd rho_t = phases.asDiagonal() * rho * phases.conjugate().asDiagonal();

    const Eigen::MatrixXcd b = annihilation_operator(dim);
    PhononMoments m;
    m.b_mean = (rho_t * b).trace();
    m.b_sq = (rho_t * b * b).trace();
    m.n_mean = (rho_t * b.adjoint() * b).trace().real();
    return m;
}

double wigner_from_density(const DensityMatrix& rho, double x, double y) {
    const auto dim = static_cast<int>(rho.rows());
    const int work = padded_dimension(dim);
    const Eigen::MatrixXcd b = annihilation_operator(work);
    const complex alpha = complex{x, y} / std::sqrt(2.0);
    // Rows restricted to the support of rho; the parity sum runs over the padded basis.
    const Eigen::MatrixXcd d = displacement(b, alpha).topRows(dim);
    Eigen::VectorXd parity(work);
    for (int n = 0; n < work; ++n) parity(n) = (n % 2 == 0) ? 1.0 : -1.0;
    const Eigen::MatrixXcd dpd = d * parity.asDiagonal() * d.adjoint();
    return (rho * dpd).trace().real() / std::numbers::pi;
}

}  // namespace phav
