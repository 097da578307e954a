#pragma once

#include <Eigen/Dense>

#include "phav/bosonic_states.hpp"

namespace phav {

// Brute-force truncated-Fock representation of the Gaussian phonon states.
// It shares no code with the closed-form moments/Wigner path and exists to
// cross-check it.

using DensityMatrix = Eigen::MatrixXcd;

/// Annihilation operator truncated to `dim` Fock states.
Eigen::MatrixXcd annihilation_operator(int dim);

/// exp(a) by scaling and squaring of a truncated Taylor series.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a);

/// Smallest truncation the oracle accepts for `state`:
/// 4 (|beta|^2 + n_th + sinh^2|zeta|) + 20.
int minimum_oracle_dimension(const PhononState& state);

/// Density matrix of `state` (at t = 0) on the first `dim` Fock states.
///
/// Operators are exponentiated on a padded basis and the result projected to
/// `dim`; the probability lost by that projection must stay below 1e-6, else
/// TruncationError. The returned matrix is renormalized to unit trace.
DensityMatrix build_fock_density(const PhononState& state, int dim);

/// Moments of rho evolved for t_ps under H = omega b^dagger b.
PhononMoments moments_from_density(const DensityMatrix& rho, double omega, double t_ps);

/// W(X, Y) = (1/pi) Tr[rho D(a) P D(a)^dagger], a = (X + iY)/sqrt(2), P the parity.
double wigner_from_density(const DensityMatrix& rho, double x, double y);

}  // namespace phav
