#pragma once

#include <Eigen/Dense>
#include <vector>

#include "phav/fock_numerics.hpp"
#include "phav/phav_sampling.hpp"

namespace phav {

struct TomographyConfig {
    int n_max = kMaxPhotonNumber;
    int iterations = 100;
    // Stop once max_N |p_{k+1}(N) - p_k(N)| falls below this; 0 runs all iterations.
    double early_stop_delta = 1e-8;
    // Bin centers must satisfy |x| <= quadrature_support.
    double quadrature_support = 35.0;

    void validate() const;
};

struct ReconstructionReport {
    FockDistribution distribution;
    // Entry 0 is the uniform starting point, entry k the value after iteration k.
    std::vector<double> log_likelihood_per_iteration;
    int iterations_run = 0;
    // Last max |delta p| was below early_stop_delta (or 1e-8 when early stopping is off).
    bool converged = false;
    // >= 0.1% of the histogram mass sits beyond the turning point sqrt(2 n_max + 1).
    bool support_warning = false;
};

/// |<n|x>|^2. The phase-averaged projector is diagonal in the Fock basis, so
/// reconstruction only ever touches diagonal entries.
double phav_projector(int n, double x);

/// Bins x (n_max + 1) table of |<N|x_b>|^2 at the bin centers of one grid.
/// Immutable after construction and safe to share between threads.
class ProjectorMatrix {
public:
    ProjectorMatrix(const QuadratureHistogram& grid, int n_max);

    int n_max() const { return static_cast<int>(table_.cols()) - 1; }
    const Eigen::MatrixXd& table() const { return table_; }
    std::span<const double> centers() const { return centers_; }
    // True when `hist` has the same bin centers this table was built for.
    bool matches(const QuadratureHistogram& hist) const;

private:
    std::vector<double> centers_;
    Eigen::MatrixXd table_;
};

ReconstructionReport reconstruct(const QuadratureHistogram& hist, const TomographyConfig& config = {});
ReconstructionReport reconstruct(const QuadratureHistogram& hist, const TomographyConfig& config,
                                 const ProjectorMatrix& projector);

/// sum_b f_b dx_b log(sum_N p(N) |<N|x_b>|^2) over occupied bins.
double log_likelihood(const QuadratureHistogram& hist, const FockDistribution& d);

}  // namespace phav
