#include "phav/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phav/error.hpp"

namespace phav {

namespace {

constexpr double kSupportWarningMass = 1e-3;
constexpr double kDefaultConvergence = 1e-8;

Eigen::VectorXd bin_weights(const QuadratureHistogram& hist) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(hist.bins()));
    for (std::size_t b = 0; b < hist.bins(); ++b) w(static_cast<Eigen::Index>(b)) = hist.densities()[b] * hist.width(b);
    return w;
}

void check_support(const QuadratureHistogram& hist, double support) {
    for (std::size_t b = 0; b < hist.bins(); ++b) {
        if (hist.densities()[b] > 0.0 && std::abs(hist.center(b)) > support) {
            throw ValidationError("occupied bin at x = " + std::to_string(hist.center(b)) +
                                  " lies outside the quadrature support " + std::to_string(support));
        }
    }
}

// Model density sum_N p(N) |<N|x_b>|^2 at every bin; throws on a nonpositive
// value where the histogram has mass.
Eigen::VectorXd model_density(const Eigen::MatrixXd& table, const Eigen::VectorXd& p, const Eigen::VectorXd& w) {
    Eigen::VectorXd t = table * p;
    for (Eigen::Index b = 0; b < t.size(); ++b) {
        if (w(b) > 0.0 && !(t(b) > 0.0)) {
            throw NumericalError("model quadrature density vanishes at occupied bin " + std::to_string(b));
        }
    }
    return t;
}

double log_likelihood_from(const Eigen::VectorXd& t, const Eigen::VectorXd& w) {
    double ll = 0.0;
    for (Eigen::Index b = 0; b < t.size(); ++b)
        if (w(b) > 0.0) ll += w(b) * std::log(t(b));
    return ll;
}

}  // namespace

void TomographyConfig::validate() const {
    require_argument(n_max >= 1 && n_max <= kMaxPhotonNumber,
                     "n_max must lie in [1, " + std::to_string(kMaxPhotonNumber) + "]");
    require_argument(iterations >= 1, "iterations must be >= 1");
    require_argument(early_stop_delta >= 0.0, "early_stop_delta must be >= 0");
    require_argument(quadrature_support > 0.0 && quadrature_support <= 35.0,
                     "quadrature_support must lie in (0, 35]");
}

double phav_projector(int n, double x) { return fock_quadrature_density(n, x); }

ProjectorMatrix::ProjectorMatrix(const QuadratureHistogram& grid, int n_max) : centers_(grid.centers()) {
    require_argument(n_max >= 1 && n_max <= kMaxPhotonNumber, "n_max out of range");
    const auto bins = static_cast<Eigen::Index>(grid.bins());
    table_.resize(bins, n_max + 1);
    std::vector<double> row(static_cast<std::size_t>(n_max) + 1);
    for (Eigen::Index b = 0; b < bins; ++b) {
        fock_quadrature_densities(centers_[static_cast<std::size_t>(b)], row);
        for (int n = 0; n <= n_max; ++n) table_(b, n) = row[static_cast<std::size_t>(n)];
    }
}

bool ProjectorMatrix::matches(const QuadratureHistogram& hist) const {
    if (hist.bins() != centers_.size()) return false;
    for (std::size_t b = 0; b < centers_.size(); ++b)
        if (hist.center(b) != centers_[b]) return false;
    return true;
}

ReconstructionReport reconstruct(const QuadratureHistogram& hist, const TomographyConfig& config) {
    config.validate();
    if (hist.bins() == 0) throw ArgumentError("cannot reconstruct from an empty histogram");
    check_support(hist, config.quadrature_support);
    return reconstruct(hist, config, ProjectorMatrix(hist, config.n_max));
}

ReconstructionReport reconstruct(const QuadratureHistogram& hist, const TomographyConfig& config,
                                 const ProjectorMatrix& projector) {
    config.validate();
    if (hist.bins() == 0) throw ArgumentError("cannot reconstruct from an empty histogram");
    if (projector.n_max() != config.n_max) throw ArgumentError("projector n_max differs from config n_max");
    if (!projector.matches(hist)) throw ArgumentError("projector was built for a different bin grid");
    check_support(hist, config.quadrature_support);

    const Eigen::MatrixXd& table = projector.table();
    const Eigen::VectorXd w = bin_weights(hist);
    const Eigen::Index dim = table.cols();
    Eigen::VectorXd p = Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim));

    ReconstructionReport report{.distribution = FockDistribution::point_mass(0, config.n_max),
                                .log_likelihood_per_iteration = {},
                                .iterations_run = 0,
                                .converged = false,
                                .support_warning = false};
    report.log_likelihood_per_iteration.reserve(static_cast<std::size_t>(config.iterations) + 1);

    Eigen::VectorXd t = model_density(table, p, w);
    report.log_likelihood_per_iteration.push_back(log_likelihood_from(t, w));
    const double threshold = config.early_stop_delta > 0.0 ? config.early_stop_delta : kDefaultConvergence;
    double last_delta = std::numeric_limits<double>::infinity();

    for (int k = 0; k < config.iterations; ++k) {
        // R_N = sum_b w_b |<N|x_b>|^2 / t_b ; p <- p R^2, renormalized.
        Eigen::VectorXd ratio = Eigen::VectorXd::Zero(t.size());
        for (Eigen::Index b = 0; b < t.size(); ++b)
            if (w(b) > 0.0) ratio(b) = w(b) / t(b);
        const Eigen::VectorXd r = table.transpose() * ratio;
        Eigen::VectorXd next = p.cwiseProduct(r.cwiseProduct(r));
        const double total = next.sum();
        if (!(total > 0.0) || !std::isfinite(total)) {
            throw NumericalError("iteration " + std::to_string(k + 1) + " produced a non-normalizable state");
        }
        next /= total;
        last_delta = (next - p).cwiseAbs().maxCoeff();
        p = std::move(next);
        t = model_density(table, p, w);
        report.log_likelihood_per_iteration.push_back(log_likelihood_from(t, w));
        report.iterations_run = k + 1;
        if (config.early_stop_delta > 0.0 && last_delta < config.early_stop_delta) break;
    }

    report.distribution = FockDistribution::normalized(std::vector<double>(p.data(), p.data() + p.size()));
    report.converged = last_delta < threshold;
    report.support_warning =
        hist.mass_beyond(std::sqrt(2.0 * config.n_max + 1.0)) >= kSupportWarningMass;
    return report;
}

double log_likelihood(const QuadratureHistogram& hist, const FockDistribution& d) {
    if (hist.bins() == 0) throw ArgumentError("empty histogram");
    const ProjectorMatrix projector(hist, d.n_max());
    const Eigen::VectorXd w = bin_weights(hist);
    const auto probs = d.probs();
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
    return log_likelihood_from(model_density(projector.table(), p, w), w);
}

}  // namespace phav
