#pragma once

#include "speclab/ensemble.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace speclab {

/// Radial eigenvalue density rho_0(|E|), normalized per unit area so that
/// 2 pi sum_i density_i mid_i width = 1.
struct DensityProfile {
    Eigen::VectorXd bin_edges; ///< bins + 1 radii, uniform over [0, r_max]
    Eigen::VectorXd density;
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;    ///< all pooled eigenvalues, overflow included
    std::int64_t overflow = 0; ///< eigenvalues with |E| > r_max
    Eigen::VectorXd n0;        ///< fraction inside each edge

    int bins() const noexcept { return static_cast<int>(density.size()); }
    double width() const { return bin_edges[1] - bin_edges[0]; }
    double r_max() const { return bin_edges[bin_edges.size() - 1]; }
    double midpoint(int i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }

    /// 2 pi sum_i density_i mid_i width.
    double normalization() const;
};

/// Mergeable radial histogram; partial histograms of disjoint sample sets
/// combine exactly (integer counts).
class RadialHistogram {
public:
    RadialHistogram(int bins, double r_max);

    void add(std::span<const cplx> eigenvalues);
    void merge(const RadialHistogram& other);

    DensityProfile profile() const;

private:
    int bins_;
    double r_max_;
    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
    std::int64_t overflow_ = 0;
};

/// density_i = counts_i / (total pi (edge_{i+1}^2 - edge_i^2)).
DensityProfile radial_density(std::span<const cplx> eigenvalues, int bins, double r_max);

/// Centred moving average of the density. Odd windows average `window`
/// bins; even windows use the 2 x window average (window + 1 taps, half
/// weight at both ends). Windows are truncated at the edges.
DensityProfile smooth(const DensityProfile& p, int window);

struct MomentEstimate {
    double value = 0.0;
    /// Standard error of the per-sample means.
    double std_error = 0.0;
};

/// mu_k = < (1/n) sum_i |E_i|^k >, one span per sample.
MomentEstimate moments(std::span<const Eigen::VectorXcd> samples, int k);

/// Convenience overload for a single pooled list (std_error = 0).
double moment(std::span<const cplx> pooled, int k);

/// gamma(r) = log r N_0(r) + 2 pi int_r^inf r' rho_0(r') log r' dr' - mean_log_b,
/// integrating the binned density exactly as a piecewise-constant area
/// density. Returns log r - mean_log_b for r >= r_max.
double thouless_gamma(const DensityProfile& p, double r, double mean_log_b = -0.5);

struct LyapunovCurve {
    Eigen::VectorXd radii;
    Eigen::VectorXd gamma;
    double mean_log_b = -0.5;
};

/// thouless_gamma on the given radii.
LyapunovCurve lyapunov_curve(const DensityProfile& p, const Eigen::VectorXd& radii,
                             double mean_log_b = -0.5);

/// The curve evaluated on the profile's bin midpoints.
LyapunovCurve lyapunov_curve_on_midpoints(const DensityProfile& p, double mean_log_b = -0.5);

/// (1/r) d/dr (r dgamma/dr) - 2 pi rho_0 on interior bins 1..bins-2 (central
/// differences). The curve must sit on the profile's midpoints.
Eigen::VectorXd poisson_residual(const DensityProfile& p, const LyapunovCurve& curve);

struct HolePrediction {
    double xi = 0.0;
    std::optional<double> radius;
    double gamma_at_zero = 0.0;
};

/// Radius where gamma(r) = xi, by bisection on the piecewise-linear curve to
/// |gamma - xi| <= 1e-6; absent when xi <= gamma(0). Past the end of the
/// curve the closed form log r - mean_log_b is inverted.
HolePrediction hole_radius(const LyapunovCurve& curve, double xi);

/// Weighted least-squares constant (weights = bin area) through the density
/// on bins with midpoint below r_hi.
double plateau_fit(const DensityProfile& p, double r_hi = 0.5);

struct QuadraticFit {
    double c0 = 0.0;
    double c2 = 0.0;
    double r_hi = 0.0;
};

/// Least-squares fit gamma(r) = c0 + c2 r^2 on curve points with r <= r_hi.
QuadraticFit fit_quadratic_near_origin(const LyapunovCurve& curve, double r_hi = 0.5);

} // namespace speclab
