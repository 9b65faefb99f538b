#pragma once

#include "speclab/eigensolver.hpp"
#include "speclab/ensemble.hpp"
#include "speclab/error.hpp"
#include "speclab/spectra.hpp"
#include "speclab/spectral_match.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace speclab {

struct PositionStats {
    double variance = 0.0; ///< (sum_k |u_k|^2 (k - kbar)^2)^(1/2), in sites
    double mean_position = 0.0;
};

/// Spread of |u_k|^2 over the linear index k = 1..n (no periodic wrap).
/// u must be unit-norm within 1e-10.
template <typename Derived>
PositionStats position_variance(const Eigen::MatrixBase<Derived>& u)
{
    const auto weights = u.cwiseAbs2().eval();
    const double norm2 = weights.sum();
    if (std::abs(norm2 - 1.0) > 1e-10) {
        throw InvalidArgument("position_variance needs a unit-norm vector");
    }
    PositionStats out;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        out.mean_position += static_cast<double>(k + 1) * weights[k];
    }
    double second = 0.0;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const double dk = static_cast<double>(k + 1) - out.mean_position;
        second += weights[k] * dk * dk;
    }
    out.variance = std::sqrt(second);
    return out;
}

struct IdealVariance {
    double variance = 0.0;
    /// gamma n < 5: the truncated profile is far from the infinite one.
    bool truncation_unreliable = false;
};

/// Position spread of the profile |v_k|^2 ~ exp(-2 gamma |k|) on
/// k = -n/2 .. n/2, renormalized, summed directly.
IdealVariance ideal_variance(double gamma, int n);

/// Bounds of the rate search.
inline constexpr double kMinRate = 1e-3;
inline constexpr double kMaxRate = 20.0;

/// Rate gamma with ideal_variance(gamma, n) = variance, by bisection on
/// [1e-3, 20] to 1e-6. Absent when the state is more spread than the
/// slowest admissible rate (delocalized); clamped to 20 for states tighter
/// than the fastest (including single-site states).
std::optional<double> variance_to_rate(double variance, int n);

struct LocalizationRecord {
    cplx eigenvalue;
    double variance = 0.0;
    std::optional<double> rate;
    double mean_position = 0.0;
    bool flagged = false;   ///< ill-conditioned pair; no rate
    bool seam_flag = false; ///< peak within 5 sites of either end
};

/// One record per eigenpair of m.
std::vector<LocalizationRecord> localization_spectrum(const Eigen::MatrixXcd& m);

/// Records built from an existing decomposition (vectors required).
std::vector<LocalizationRecord> localization_records(const Spectrum& spectrum);

struct HaloMatchReport {
    struct Entry {
        cplx before;
        cplx after;
        double displacement = 0.0;
    };
    std::vector<Entry> matched;
    int unmatched_undeformed = 0;
    int unmatched_deformed = 0;
    double tolerance = 0.0;
};

/// Greedy nearest pairing of two spectra, keeping pairs displaced by at most tol.
HaloMatchReport halo_match(std::span<const cplx> before, std::span<const cplx> after, double tol);

struct Classification {
    std::vector<int> circle;    ///< ||E| - hole_r| <= band
    std::vector<int> halo;      ///< |E| > hole_r + band
    std::vector<int> anomalies; ///< |E| < hole_r - band
};

Classification classify(std::span<const cplx> eigenvalues, double hole_r, double band);

/// Refuses when no hole is predicted.
Classification classify(std::span<const cplx> eigenvalues, const HolePrediction& hole, double band);

} // namespace speclab
