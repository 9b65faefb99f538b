#include "speclab/localization.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

IdealVariance ideal_variance(double gamma, int n)
{
    if (!(gamma > 0.0)) {
        throw InvalidArgument("ideal_variance needs gamma > 0");
    }
    if (n < 1) {
        throw InvalidArgument("ideal_variance needs n >= 1");
    }
    // symmetric profile: the mean is 0, only |k| enters
    const int half = n / 2;
    double mass = 1.0;
    double second = 0.0;
    for (int k = 1; k <= half; ++k) {
        const double w = std::exp(-2.0 * gamma * k);
        if (w == 0.0) {
            break;
        }
        mass += 2.0 * w;
        second += 2.0 * w * static_cast<double>(k) * k;
    }
    return {std::sqrt(second / mass), gamma * n < 5.0};
}

std::optional<double> variance_to_rate(double variance, int n)
{
    if (!(variance >= 0.0)) {
        throw InvalidArgument("variance_to_rate needs variance >= 0");
    }
    if (variance >= ideal_variance(kMinRate, n).variance) {
        return std::nullopt;
    }
    double lo = kMinRate; // ideal_variance(lo) > variance
    double hi = kMaxRate;
    if (variance <= ideal_variance(hi, n).variance) {
        return hi;
    }
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        if (ideal_variance(mid, n).variance > variance) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<LocalizationRecord> localization_records(const Spectrum& spectrum)
{
    if (!spectrum.vectors) {
        throw InvalidArgument("localization_records needs eigenvectors");
    }
    const Eigen::MatrixXcd& vectors = *spectrum.vectors;
    const int n = static_cast<int>(vectors.rows());
    std::vector<LocalizationRecord> out;
    out.reserve(static_cast<std::size_t>(vectors.cols()));
    for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
        LocalizationRecord rec;
        rec.eigenvalue = spectrum.eigenvalues[i];
        rec.flagged = spectrum.flagged[static_cast<std::size_t>(i)];

        const Eigen::VectorXcd u = vectors.col(i).normalized();
        const PositionStats stats = position_variance(u);
        rec.variance = stats.variance;
        rec.mean_position = stats.mean_position;

        Eigen::Index peak = 0;
        u.cwiseAbs2().maxCoeff(&peak);
        rec.seam_flag = peak < 5 || peak >= n - 5;

        if (!rec.flagged) {
            rec.rate = variance_to_rate(rec.variance, n);
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<LocalizationRecord> localization_spectrum(const Eigen::MatrixXcd& m)
{
    return localization_records(eigenpairs(m));
}

HaloMatchReport halo_match(std::span<const cplx> before, std::span<const cplx> after, double tol)
{
    if (!(tol > 0.0)) {
        throw InvalidArgument("halo_match needs tol > 0");
    }
    const Pairing p = greedy_pairing(before, after, tol);
    HaloMatchReport out;
    out.tolerance = tol;
    out.matched.reserve(p.pairs.size());
    for (const auto& m : p.pairs) {
        out.matched.push_back({before[m.first], after[m.second], m.distance});
    }
    out.unmatched_undeformed = p.unmatched_first;
    out.unmatched_deformed = p.unmatched_second;
    return out;
}

Classification classify(std::span<const cplx> eigenvalues, double hole_r, double band)
{
    if (!(hole_r > 0.0) || !(band > 0.0)) {
        throw InvalidArgument("classify needs hole_r > 0 and band > 0");
    }
    Classification out;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const double r = std::abs(eigenvalues[i]);
        const int idx = static_cast<int>(i);
        if (std::abs(r - hole_r) <= band) {
            out.circle.push_back(idx);
        } else if (r > hole_r + band) {
            out.halo.push_back(idx);
        } else {
            out.anomalies.push_back(idx);
        }
    }
    return out;
}

Classification classify(std::span<const cplx> eigenvalues, const HolePrediction& hole, double band)
{
    if (!hole.radius) {
        throw InvalidArgument("classify: no hole is predicted at xi = " + std::to_string(hole.xi));
    }
    return classify(eigenvalues, *hole.radius, band);
}

} // namespace speclab
