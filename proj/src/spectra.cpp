#include "speclab/spectra.hpp"

#include "speclab/error.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;

/// Antiderivative of x log x, zero at x = 0.
double x_log_x_integral(double x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    return 0.5 * x * x * std::log(x) - 0.25 * x * x;
}

void check_normalized(const DensityProfile& p)
{
    if (p.bins() < 1 || p.bin_edges.size() != p.bins() + 1) {
        throw InvalidArgument("malformed density profile");
    }
    const double norm = p.normalization();
    if (std::abs(norm - 1.0) > 1e-6) {
        throw InvalidArgument("density profile is not normalized (integral = " + std::to_string(norm) + ")");
    }
}

} // namespace

double DensityProfile::normalization() const
{
    double sum = 0.0;
    for (int i = 0; i < bins(); ++i) {
        sum += density[i] * midpoint(i);
    }
    return 2.0 * kPi * sum * width();
}

RadialHistogram::RadialHistogram(int bins, double r_max)
    : bins_{bins}, r_max_{r_max}, counts_(static_cast<std::size_t>(std::max(bins, 0)), 0)
{
    if (bins < 1) {
        throw InvalidArgument("radial histogram needs bins >= 1");
    }
    if (!(r_max > 0.0)) {
        throw InvalidArgument("radial histogram needs r_max > 0");
    }
}

void RadialHistogram::add(std::span<const cplx> eigenvalues)
{
    const double scale = bins_ / r_max_;
    for (const cplx& e : eigenvalues) {
        ++total_;
        const double r = std::abs(e);
        if (r > r_max_) {
            ++overflow_;
            continue;
        }
        const int bin = std::min(static_cast<int>(r * scale), bins_ - 1);
        ++counts_[static_cast<std::size_t>(bin)];
    }
}

void RadialHistogram::merge(const RadialHistogram& other)
{
    if (other.bins_ != bins_ || other.r_max_ != r_max_) {
        throw InvalidArgument("cannot merge histograms with different binning");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
    total_ += other.total_;
    overflow_ += other.overflow_;
}

DensityProfile RadialHistogram::profile() const
{
    if (total_ == 0) {
        throw InvalidArgument("radial density of an empty eigenvalue set");
    }
    DensityProfile p;
    p.bin_edges = Eigen::VectorXd::LinSpaced(bins_ + 1, 0.0, r_max_);
    p.density.resize(bins_);
    p.counts = counts_;
    p.total = total_;
    p.overflow = overflow_;
    p.n0.resize(bins_ + 1);
    p.n0[0] = 0.0;
    std::int64_t running = 0;
    const double total = static_cast<double>(total_);
    for (int i = 0; i < bins_; ++i) {
        const double lo = p.bin_edges[i];
        const double hi = p.bin_edges[i + 1];
        p.density[i] = static_cast<double>(counts_[i]) / (total * kPi * (hi * hi - lo * lo));
        running += counts_[i];
        p.n0[i + 1] = static_cast<double>(running) / total;
    }
    return p;
}

DensityProfile radial_density(std::span<const cplx> eigenvalues, int bins, double r_max)
{
    RadialHistogram h(bins, r_max);
    h.add(eigenvalues);
    return h.profile();
}

DensityProfile smooth(const DensityProfile& p, int window)
{
    if (window < 1 || window > p.bins()) {
        throw InvalidArgument("smoothing window must lie in [1, bins]");
    }
    const int half = window / 2;
    const bool even = window % 2 == 0;
    DensityProfile out = p;
    for (int i = 0; i < p.bins(); ++i) {
        double sum = 0.0;
        double weight = 0.0;
        for (int j = i - half; j <= i + half; ++j) {
            if (j < 0 || j >= p.bins()) {
                continue;
            }
            const double w = (even && (j == i - half || j == i + half)) ? 0.5 : 1.0;
            sum += w * p.density[j];
            weight += w;
        }
        out.density[i] = sum / weight;
    }
    return out;
}

MomentEstimate moments(std::span<const Eigen::VectorXcd> samples, int k)
{
    if (samples.empty()) {
        throw InvalidArgument("moments of an empty pool");
    }
    if (k < 1) {
        throw InvalidArgument("moment order must be positive");
    }
    std::vector<double> means;
    means.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.size() == 0) {
            throw InvalidArgument("moments: empty sample");
        }
        means.push_back(s.cwiseAbs().array().pow(k).mean());
    }
    const double count = static_cast<double>(means.size());
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / count;
    MomentEstimate out{mean, 0.0};
    if (means.size() > 1) {
        double ss = 0.0;
        for (double m : means) {
            ss += (m - mean) * (m - mean);
        }
        out.std_error = std::sqrt(ss / (count - 1.0) / count);
    }
    return out;
}

double moment(std::span<const cplx> pooled, int k)
{
    if (pooled.empty()) {
        throw InvalidArgument("moments of an empty pool");
    }
    double sum = 0.0;
    for (const cplx& e : pooled) {
        sum += std::pow(std::abs(e), k);
    }
    return sum / static_cast<double>(pooled.size());
}

double thouless_gamma(const DensityProfile& p, double r, double mean_log_b)
{
    check_normalized(p);
    if (!(r >= 0.0)) {
        throw InvalidArgument("thouless_gamma needs r >= 0");
    }
    if (r >= p.r_max()) {
        return std::log(r) - mean_log_b;
    }

    double inside = 0.0;   // N_0(r)
    double outside = 0.0;  // 2 pi int_r^rmax r' rho log r' dr'
    for (int i = 0; i < p.bins(); ++i) {
        const double lo = p.bin_edges[i];
        const double hi = p.bin_edges[i + 1];
        const double rho = p.density[i];
        if (hi <= r) {
            inside += kPi * rho * (hi * hi - lo * lo);
        } else if (lo >= r) {
            outside += 2.0 * kPi * rho * (x_log_x_integral(hi) - x_log_x_integral(lo));
        } else {
            inside += kPi * rho * (r * r - lo * lo);
            outside += 2.0 * kPi * rho * (x_log_x_integral(hi) - x_log_x_integral(r));
        }
    }
    const double potential = r > 0.0 ? std::log(r) * inside : 0.0;
    return potential + outside - mean_log_b;
}

LyapunovCurve lyapunov_curve(const DensityProfile& p, const Eigen::VectorXd& radii, double mean_log_b)
{
    LyapunovCurve c;
    c.radii = radii;
    c.gamma.resize(radii.size());
    c.mean_log_b = mean_log_b;
    for (Eigen::Index i = 0; i < radii.size(); ++i) {
        c.gamma[i] = thouless_gamma(p, radii[i], mean_log_b);
    }
    return c;
}

LyapunovCurve lyapunov_curve_on_midpoints(const DensityProfile& p, double mean_log_b)
{
    Eigen::VectorXd mids(p.bins());
    for (int i = 0; i < p.bins(); ++i) {
        mids[i] = p.midpoint(i);
    }
    return lyapunov_curve(p, mids, mean_log_b);
}

Eigen::VectorXd poisson_residual(const DensityProfile& p, const LyapunovCurve& curve)
{
    const int bins = p.bins();
    if (bins < 3) {
        throw InvalidArgument("poisson_residual needs at least 3 bins");
    }
    if (curve.radii.size() != bins || curve.gamma.size() != bins) {
        throw InvalidArgument("curve must be evaluated on the profile's bin midpoints");
    }
    const double h = p.width();
    for (int i = 0; i < bins; ++i) {
        if (std::abs(curve.radii[i] - p.midpoint(i)) > 1e-9 * h) {
            throw InvalidArgument("curve radii do not match the profile's bin midpoints");
        }
    }
    Eigen::VectorXd out(bins - 2);
    for (int i = 1; i + 1 < bins; ++i) {
        const double r = curve.radii[i];
        const double flux_out = (r + 0.5 * h) * (curve.gamma[i + 1] - curve.gamma[i]);
        const double flux_in = (r - 0.5 * h) * (curve.gamma[i] - curve.gamma[i - 1]);
        out[i - 1] = (flux_out - flux_in) / (h * h * r) - 2.0 * kPi * p.density[i];
    }
    return out;
}

HolePrediction hole_radius(const LyapunovCurve& curve, double xi)
{
    const Eigen::Index count = curve.radii.size();
    if (count < 2 || curve.gamma.size() != count) {
        throw InvalidArgument("hole_radius needs a curve with at least 2 points");
    }
    for (Eigen::Index i = 1; i < count; ++i) {
        if (!(curve.radii[i] > curve.radii[i - 1])) {
            throw InvalidArgument("curve radii must be strictly increasing");
        }
        if (curve.gamma[i] < curve.gamma[i - 1] - 1e-12) {
            throw InvalidArgument("Lyapunov curve is not monotone at r = " + std::to_string(curve.radii[i]));
        }
    }

    HolePrediction out;
    out.xi = xi;
    out.gamma_at_zero = curve.gamma[0];
    if (xi <= out.gamma_at_zero) {
        return out;
    }
    if (xi > curve.gamma[count - 1]) {
        out.radius = std::max(curve.radii[count - 1], std::exp(xi + curve.mean_log_b));
        return out;
    }

    auto interpolate = [&](double r) {
        const double* begin = curve.radii.data();
        const double* it = std::upper_bound(begin, begin + count, r);
        const Eigen::Index hi = std::clamp<Eigen::Index>(it - begin, 1, count - 1);
        const Eigen::Index lo = hi - 1;
        const double t = (r - curve.radii[lo]) / (curve.radii[hi] - curve.radii[lo]);
        return curve.gamma[lo] + t * (curve.gamma[hi] - curve.gamma[lo]);
    };

    double lo = curve.radii[0];
    double hi = curve.radii[count - 1];
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double g = interpolate(mid);
        if (std::abs(g - xi) <= 1e-6 && hi - lo < 1e-9) {
            break;
        }
        if (g < xi) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14) {
            break;
        }
    }
    out.radius = mid;
    return out;
}

double plateau_fit(const DensityProfile& p, double r_hi)
{
    double weighted = 0.0;
    double area = 0.0;
    for (int i = 0; i < p.bins(); ++i) {
        if (p.midpoint(i) >= r_hi) {
            break;
        }
        const double lo = p.bin_edges[i];
        const double hi = p.bin_edges[i + 1];
        const double a = kPi * (hi * hi - lo * lo);
        weighted += a * p.density[i];
        area += a;
    }
    if (area == 0.0) {
        throw InvalidArgument("plateau window contains no bins");
    }
    return weighted / area;
}

QuadraticFit fit_quadratic_near_origin(const LyapunovCurve& curve, double r_hi)
{
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < curve.radii.size(); ++i) {
        if (curve.radii[i] <= r_hi) {
            rows.push_back(i);
        }
    }
    if (rows.size() < 2) {
        throw InvalidArgument("quadratic fit needs at least 2 points below r_hi");
    }
    Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), 2);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const double r = curve.radii[rows[j]];
        design(static_cast<Eigen::Index>(j), 0) = 1.0;
        design(static_cast<Eigen::Index>(j), 1) = r * r;
        rhs[static_cast<Eigen::Index>(j)] = curve.gamma[rows[j]];
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
    return {coef[0], coef[1], r_hi};
}

} // namespace speclab
