#include "speclab/transfer.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace speclab {

namespace {

/// Sums of logs over the sample that do not depend on E.
struct ChainLogs {
    cplx sum_log_b{0.0, 0.0};
    cplx sum_log_c{0.0, 0.0};
};

ChainLogs chain_logs(const MatrixSample& s)
{
    ChainLogs out;
    for (int k = 0; k < s.n(); ++k) {
        out.sum_log_b += std::log(s.b[k]);
        out.sum_log_c += std::log(s.c[k]);
    }
    return out;
}

void check_chain(const MatrixSample& s)
{
    if (s.n() < 1 || s.b.size() != s.a.size() || s.c.size() != s.a.size()) {
        throw InvalidArgument("transfer chain needs equal-length diagonals, n >= 1");
    }
}

TransferResult product(const MatrixSample& s, cplx energy, bool with_log_det)
{
    check_chain(s);
    TransferResult r;
    r.n = s.n();
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
    double log_scale = 0.0;
    for (int k = 0; k < r.n; ++k) {
        const cplx a = s.a[k];
        const cplx b = s.b[k];
        const cplx c = s.c[k];
        if (b == cplx{0.0, 0.0}) {
            throw SingularFactorError("transfer factor with b = 0 at site " + std::to_string(k + 1));
        }
        // left-multiply by [[(E-a)/b, -c/b], [1, 0]] without forming it
        const cplx p = (energy - a) / b;
        const cplx q = -c / b;
        const cplx r00 = p * acc(0, 0) + q * acc(1, 0);
        const cplx r01 = p * acc(0, 1) + q * acc(1, 1);
        acc(1, 0) = acc(0, 0);
        acc(1, 1) = acc(0, 1);
        acc(0, 0) = r00;
        acc(0, 1) = r01;

        const double largest = acc.cwiseAbs().maxCoeff();
        if (largest > 0.0 && std::isfinite(largest)) {
            acc /= largest;
            log_scale += std::log(largest);
        }
        if (with_log_det) {
            r.log_det += std::log(c) - std::log(b);
        }
    }
    r.reduced = acc;
    r.log_scale = log_scale;
    return r;
}

LogPolar duality_from_parts(const TransferResult& t, const ChainLogs& logs, const Deformation& d)
{
    const double n = t.n;
    const cplx log_z_n{n * d.xi(), n * d.phi()};
    const cplx i_pi{0.0, std::numbers::pi};

    std::array<cplx, 3> terms;
    int count = 0;
    const cplx trace = t.reduced.trace();
    if (trace != cplx{0.0, 0.0}) {
        terms[count++] = logs.sum_log_b + t.log_scale + std::log(trace);
    }
    terms[count++] = log_z_n + logs.sum_log_c + i_pi;
    terms[count++] = -log_z_n + logs.sum_log_b + i_pi;

    LogPolar out = log_sum_exp(std::span<const cplx>(terms.data(), static_cast<std::size_t>(count)));
    out.phase = wrap_phase(out.phase);
    return out;
}

} // namespace

TransferResult transfer_product(const MatrixSample& s, cplx energy)
{
    return product(s, energy, true);
}

LyapunovPair lyapunov_exponents(const TransferResult& t)
{
    const cplx tr = t.reduced.trace();
    // det of the reduced matrix from the exact log determinant; may underflow to 0
    const cplx det_reduced = std::exp(t.log_det - 2.0 * t.log_scale);
    const cplx disc = std::sqrt(tr * tr - 4.0 * det_reduced);
    const cplx root_a = 0.5 * (tr + disc);
    const cplx root_b = 0.5 * (tr - disc);
    const cplx big = std::abs(root_a) >= std::abs(root_b) ? root_a : root_b;

    const double n = t.n;
    LyapunovPair out;
    if (std::abs(big) == 0.0) {
        // nilpotent reduced product: both exponents from the determinant
        out.xi_plus = out.xi_minus = 0.5 * t.log_det.real() / n;
        return out;
    }
    const double log_big = t.log_scale + std::log(std::abs(big));
    out.xi_plus = log_big / n;
    out.xi_minus = (t.log_det.real() - log_big) / n;
    if (out.xi_minus > out.xi_plus) {
        std::swap(out.xi_plus, out.xi_minus);
    }
    return out;
}

LyapunovPair lyapunov_exponents(const MatrixSample& s, cplx energy)
{
    return lyapunov_exponents(transfer_product(s, energy));
}

LogPolar duality_det(const MatrixSample& s, cplx energy, const Deformation& d)
{
    validate(s);
    return duality_from_parts(product(s, energy, false), chain_logs(s), d);
}

namespace {

struct ContourWalk {
    const MatrixSample& sample;
    const ChainLogs logs;
    const Deformation& z;
    double radius;
    int evaluations = 0;
    double min_log = std::numeric_limits<double>::infinity();
    bool hit_zero = false;

    LogPolar eval(double theta)
    {
        ++evaluations;
        const cplx energy = std::polar(radius, theta);
        LogPolar v = duality_from_parts(product(sample, energy, false), logs, z);
        min_log = std::min(min_log, v.log_magnitude);
        if (v.singular || v.reduced_precision) {
            hit_zero = true;
        }
        return v;
    }

    /// Phase change from theta0 to theta1, bisecting while a single step
    /// jumps by more than pi/2.
    double increment(double theta0, double phase0, double theta1, double phase1, int depth)
    {
        const double step = wrap_phase(phase1 - phase0);
        if (std::abs(step) <= 0.5 * std::numbers::pi || depth >= 40 || hit_zero) {
            return step;
        }
        const double mid = 0.5 * (theta0 + theta1);
        const double phase_mid = eval(mid).phase;
        return increment(theta0, phase0, mid, phase_mid, depth + 1) +
               increment(mid, phase_mid, theta1, phase1, depth + 1);
    }

    double total_phase(int m_points)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        std::vector<double> phases(static_cast<std::size_t>(m_points) + 1);
        for (int j = 0; j < m_points; ++j) {
            phases[j] = eval(two_pi * j / m_points).phase;
        }
        phases[m_points] = phases[0];
        double total = 0.0;
        for (int j = 0; j < m_points; ++j) {
            total += increment(two_pi * j / m_points, phases[j], two_pi * (j + 1) / m_points,
                               phases[j + 1], 0);
        }
        return total;
    }
};

} // namespace

WindingReport winding_number(const MatrixSample& s, const Deformation& d, double radius, int m_points)
{
    validate(s);
    if (!(radius > 0.0)) {
        throw InvalidArgument("winding_number needs radius > 0");
    }
    if (m_points < 8 * s.n()) {
        throw InvalidArgument("winding_number needs m_points >= 8n (" + std::to_string(8 * s.n()) +
                              "), got " + std::to_string(m_points));
    }
    const ChainLogs logs = chain_logs(s);

    WindingReport report;
    report.z = d;
    int total_evaluations = 0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double r = attempt == 0 ? radius : radius * (1.0 + 1e-6);
        ContourWalk walk{s, logs, d, r};
        const double total = walk.total_phase(m_points);
        total_evaluations += walk.evaluations;
        if (walk.hit_zero) {
            continue;
        }
        report.radius = r;
        report.nudged = attempt > 0;
        report.raw_winding = total / (2.0 * std::numbers::pi);
        report.winding = static_cast<int>(std::lround(report.raw_winding));
        report.samples_on_contour = total_evaluations;
        report.min_log_det_on_contour = walk.min_log;
        return report;
    }
    throw ContourError("contour |E| = " + std::to_string(radius) +
                       " passes through a zero of det[E - M_b(z)] even after a nudge");
}

} // namespace speclab
