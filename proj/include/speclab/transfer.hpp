#pragma once

#include "speclab/ensemble.hpp"
#include "speclab/error.hpp"
#include "speclab/log_polar.hpp"
#include "speclab/operators.hpp"

#include <Eigen/Core>

#include <complex>

namespace speclab {

/// One step of the recursion c_k u_{k-1} + a_k u_k + b_k u_{k+1} = E u_k:
/// [[(E - a)/b, -c/b], [1, 0]] maps (u_k, u_{k-1}) to (u_{k+1}, u_k).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> transfer_factor(Scalar a, Scalar b, Scalar c, Scalar energy)
{
    if (b == Scalar(0)) {
        throw SingularFactorError("transfer factor with b = 0");
    }
    Eigen::Matrix<Scalar, 2, 2> t;
    t << (energy - a) / b, -c / b, Scalar(1), Scalar(0);
    return t;
}

/// t(E) = T_n ... T_1 held as exp(log_scale) * reduced.
struct TransferResult {
    double log_scale = 0.0;
    Eigen::Matrix2cd reduced = Eigen::Matrix2cd::Identity();
    /// log det t(E) = sum_k log(c_k / b_k), principal branch per factor.
    cplx log_det{0.0, 0.0};
    int n = 0;

    /// exp(log_scale) * reduced; overflows for long chains.
    Eigen::Matrix2cd full() const { return std::exp(log_scale) * reduced; }
};

/// Ordered product over k = 1..n, renormalized by the largest entry after
/// every factor.
TransferResult transfer_product(const MatrixSample& s, cplx energy);

struct LyapunovPair {
    double xi_plus = 0.0;
    double xi_minus = 0.0;
};

/// (1/n) log|lambda_pm| of the eigenvalues of t(E), xi_plus >= xi_minus.
/// xi_plus + xi_minus equals Re(log_det)/n by construction.
LyapunovPair lyapunov_exponents(const TransferResult& t);
LyapunovPair lyapunov_exponents(const MatrixSample& s, cplx energy);

/// det[E - M_b(z)] through the 2x2 transfer matrix:
///   det[E - M_b(z)] = -z^n (b_1...b_n) det[t(E) - z^{-n}]
///                   = (b_1...b_n) tr t(E) - z^n (c_1...c_n) - z^{-n} (b_1...b_n),
/// each term kept as a logarithm and summed with the largest factored out.
LogPolar duality_det(const MatrixSample& s, cplx energy, const Deformation& d);

struct WindingReport {
    double radius = 0.0;
    Deformation z;
    int winding = 0;
    /// Total evaluations of det[E - M_b(z)] including refinements.
    int samples_on_contour = 0;
    /// Smallest log|det| seen on the contour (closest approach to a zero).
    double min_log_det_on_contour = 0.0;
    /// Raw accumulated phase / 2 pi before rounding.
    double raw_winding = 0.0;
    /// True when the radius had to be nudged off a zero.
    bool nudged = false;
};

/// Number of zeros of det[E - M_b(z)] inside |E| < r by the argument
/// principle. m_points >= 8n; steps whose phase jump exceeds pi/2 are
/// bisected. A contour through a zero is retried once at r (1 + 1e-6).
WindingReport winding_number(const MatrixSample& s, const Deformation& d, double radius,
                             int m_points);

} // namespace speclab
