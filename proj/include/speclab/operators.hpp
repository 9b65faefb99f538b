#pragma once

#include "speclab/ensemble.hpp"
#include "speclab/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace speclab {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// z = exp(xi + i phi), phi kept in [0, 2 pi).
class Deformation {
public:
    Deformation() = default;
    Deformation(double xi, double phi);

    double xi() const noexcept { return xi_; }
    double phi() const noexcept { return phi_; }

    template <typename Real = double>
    std::complex<Real> z() const
    {
        return std::exp(std::complex<Real>(Real(xi_), Real(phi_)));
    }

    /// z^k evaluated as exp(k (xi + i phi)).
    template <typename Real = double>
    std::complex<Real> z_pow(double k) const
    {
        return std::exp(std::complex<Real>(Real(k * xi_), Real(k * phi_)));
    }

private:
    double xi_ = 0.0;
    double phi_ = 0.0;
};

/// Largest |n xi| for which z^n is formed explicitly.
inline constexpr double kMaxCornerExponent = 600.0;

namespace detail {

template <typename Scalar>
DenseMatrix<Scalar> assemble(const MatrixSample& s, Scalar upper, Scalar lower, Scalar top_right,
                             Scalar bottom_left)
{
    validate(s);
    const Eigen::Index n = s.n();
    DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        m(k, k) = Scalar(s.a[k]);
    }
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        m(k, k + 1) = Scalar(s.b[k]) * upper;
        m(k + 1, k) = Scalar(s.c[k + 1]) * lower;
    }
    m(0, n - 1) = Scalar(s.c[0]) * top_right;
    m(n - 1, 0) = Scalar(s.b[n - 1]) * bottom_left;
    return m;
}

} // namespace detail

/// Periodic tridiagonal matrix: diagonal a, superdiagonal b_1..b_{n-1},
/// subdiagonal c_2..c_n, corners (1,n) = c_1 and (n,1) = b_n.
template <typename Scalar = cplx>
DenseMatrix<Scalar> build_undeformed(const MatrixSample& s)
{
    const Scalar one{1};
    return detail::assemble<Scalar>(s, one, one, one, one);
}

/// Deformation carried entirely by the corners: (1,n) = z^n c_1,
/// (n,1) = b_n / z^n. Refuses |n xi| > 600.
template <typename Scalar = cplx>
DenseMatrix<Scalar> build_corner_deformed(const MatrixSample& s, const Deformation& d)
{
    validate(s);
    const double exponent = s.n() * d.xi();
    if (std::abs(exponent) > kMaxCornerExponent) {
        throw OverflowError("n*xi = " + std::to_string(exponent) +
                            " exceeds 600: z^n is not representable, use build_balanced");
    }
    if (d.xi() == 0.0 && d.phi() == 0.0) {
        return build_undeformed<Scalar>(s);
    }
    const Scalar zn = Scalar(d.z_pow(s.n()));
    const Scalar one{1};
    return detail::assemble<Scalar>(s, one, one, zn, one / zn);
}

/// Balanced form M_b(z): superdiagonal b_k / z, subdiagonal z c_k,
/// (1,n) = z c_1, (n,1) = b_n / z. Similar to build_corner_deformed.
template <typename Scalar = cplx>
DenseMatrix<Scalar> build_balanced(const MatrixSample& s, const Deformation& d)
{
    if (d.xi() == 0.0 && d.phi() == 0.0) {
        return build_undeformed<Scalar>(s);
    }
    const Scalar z = Scalar(d.z());
    const Scalar inv_z = Scalar(d.z_pow(-1.0));
    return detail::assemble<Scalar>(s, inv_z, z, z, inv_z);
}

/// Applies S = diag(z^1, ..., z^n): maps eigenvectors of M(z^n) to
/// eigenvectors of M_b(z).
template <typename Derived>
Eigen::VectorXcd gauge_transform(const Eigen::MatrixBase<Derived>& u, const Deformation& d)
{
    if (u.size() < 3) {
        throw InvalidArgument("gauge_transform needs a vector of length >= 3");
    }
    Eigen::VectorXcd out(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        out[k] = d.z_pow(static_cast<double>(k + 1)) * cplx(u[k]);
    }
    return out;
}

} // namespace speclab
