#pragma once

#include "speclab/ensemble.hpp"
#include "speclab/log_polar.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace speclab {

/// Residual bound ||M v - lambda v|| <= kResidualTolerance * ||M|| for a
/// unit-norm eigenvector.
inline constexpr double kResidualTolerance = 1e-8;

struct Spectrum {
    Eigen::VectorXcd eigenvalues;
    /// Unit-norm right eigenvectors, one per column, when requested.
    std::optional<Eigen::MatrixXcd> vectors;
    std::optional<Eigen::VectorXd> residuals;
    /// Pairs whose residual misses the bound (near-defective); empty when
    /// no vectors were computed.
    std::vector<bool> flagged;
    /// Solver route and caller-supplied provenance.
    std::string source;

    int flagged_count() const;
};

/// Max absolute row sum; the reference scale for every tolerance here.
double matrix_norm(const Eigen::MatrixXcd& m);

/// All n eigenvalues with multiplicity. Hermitian input goes to the
/// self-adjoint solver, real input to the real Schur route, everything else
/// to the complex Schur route. Throws ConvergenceError.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& m);

/// Eigenvalues plus unit-norm right eigenvectors and their residuals.
/// Pairs missing the residual bound are flagged, not repaired.
Spectrum eigenpairs(const Eigen::MatrixXcd& m, std::string source = {});

/// det(shift I - m) in log-polar form via row-pivoted LU, with the log
/// magnitude accumulated pivot by pivot. Phase is wrapped to (-pi, pi].
LogPolar determinant(const Eigen::MatrixXcd& m, cplx shift);

/// Non-owning view of an Eigen vector as a span.
inline std::span<const cplx> as_span(const Eigen::VectorXcd& v)
{
    return {v.data(), static_cast<std::size_t>(v.size())};
}

} // namespace speclab
