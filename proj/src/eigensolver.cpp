#include "speclab/eigensolver.hpp"

#include "speclab/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <numbers>

namespace speclab {

namespace {

enum class Route { SelfAdjoint, Real, Complex };

Route choose_route(const Eigen::MatrixXcd& m)
{
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0) {
        return Route::SelfAdjoint;
    }
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        return Route::Real;
    }
    return Route::Complex;
}

const char* route_name(Route r)
{
    switch (r) {
    case Route::SelfAdjoint:
        return "self-adjoint";
    case Route::Real:
        return "real-schur";
    case Route::Complex:
        return "complex-schur";
    }
    return "unknown";
}

[[noreturn]] void fail(Route r, Eigen::Index n)
{
    throw ConvergenceError(std::string("eigensolver (") + route_name(r) +
                           ") did not converge for n = " + std::to_string(n));
}

void check_finite(const Eigen::MatrixXcd& m)
{
    if (!m.allFinite()) {
        throw InvalidArgument("matrix has non-finite entries");
    }
    if (m.rows() != m.cols()) {
        throw InvalidArgument("matrix must be square");
    }
}

struct Decomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
};

Decomposition decompose(const Eigen::MatrixXcd& m, bool with_vectors, Route route)
{
    Decomposition out;
    switch (route) {
    case Route::SelfAdjoint: {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            fail(route, m.rows());
        }
        out.values = es.eigenvalues().cast<cplx>();
        if (with_vectors) {
            out.vectors = es.eigenvectors();
        }
        break;
    }
    case Route::Real: {
        const Eigen::MatrixXd real = m.real();
        Eigen::EigenSolver<Eigen::MatrixXd> es(real, with_vectors);
        if (es.info() != Eigen::Success) {
            fail(route, m.rows());
        }
        out.values = es.eigenvalues();
        if (with_vectors) {
            out.vectors = es.eigenvectors();
        }
        break;
    }
    case Route::Complex: {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, with_vectors);
        if (es.info() != Eigen::Success) {
            fail(route, m.rows());
        }
        out.values = es.eigenvalues();
        if (with_vectors) {
            out.vectors = es.eigenvectors();
        }
        break;
    }
    }
    return out;
}

} // namespace

int Spectrum::flagged_count() const
{
    return static_cast<int>(std::count(flagged.begin(), flagged.end(), true));
}

double matrix_norm(const Eigen::MatrixXcd& m)
{
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& m)
{
    check_finite(m);
    return decompose(m, false, choose_route(m)).values;
}

Spectrum eigenpairs(const Eigen::MatrixXcd& m, std::string source)
{
    check_finite(m);
    const Route route = choose_route(m);
    Decomposition d = decompose(m, true, route);

    const Eigen::Index n = m.rows();
    const double scale = matrix_norm(m);
    Eigen::VectorXd residuals(n);
    std::vector<bool> flagged(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto v = d.vectors.col(i);
        const double norm = v.norm();
        if (norm > 0.0) {
            v /= norm;
        }
        residuals[i] = (m * v - d.values[i] * v).norm();
        flagged[static_cast<std::size_t>(i)] = !(norm > 0.0) || residuals[i] > kResidualTolerance * scale;
    }

    Spectrum s;
    s.eigenvalues = std::move(d.values);
    s.vectors = std::move(d.vectors);
    s.residuals = std::move(residuals);
    s.flagged = std::move(flagged);
    s.source = std::string(route_name(route)) + (source.empty() ? "" : "; " + source);
    return s;
}

LogPolar determinant(const Eigen::MatrixXcd& m, cplx shift)
{
    check_finite(m);
    const Eigen::Index n = m.rows();
    Eigen::MatrixXcd a = -m;
    a.diagonal().array() += shift;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const auto& packed = lu.matrixLU();

    double log_magnitude = 0.0;
    double phase = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx pivot = packed(i, i);
        if (pivot == cplx{0.0, 0.0}) {
            return LogPolar::zero();
        }
        log_magnitude += std::log(std::abs(pivot));
        phase += std::arg(pivot);
    }
    if (lu.permutationP().determinant() < 0) {
        phase += std::numbers::pi;
    }
    return {log_magnitude, wrap_phase(phase), false, false};
}

} // namespace speclab
