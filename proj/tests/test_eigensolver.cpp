#include "oracles.hpp"

#include "speclab/eigensolver.hpp"
#include "speclab/ensemble.hpp"
#include "speclab/error.hpp"
#include "speclab/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace speclab;

namespace {

MatrixSample disk_sample(int n, std::uint64_t seed)
{
    return sample_matrix({EnsembleKind::UniformUnitDisk, n, 3.5, 1, seed}, 0);
}

// Log-polar distance after removing the 2 pi ambiguity of the phase.
double log_polar_gap(const LogPolar& x, cplx log_ref)
{
    return std::abs(cplx(x.log_magnitude - log_ref.real(), wrap_phase(x.phase - log_ref.imag())));
}

} // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("diagonal input returns its diagonal")
{
    Eigen::VectorXcd diag(5);
    diag << cplx(1, 0), cplx(-2, 0.5), cplx(0, 3), cplx(0.25, -1), cplx(7, 7);
    const Eigen::MatrixXcd m = diag.asDiagonal();
    const auto got = oracle::to_vector(eigenvalues(m));
    CHECK(oracle::nearest_multiset_gap(got, oracle::to_vector(diag)) < 1e-14);
}

TEST_CASE("trace identity")
{
    for (int n : {10, 100, 250}) {
        const auto m = build_undeformed(disk_sample(n, 3 + n));
        const auto eig = eigenvalues(m);
        CHECK(std::abs(eig.sum() - m.trace()) <= 1e-8 * n * matrix_norm(m));
    }
}

TEST_CASE("real non-symmetric input keeps conjugate pairs")
{
    Eigen::MatrixXcd m = Eigen::MatrixXd::Random(30, 30).cast<cplx>();
    const auto eig = eigenvalues(m);
    std::vector<cplx> conj;
    for (const cplx& e : oracle::to_vector(eig)) {
        conj.push_back(std::conj(e));
    }
    CHECK(oracle::nearest_multiset_gap(oracle::to_vector(eig), conj) <= 1e-12);
}

TEST_CASE("eigenpairs of diag(1, 2, 3i) are the unit vectors")
{
    Eigen::MatrixXcd m = Eigen::Vector3cd(1, 2, cplx(0, 3)).asDiagonal();
    const auto sp = eigenpairs(m);
    REQUIRE(sp.vectors);
    for (int j = 0; j < 3; ++j) {
        Eigen::Index k = 0;
        sp.vectors->col(j).cwiseAbs().maxCoeff(&k);
        CHECK(std::abs(sp.eigenvalues[j] - m(k, k)) < 1e-15);
        CHECK(std::abs(std::abs(sp.vectors->coeff(k, j)) - 1.0) < 1e-15);
    }
}

TEST_CASE("random n = 100 residuals")
{
    const auto m = build_undeformed(disk_sample(100, 41));
    const auto sp = eigenpairs(m, "unit");
    REQUIRE(sp.residuals);
    CHECK(sp.residuals->maxCoeff() <= 1e-8 * matrix_norm(m));
    CHECK(sp.flagged_count() == 0);
    CHECK(sp.vectors->colwise().norm().minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("hermitian input gives real eigenvalues and orthonormal vectors")
{
    const auto s = sample_matrix({EnsembleKind::HermitianHN, 200, 3.5, 1, 2}, 0);
    const auto sp = eigenpairs(build_undeformed(s));
    CHECK(sp.eigenvalues.imag().cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXcd gram = sp.vectors->adjoint() * *sp.vectors;
    CHECK((gram - Eigen::MatrixXcd::Identity(200, 200)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("spectrum of the default ensemble lies in |E| <= 3")
{
    for (int i = 0; i < 5; ++i) {
        const auto s = sample_matrix({EnsembleKind::UniformUnitDisk, 150, 3.5, 5, 13}, i);
        CHECK(eigenvalues(build_undeformed(s)).cwiseAbs().maxCoeff() <= 3.0);
    }
}

TEST_CASE("non-finite input is rejected")
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
    m(1, 2) = NAN;
    CHECK_THROWS_AS(eigenvalues(m), InvalidArgument);
}

TEST_CASE("determinant of the zero matrix is E^n")
{
    const int n = 7;
    const cplx e{0.6, -1.3};
    const auto d = determinant(Eigen::MatrixXcd::Zero(n, n), e);
    CHECK(log_polar_gap(d, double(n) * std::log(e)) < 1e-12);
}

TEST_CASE("determinant matches the cofactor expansion")
{
    Eigen::Matrix3cd m;
    m << 1, 4, 7, 8, 2, 5, 6, 9, 3;
    const cplx shift{0.3, 0.2};
    const cplx expected = oracle::det3(shift * Eigen::Matrix3cd::Identity() - m);
    const auto d = determinant(m, shift);
    CHECK(std::abs(d.value() - expected) <= 1e-12 * std::abs(expected));
    const auto d0 = determinant(m, 0.0);
    const cplx e0 = oracle::det3(-m);
    CHECK(std::abs(d0.value() - e0) <= 1e-12 * std::abs(e0));
}

TEST_CASE("determinant vanishes numerically at an eigenvalue")
{
    Eigen::Matrix3cd m3;
    m3 << 1, 4, 7, 8, 2, 5, 6, 9, 3;
    for (const Eigen::MatrixXcd& m : {Eigen::MatrixXcd(m3), build_undeformed(disk_sample(40, 5))}) {
        const auto eig = eigenvalues(m);
        const double scale = -25.0 + m.rows() * std::log(matrix_norm(m));
        for (Eigen::Index j = 0; j < eig.size(); ++j) {
            CHECK(determinant(m, eig[j]).log_magnitude < scale);
        }
    }
}

TEST_CASE("determinant equals the product over eigenvalues")
{
    const auto m = build_balanced(disk_sample(120, 8), Deformation{0.4, 0.9});
    const auto eig = eigenvalues(m);
    for (const cplx e : {cplx(0.1, 0.05), cplx(2.0, -1.0), cplx(-0.7, 0.7)}) {
        cplx log_prod{0.0, 0.0};
        for (Eigen::Index j = 0; j < eig.size(); ++j) {
            log_prod += std::log(e - eig[j]);
        }
        CHECK(log_polar_gap(determinant(m, e), log_prod) <= 1e-6);
    }
}

TEST_CASE("exactly singular shift returns the sentinel")
{
    const auto d = determinant(Eigen::MatrixXcd::Zero(3, 3), 0.0);
    CHECK(d.singular);
    CHECK(std::isinf(d.log_magnitude));
    CHECK(d.log_magnitude < 0);
}

}
