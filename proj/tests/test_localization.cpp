#include "oracles.hpp"

#include "speclab/eigensolver.hpp"
#include "speclab/ensemble.hpp"
#include "speclab/error.hpp"
#include "speclab/localization.hpp"
#include "speclab/operators.hpp"
#include "speclab/spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace speclab;

namespace {

MatrixSample disk_sample(int n, std::uint64_t seed)
{
    return sample_matrix({EnsembleKind::UniformUnitDisk, n, 3.5, 1, seed}, 0);
}

// Exponential profile |u_k| = exp(-gamma |k - k0|) on k = 1..n, optionally
// multiplied by exp(xi k), then normalized.
Eigen::VectorXcd ideal_state(int n, double gamma, int k0, double xi)
{
    Eigen::VectorXd log_mag(n);
    for (int k = 1; k <= n; ++k) {
        log_mag[k - 1] = -gamma * std::abs(k - k0) + xi * k;
    }
    const Eigen::VectorXd mag = (log_mag.array() - log_mag.maxCoeff()).exp();
    return (mag / mag.norm()).cast<cplx>();
}

// Published quadratic fit of the Lyapunov curve near the origin.
HolePrediction fitted_hole(double xi)
{
    LyapunovCurve fit;
    fit.radii = Eigen::VectorXd::LinSpaced(301, 0.0, 2.0);
    fit.gamma = (0.2914 + 0.309 * fit.radii.array().square()).matrix();
    return hole_radius(fit, xi);
}

} // namespace

TEST_SUITE("localization") {

TEST_CASE("position variance arithmetic")
{
    const int n = 100;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[36] = 1.0;
    auto st = position_variance(e);
    CHECK(st.variance == 0.0);
    CHECK(st.mean_position == 37.0);

    Eigen::VectorXcd two = Eigen::VectorXcd::Zero(n);
    two[9] = std::sqrt(0.5);
    two[10] = cplx(0.0, std::sqrt(0.5));
    st = position_variance(two);
    CHECK(st.mean_position == doctest::Approx(10.5));
    CHECK(st.variance == doctest::Approx(0.5));

    const Eigen::VectorXcd flat = Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(double(n)));
    st = position_variance(flat);
    CHECK(st.variance == doctest::Approx(std::sqrt((n * n - 1) / 12.0)));
    CHECK(st.variance == doctest::Approx(28.86).epsilon(1e-3));

    CHECK_THROWS_AS(position_variance(Eigen::VectorXcd::Ones(5)), InvalidArgument);
}

TEST_CASE("ideal profile variance")
{
    // infinite-lattice closed form of the same profile
    const auto v = ideal_variance(5.0, 100);
    CHECK(v.variance == doctest::Approx(1.0 / (std::sqrt(2.0) * std::sinh(5.0))).epsilon(1e-9));
    CHECK(v.variance == doctest::Approx(0.00953).epsilon(2e-3));
    CHECK_FALSE(v.truncation_unreliable);

    CHECK(ideal_variance(1.0, 400).variance == doctest::Approx(1.0 / (std::sqrt(2.0) * std::sinh(1.0))));
    MESSAGE("gamma = 1: direct sum " << ideal_variance(1.0, 400).variance << ", sinh(1/gamma) = "
                                     << std::sinh(1.0));

    CHECK(ideal_variance(40.0, 100).variance < 1e-15);
    CHECK(ideal_variance(0.01, 100).truncation_unreliable);

    double previous = INFINITY;
    for (double g = 0.01; g < 10; g *= 1.3) {
        const double var = ideal_variance(g, 300).variance;
        CHECK(var < previous);
        previous = var;
    }
}

TEST_CASE("rate extraction")
{
    for (int n : {100, 800}) {
        const auto rate = variance_to_rate(ideal_variance(0.7, n).variance, n);
        REQUIRE(rate);
        CHECK(std::abs(*rate - 0.7) <= 1e-6);
    }
    const auto r = variance_to_rate(0.01, 800);
    REQUIRE(r);
    CHECK(ideal_variance(*r, 800).variance == doctest::Approx(0.01).epsilon(1e-4));
    CHECK_FALSE(variance_to_rate(800 / std::sqrt(12.0), 800));
}

TEST_CASE("diagonal matrix eigenvectors are single sites")
{
    Eigen::MatrixXcd m = Eigen::VectorXcd::LinSpaced(12, 1.0, 12.0).asDiagonal();
    for (const auto& rec : localization_spectrum(m)) {
        CHECK(rec.variance == 0.0);
        CHECK(rec.mean_position == doctest::Approx(rec.eigenvalue.real()));
        REQUIRE(rec.rate.has_value());
        CHECK(*rec.rate == kMaxRate);
    }
}

TEST_CASE("seam flag marks states peaked at the chain ends")
{
    Eigen::MatrixXcd m = Eigen::VectorXcd::LinSpaced(20, 1.0, 20.0).asDiagonal();
    for (const auto& rec : localization_spectrum(m)) {
        const int site = static_cast<int>(std::lround(rec.eigenvalue.real()));
        CHECK(rec.seam_flag == (site <= 5 || site > 15));
    }
}

TEST_CASE("gauge transform delocalizes exactly when xi exceeds gamma")
{
    const int n = 200;
    const double gamma = 0.6;
    const int k0 = n / 2;
    const auto check_peak = [&](double xi) {
        const auto u = ideal_state(n, gamma, k0, xi);
        Eigen::Index peak = 0;
        u.cwiseAbs().maxCoeff(&peak);
        return std::pair{static_cast<int>(peak) + 1, position_variance(u).variance};
    };
    const auto [peak_in, var_in] = check_peak(0.0);
    const auto [peak_lo, var_lo] = check_peak(0.4);
    const auto [peak_hi, var_hi] = check_peak(0.8);
    CHECK(peak_in == k0);
    CHECK(peak_lo == k0);
    CHECK(var_lo < 5.0);
    CHECK(peak_hi == n);
    CHECK(std::abs(n - position_variance(ideal_state(n, gamma, k0, 0.8)).mean_position) < 10);
    CHECK(var_in < var_lo);
}

TEST_CASE("halo matching")
{
    const auto s = disk_sample(120, 9);
    const auto eig = eigenvalues(build_undeformed(s));
    const auto same = halo_match(as_span(eig), as_span(eig), 1e-3);
    CHECK(same.matched.size() == 120);
    CHECK(same.unmatched_deformed == 0);
    CHECK(same.unmatched_undeformed == 0);
    for (const auto& e : same.matched) {
        CHECK(e.displacement == 0.0);
    }

    const auto other = eigenvalues(build_balanced(s, Deformation{0.7, 0.0}));
    const auto rep = halo_match(as_span(eig), as_span(other), 1e-3);
    std::set<std::pair<double, double>> before, after;
    for (const auto& e : rep.matched) {
        CHECK(e.displacement <= 1e-3);
        before.insert({e.before.real(), e.before.imag()});
        after.insert({e.after.real(), e.after.imag()});
    }
    CHECK(before.size() == rep.matched.size());
    CHECK(after.size() == rep.matched.size());
    CHECK(rep.unmatched_undeformed + static_cast<int>(rep.matched.size()) == 120);
}

TEST_CASE("deformation sweeps out the interior of the hole")
{
    const int n = 800;
    const auto s = disk_sample(n, 2);
    const auto e0 = eigenvalues(build_undeformed(s));
    const auto e5 = eigenvalues(build_balanced(s, Deformation{0.5, 0.0}));
    const auto e7 = eigenvalues(build_balanced(s, Deformation{0.7, 0.0}));
    const auto hole5 = fitted_hole(0.5);
    const auto hole7 = fitted_hole(0.7);
    REQUIRE(hole5.radius);
    REQUIRE(hole7.radius);

    const auto check_swept = [](const HaloMatchReport& rep, std::span<const cplx> before, double r_hole) {
        int inside = 0, inside_matched = 0;
        for (const cplx& e : before) {
            inside += std::abs(e) < r_hole - 0.1;
        }
        for (const auto& m : rep.matched) {
            inside_matched += std::abs(m.before) < r_hole - 0.1;
        }
        CHECK(inside > 0);
        CHECK(inside_matched == 0);
        int far_outside = 0, far_outside_matched = 0;
        for (const cplx& e : before) {
            far_outside += std::abs(e) > r_hole + 0.4;
        }
        for (const auto& m : rep.matched) {
            far_outside_matched += std::abs(m.before) > r_hole + 0.4;
        }
        CHECK(far_outside_matched >= 0.9 * far_outside);
    };
    check_swept(halo_match(as_span(e0), as_span(e5), 1e-3), as_span(e0), *hole5.radius);
    check_swept(halo_match(as_span(e5), as_span(e7), 1e-3), as_span(e5), *hole7.radius);
}

TEST_CASE("classification")
{
    std::vector<cplx> pts{0.2, cplx(0, 1.0), -1.05, 1.5, cplx(2, 2)};
    const auto c = classify(pts, 1.0, 0.1);
    CHECK(c.anomalies == std::vector<int>{0});
    CHECK(c.circle == std::vector<int>{1, 2});
    CHECK(c.halo == std::vector<int>{3, 4});

    CHECK_THROWS_AS(classify(pts, fitted_hole(0.0), 0.1), InvalidArgument);
    CHECK_THROWS_AS(classify(pts, 0.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(classify(pts, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("no eigenvalues inside the hole at xi = log 2")
{
    const int n = 800;
    const auto s = disk_sample(n, 17);
    const Deformation d{std::log(2.0), 0.0};
    const auto eig = eigenvalues(build_balanced(s, d));
    const auto c = classify(as_span(eig), fitted_hole(d.xi()), 0.1);
    CHECK(c.anomalies.empty());
    CHECK_FALSE(c.circle.empty());
    CHECK_FALSE(c.halo.empty());
}

TEST_CASE("only the circle remains at large xi")
{
    const int n = 200;
    const auto s = disk_sample(n, 21);
    const Deformation d{8.0, 0.0};
    const auto eig = eigenvalues(build_balanced(s, d));
    LyapunovCurve tail;
    tail.radii = Eigen::VectorXd::LinSpaced(3, 0.0, 3.0);
    tail.gamma = Eigen::Vector3d(0.29, 0.6, std::log(3.0) + 0.5);
    const auto hole = hole_radius(tail, d.xi());
    REQUIRE(hole.radius);
    // the circle radius fluctuates with the sample mean of log|b|
    const auto c = classify(as_span(eig), hole, 0.1 * *hole.radius);
    CHECK(c.halo.empty());
    CHECK(c.anomalies.empty());
    CHECK(c.circle.size() == static_cast<std::size_t>(n));
}

TEST_CASE("near-hole states are the most extended at xi = log 2")
{
    const int n = 800;
    const auto s = disk_sample(n, 33);
    const Deformation d{std::log(2.0), 0.0};
    auto records = localization_spectrum(build_balanced(s, d));
    double min_abs = INFINITY;
    for (const auto& r : records) {
        min_abs = std::min(min_abs, std::abs(r.eigenvalue));
    }
    std::sort(records.begin(), records.end(),
              [](const auto& x, const auto& y) { return x.variance > y.variance; });
    int near = 0;
    for (int i = 0; i < 20; ++i) {
        near += std::abs(records[i].eigenvalue) < min_abs + 0.2;
    }
    CHECK(near >= 18);
}

}
