#include "funcasa/asa.hpp"
#include "funcasa/quadrature.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace funcasa;

TEST(IntegrateSupport, BallIntegralMatchesOracle) {
    const auto g = make_generalized_ball(1.0, 1);
    const IntegralResult r = integral_of(g);
    EXPECT_NEAR(r.value, M_PI / 2, 1e-8);
    EXPECT_LT(r.error_estimate, 1e-6 * r.value);
}

TEST(IntegrateSupport, DiskAreaAndBallIntegral) {
    const auto g = make_generalized_ball(1.0, 2);
    EXPECT_NEAR(integrate_support(g, [](const Vec&) { return 1.0; }, {}).value, M_PI, 1e-8);
    EXPECT_NEAR(integral_of(g).value, 2.0 * M_PI / 3.0, 1e-8);
}

TEST(IntegrateSupport, CapMatchesSimpson) {
    const auto h = make_cap_sqrt(1.0, 0.25, 0.5, 1);
    const double ref = oracle::simpson(
        [](double x) {
            const double p = 1.0 - std::sqrt(0.25 + x * x);
            return p > 0 ? p * p : 0.0;
        },
        -std::sqrt(0.75), std::sqrt(0.75));
    EXPECT_NEAR(integral_of(h).value, ref, 1e-9);
}

TEST(IntegrateSupport, SchemesAgree) {
    Mat T(2, 2);
    T << 1.1, 0.3, 0.0, 0.9;
    const auto h = apply_affine(make_cap_quadratic(1.0, 1.0, 1.0, 2), T);
    const double exact = integral_of(h).value;
    QuadratureSpec grid;
    grid.scheme = Scheme::TensorGrid;
    grid.tol = 1e-4;
    const IntegralResult g = integral_of(h, grid);
    EXPECT_NEAR(g.value, exact, std::max(3 * g.error_estimate, 1e-4 * exact));
    QuadratureSpec mc;
    mc.scheme = Scheme::MonteCarlo;
    mc.tol = 5e-3;
    const IntegralResult m = integral_of(h, mc);
    EXPECT_NEAR(m.value, exact, 4 * m.error_estimate);
}

TEST(IntegrateSupport, MonteCarloDeterministicPerSeed) {
    const auto g = make_generalized_ball(1.0, 2);
    QuadratureSpec mc;
    mc.scheme = Scheme::MonteCarlo;
    mc.tol = 1e-2;
    mc.seed = 7;
    const IntegralResult a = integral_of(g, mc), b = integral_of(g, mc);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error_estimate, b.error_estimate);
    mc.seed = 8;
    EXPECT_NE(integral_of(g, mc).value, a.value);
}

TEST(IntegrateSupport, NumericErrorCarriesPartialResult) {
    const auto g = make_generalized_ball(1.0, 2);
    QuadratureSpec mc;
    mc.scheme = Scheme::MonteCarlo;
    mc.tol = 1e-9;
    mc.max_evals = 1000;
    try {
        integral_of(g, mc);
        FAIL() << "expected NumericError";
    } catch (const NumericError& e) {
        EXPECT_GT(e.partial_value(), 0.0);
        EXPECT_GT(e.partial_error(), 0.0);
    }
}

TEST(IntegrateRadial, Profiles) {
    const QuadratureSpec q;
    EXPECT_NEAR(integrate_radial([](double t) { return std::sqrt(1 - t * t); }, 1.0, 1, q).value, M_PI / 2, 1e-8);
    EXPECT_NEAR(integrate_radial([](double) { return 1.0; }, 1.0, 2, q).value, M_PI, 1e-8);
    const double ref = oracle::trapezoid([](double t) { return std::pow(1 - t * t, 1.5); }, -1.0, 1.0);
    EXPECT_NEAR(ref, 3 * M_PI / 8, 1e-8);
    EXPECT_NEAR(integrate_radial([](double t) { return std::pow(1 - t * t, 1.5); }, 1.0, 1, q).value, ref, 1e-8);
}

TEST(QuadratureSpec, Validation) {
    QuadratureSpec q;
    q.tol = 0.0;
    EXPECT_THROW(q.validate(), ParameterError);
    q = {};
    q.max_evals = 10;
    EXPECT_THROW(q.validate(), ParameterError);
    q = {};
    q.boundary_offset = 1e-3;
    EXPECT_THROW(q.validate(), ParameterError);
}

TEST(MonteCarloMoments, DiskAndInterval) {
    QuadratureSpec mc;
    mc.scheme = Scheme::MonteCarlo;
    mc.tol = 1e-3;
    mc.max_evals = 2'000'000;
    const Box disk_box{-Vec::Ones(2), Vec::Ones(2)};
    const Moments d = mc_moments(Region{[](const Vec& z) { return z.squaredNorm() <= 1.0; }, disk_box}, 2, mc);
    EXPECT_NEAR(d.volume, M_PI, 4 * d.volume_error);
    EXPECT_NEAR(d.second(0, 0), M_PI / 4, 4 * d.second_error(0, 0));
    const Box seg{-0.5 * Vec::Ones(1), 0.5 * Vec::Ones(1)};
    const Moments s = mc_moments(Region{[](const Vec&) { return true; }, seg}, 2, mc);
    EXPECT_NEAR(s.volume, 1.0, 1e-12);
    EXPECT_NEAR(s.second(0, 0), 1.0 / 12.0, 4 * s.second_error(0, 0) + 1e-6);
}
