#include "funcasa/asa.hpp"
#include "funcasa/duality.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace funcasa;

namespace {

Vec v1(double a) {
    Vec v(1);
    v << a;
    return v;
}

}  // namespace

TEST(LegendreDual, BallIsSelfDual) {
    for (double s : {0.5, 1.0, 2.0}) {
        const auto g = make_generalized_ball(s, 2);
        const DualFunction d = legendre_s_dual(g);
        Vec y(2);
        y << 0.3, -0.2;
        EXPECT_NEAR(d.f(y), g.f(y), 1e-12);
    }
}

TEST(LegendreDual, BallRadiusInverts) {
    const auto g = make_generalized_ball(1.0, 1, 2.0);
    const auto gi = make_generalized_ball(1.0, 1, 0.5);
    const DualFunction d = legendre_s_dual(g);
    for (double y : {0.0, 0.2, -0.4}) {
        const double ref =
            oracle::dual_grid_1d([&](double x) { return g.f(v1(x)); }, 1.0, -2.0, 2.0, y);
        EXPECT_NEAR(ref, gi.f(v1(y)), 1e-6);
        EXPECT_NEAR(d.f(v1(y)), ref, 1e-6);
    }
}

TEST(LegendreDual, ScalingInverts) {
    const auto g = make_generalized_ball(1.0, 1);
    const DualFunction d = legendre_s_dual(scale(g, 3.0));
    EXPECT_NEAR(d.f(v1(0.5)), g.f(v1(0.5)) / 3.0, 1e-8);
}

TEST(LegendreDual, NumericCapMatchesGridOracle) {
    const auto h = make_cap_quadratic(1.0, 1.0, 1.0, 1);
    const DualFunction d = legendre_s_dual(h);
    EXPECT_FALSE(d.closed_form());
    for (double y : {0.0, 0.3, -0.5, 0.9}) {
        const double ref = oracle::dual_grid_1d([&](double x) { return h.f(v1(x)); }, 1.0, -1.0, 1.0, y);
        EXPECT_NEAR(d.f(v1(y)), ref, 1e-7) << y;
        // The minimization returns an upper bound of the infimum.
        EXPECT_GE(d.f(v1(y)), ref - 1e-9);
    }
}

TEST(LegendreDual, NumericCapShiftedAndTwoDimensional) {
    Mat T(2, 2);
    T << 1.2, 0.1, 0.0, 0.9;
    Vec c(2);
    c << 0.05, -0.02;
    const auto h = apply_affine(make_cap_sqrt(1.0, 0.25, 1.0, 2), T, 1.0, c);
    const DualFunction d = legendre_s_dual(h);
    Vec y(2);
    y << 0.4, 0.3;
    // Direct check of the infimum on a polar grid over S_h.
    double best = HUGE_VAL;
    for (int i = 0; i < 400; ++i)
        for (int j = 1; j <= 400; ++j) {
            const double a = 2 * M_PI * i / 400, r = 1.2 * j / 400;
            Vec x(2);
            x << r * std::cos(a), r * std::sin(a);
            x += c;
            const double fx = h.f(x);
            if (fx <= 0) continue;
            best = std::min(best, std::max(0.0, 1.0 - x.dot(y)) / fx);
        }
    EXPECT_LE(d.f(y), best + 1e-9);
    EXPECT_NEAR(d.f(y), best, 2e-4 * best);
}

TEST(LegendreDual, InvolutionOnBalls) {
    const auto g = make_generalized_ball(0.5, 1, 1.5);
    const auto dd = legendre_s_dual(legendre_s_dual(g).as_function()).as_function();
    EXPECT_NEAR(dd.f(v1(0.7)), g.f(v1(0.7)), 1e-7);
}

TEST(Santalo, BallEqualityAndCapStrict) {
    const CheckResult b = santalo_check(make_generalized_ball(1.0, 1));
    EXPECT_NEAR(b.lhs, M_PI * M_PI / 4, 1e-6);
    EXPECT_NEAR(b.rhs, M_PI * M_PI / 4, 1e-12);
    const CheckResult c = santalo_check(make_cap_quadratic(1.0, 1.0, 1.0, 1));
    EXPECT_NEAR(c.lhs, 4.0 / 3.0 * (1 + M_PI / 4), 1e-6);
    EXPECT_EQ(c.verdict, Verdict::Pass);
}

TEST(PolarSupport, OfUnitInterval) {
    const auto h = make_cap_quadratic(1.0, 1.0, 1.0, 1);
    const DualFunction d = legendre_s_dual(h);
    // S_{f^o} is the polar of S_f scaled by 1/s; for [-1, 1] it is [-1, 1].
    EXPECT_TRUE(d.support().contains(v1(0.99)));
    EXPECT_FALSE(d.support().contains(v1(1.01)));
}
