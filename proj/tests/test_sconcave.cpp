#include "funcasa/moments.hpp"
#include "funcasa/sconcave.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace funcasa;

namespace {

Vec v1(double a) {
    Vec v(1);
    v << a;
    return v;
}

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST(GeneralizedBall, UnitBallProfile) {
    const auto g = make_generalized_ball(1.0, 1);
    for (double x : {-0.9, -0.3, 0.0, 0.5, 0.99})
        EXPECT_NEAR(g.f(v1(x)), std::sqrt(1.0 - x * x), 1e-15);
    EXPECT_EQ(g.f(v1(1.2)), 0.0);
    EXPECT_TRUE(g.support().contains(v1(0.999)));
    EXPECT_FALSE(g.support().contains(v1(1.001)));
}

TEST(GeneralizedBall, HalfConcaveInPlane) {
    const auto g = make_generalized_ball(0.5, 2);
    const Vec x = v2(0.6, -0.7);
    EXPECT_NEAR(g.f(x), 1.0 - x.squaredNorm() / 2.0, 1e-14);
    EXPECT_TRUE(g.support().contains(v2(1.41, 0.0)));
    EXPECT_FALSE(g.support().contains(v2(1.42, 0.0)));
}

TEST(GeneralizedBall, RadiusTwoAtOrigin) {
    EXPECT_NEAR(make_generalized_ball(1.0, 1, 2.0).f(v1(0.0)), 2.0, 1e-15);
}

TEST(GeneralizedBall, RejectsBadParameters) {
    EXPECT_THROW(make_generalized_ball(0.0, 1), ParameterError);
    EXPECT_THROW(make_generalized_ball(-1.0, 1), ParameterError);
    EXPECT_THROW(make_generalized_ball(1.0, 0), ParameterError);
    EXPECT_THROW(make_generalized_ball(1.0, 1, 0.0), ParameterError);
}

TEST(Caps, QuadraticProfile) {
    const auto h = make_cap_quadratic(1.0, 1.0, 1.0, 1);
    for (double x : {-0.8, 0.0, 0.4}) EXPECT_NEAR(h.f(v1(x)), 1.0 - x * x, 1e-15);
    EXPECT_EQ(h.f(v1(1.01)), 0.0);
}

TEST(Caps, SqrtProfileAndInfeasibility) {
    const auto h = make_cap_sqrt(1.0, 0.25, 1.0, 1);
    EXPECT_NEAR(h.f(v1(0.3)), 1.0 - std::sqrt(0.25 + 0.09), 1e-15);
    EXPECT_THROW(make_cap_sqrt(1.0, 1.5, 1.0, 1), ParameterError);
    EXPECT_THROW(make_cap_quadratic(0.0, 1.0, 1.0, 1), ParameterError);
}

TEST(Caps, PhiIsConcaveAlongSegments) {
    const auto h = make_cap_sqrt(1.0, 0.25, 0.5, 2);
    const Vec a = v2(-0.5, 0.2), b = v2(0.4, -0.3);
    for (double t = 0.1; t < 1.0; t += 0.2) {
        const Vec m = (1 - t) * a + t * b;
        EXPECT_GE(h.phi(m) + 1e-14, (1 - t) * h.phi(a) + t * h.phi(b));
    }
}

TEST(Jet, MatchesFiniteDifferences) {
    Mat T(2, 2);
    T << 1.3, 0.2, -0.1, 0.7;
    const auto h = apply_affine(make_cap_quadratic(1.0, 1.0, 0.5, 2), T, 1.7, v2(0.05, -0.1));
    const Vec x = v2(0.2, 0.1);
    const Jet j = h.jet(x);
    const double e = 1e-5;
    for (int i = 0; i < 2; ++i) {
        Vec d = Vec::Zero(2);
        d[i] = e;
        EXPECT_NEAR(j.grad[i], (h.phi(x + d) - h.phi(x - d)) / (2 * e), 1e-7);
        const Vec gp = h.jet(x + d).grad, gm = h.jet(x - d).grad;
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(j.hess(k, i), (gp[k] - gm[k]) / (2 * e), 1e-6);
    }
}

TEST(Affine, IdentityMapIsNoOp) {
    const auto g = make_generalized_ball(1.0, 2);
    const auto h = apply_affine(g, identity(2), 1.0, zeros(2));
    for (const Vec& x : {v2(0.1, 0.2), v2(-0.5, 0.6), v2(0.0, 0.0)}) EXPECT_EQ(h.f(x), g.f(x));
}

TEST(Affine, SupportIsPulledBack) {
    Mat T(2, 2);
    T << 2.0, 0.0, 0.0, 1.0;
    const auto h = apply_affine(make_generalized_ball(1.0, 2), T);
    EXPECT_TRUE(h.support().contains(v2(0.49, 0.0)));
    EXPECT_FALSE(h.support().contains(v2(0.51, 0.0)));
    EXPECT_TRUE(h.support().contains(v2(0.0, 0.99)));
    EXPECT_FALSE(h.support().contains(v2(0.0, 1.01)));
}

TEST(Affine, CompositionAndScaling) {
    const auto g = make_generalized_ball(1.0, 1);
    const auto h = scale(translate(g, v1(0.3)), 2.0);
    EXPECT_NEAR(h.f(v1(0.3)), 2.0, 1e-15);
    EXPECT_NEAR(h.f(v1(0.8)), 2.0 * std::sqrt(0.75), 1e-14);
    Mat S(1, 1);
    S << 0.0;
    EXPECT_THROW(apply_affine(g, S), ParameterError);
}

TEST(Concavity, ViewWithSmallerS) {
    const auto g = make_generalized_ball(1.0, 1);
    const auto h = with_concavity(g, 0.5);
    EXPECT_NEAR(h.f(v1(0.4)), g.f(v1(0.4)), 1e-15);
    EXPECT_NEAR(h.phi(v1(0.4)), std::sqrt(g.f(v1(0.4))), 1e-15);
    EXPECT_THROW(with_concavity(g, 2.0), DomainError);
}

TEST(Containment, ScaledBallIsInside) {
    const auto g = make_generalized_ball(1.0, 1);
    EXPECT_TRUE(contains(scale(g, 0.5), g, Direction::Inner));
    EXPECT_TRUE(contains(make_generalized_ball(1.0, 1, 2.0), g, Direction::Outer));
    EXPECT_TRUE(contains(make_cap_quadratic(1.0, 1.0, 1.0, 1), g, Direction::Inner));
    EXPECT_TRUE(contains(g, g, Direction::Inner));
    EXPECT_FALSE(contains(scale(g, 1.01), g, Direction::Inner));
    EXPECT_FALSE(contains(g, scale(g, 1.01), Direction::Outer));
    EXPECT_THROW(contains(g, make_generalized_ball(0.5, 1), Direction::Inner), ParameterError);
}

TEST(CenterOfGravity, EvenAndTranslated) {
    const auto g = make_generalized_ball(1.0, 2);
    EXPECT_LT(center_of_gravity(g).norm(), 1e-9);
    const Vec c = center_of_gravity(translate(g, v2(0.3, 0.0)));
    EXPECT_NEAR(c[0], 0.3, 1e-8);
    EXPECT_NEAR(c[1], 0.0, 1e-8);
    const auto r = recenter(translate(make_cap_sqrt(1.0, 0.25, 1.0, 2), v2(-0.2, 0.4)));
    EXPECT_LT(center_of_gravity(r).norm(), 1e-8);
}
