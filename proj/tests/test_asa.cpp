#include "funcasa/asa.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace funcasa;

TEST(ClosedForm, Anchors) {
    EXPECT_NEAR(closed_form_ball_asa(1.0, 1, 1.0, 0.3), M_PI / 2, 1e-14);
    EXPECT_NEAR(closed_form_ball_asa(0.5, 1, 1.0, 0.9), 4.0 * std::sqrt(2.0) / 3.0, 1e-14);
    EXPECT_NEAR(closed_form_ball_asa(1.0, 1, 2.0, 0.5), M_PI / 2, 1e-14);
    EXPECT_NEAR(closed_form_ball_asa(1.0, 1, 2.0, 0.0), 2.0 * M_PI, 1e-13);
    // Integral of g_e by Simpson for s = 2, n = 1: (1 - 2x^2)^{1/4}.
    const double a = 1.0 / std::sqrt(2.0);
    const double ref = oracle::trapezoid([](double x) { return std::pow(std::max(0.0, 1 - 2 * x * x), 0.25); }, -a, a,
                                         4000000);
    EXPECT_NEAR(ball_integral(2.0, 1), ref, 1e-5);
}

TEST(Asa, BallMatchesClosedForm) {
    for (double s : {0.5, 1.0, 2.0})
        for (int n : {1, 2})
            for (double l : {0.0, 0.3, 1.0}) {
                const double v = asa(make_generalized_ball(s, n), l).value;
                EXPECT_NEAR(v, closed_form_ball_asa(s, n, 1.0, l), 1e-5 * v) << s << " " << n << " " << l;
            }
}

TEST(Asa, ScaledBall) {
    EXPECT_NEAR(asa(make_generalized_ball(1.0, 1, 2.0), 0.0).value, 2.0 * M_PI, 1e-6);
    EXPECT_NEAR(asa(make_generalized_ball(1.0, 1, 2.0), 0.5).value, M_PI / 2, 1e-6);
}

TEST(Asa, ZeroIsIntegral) {
    const auto h = make_cap_quadratic(1.0, 1.0, 1.0, 1);
    EXPECT_NEAR(asa(h, 0.0).value, 4.0 / 3.0, 1e-8);
    AsaQuery q{0.0, AsaForm::Psi, {}};
    EXPECT_NEAR(asa(h, q).value, 4.0 / 3.0, 1e-8);
}

TEST(Asa, CapAtHalfMatchesDirectIntegral) {
    // s = n = 1, phi = 1 - x^2: prefactor 1/2, det = 2, phi - x phi' = 1 + x^2.
    const double l = 0.5;
    const double ref = 0.5 * oracle::simpson(
                                 [&](double x) {
                                     const double det = 2.0;
                                     const double den = 1.0 - x * x + 2.0 * x * x;
                                     return std::pow(det, l) / std::pow(den, l * 3.0 - 1.0);
                                 },
                                 -1.0, 1.0);
    EXPECT_NEAR(asa(make_cap_quadratic(1.0, 1.0, 1.0, 1), l).value, ref, 1e-8);
}

TEST(Asa, FormsAgree) {
    for (double l : {0.25, 0.75}) {
        const auto h = make_cap_sqrt(1.0, 0.25, 1.0, 2);
        const IntegralResult a = asa(h, AsaQuery{l, AsaForm::F, {}});
        const IntegralResult b = asa(h, AsaQuery{l, AsaForm::Psi, {}});
        EXPECT_NEAR(a.value, b.value, 1e-5 * a.value);
    }
}

TEST(Asa, AffineCovariance) {
    Mat T(2, 2);
    T << 1.4, 0.5, -0.2, 0.6;
    const auto h = make_cap_quadratic(1.0, 1.0, 1.0, 2);
    for (double l : {0.25, 0.6}) {
        const double a = asa(apply_affine(h, T), l).value;
        const double b = asa(h, l).value;
        EXPECT_NEAR(a, std::pow(std::abs(T.determinant()), 2 * l - 1) * b, 1e-6 * b);
    }
}

TEST(Asa, ScaleCovariance) {
    const auto h = make_cap_sqrt(1.0, 0.25, 0.5, 1);
    for (double l : {0.0, 0.3, 0.8})
        EXPECT_NEAR(asa(scale(h, 1.7), l).value, std::pow(1.7, 1 - 2 * l) * asa(h, l).value, 1e-6);
}

TEST(Asa, OutsideUnitIntervalForBalls) {
    EXPECT_NEAR(asa(make_generalized_ball(1.0, 1), -1.0).value, M_PI / 2, 1e-6);
    EXPECT_NEAR(asa(make_generalized_ball(1.0, 1, 2.0), 2.0).value, M_PI / 2 * std::pow(2.0, -6.0), 1e-6);
}

TEST(Asa, CustomOutsideUnitIntervalIsRejected) {
    const auto c = make_custom(
        1.0, 1, [](const Vec& x) { return 1.0 - x.squaredNorm(); }, Support::ball(zeros(1), 1.0));
    EXPECT_THROW(asa(c, 1.5), DomainError);
    EXPECT_NEAR(asa(c, 0.0).value, 4.0 / 3.0, 1e-6);
}
