#include "funcasa/bodies.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace funcasa;

namespace {

QuadratureSpec mc_spec(std::int64_t n = 2'000'000) {
    QuadratureSpec q;
    q.scheme = Scheme::MonteCarlo;
    q.tol = 1e-9;
    q.max_evals = n;
    return q;
}

}  // namespace

TEST(LiftedBody, BallGivesDisk) {
    const auto g = make_generalized_ball(1.0, 1);
    EXPECT_NEAR(lifted_volume(g), M_PI, 1e-7);
    EXPECT_NEAR(lifted_volume(make_generalized_ball(1.0, 1, 2.0)), 4 * M_PI, 1e-6);
    const LiftedBody K = lifted_body(g);
    Vec z(2);
    z << 0.6, 0.79;
    EXPECT_TRUE(K.contains(z));
    z << 0.6, 0.81;
    EXPECT_FALSE(K.contains(z));
}

TEST(LiftedBody, RequiresIntegerInverse) {
    EXPECT_THROW(lifted_body(make_generalized_ball(2.0, 1)), DomainError);
    EXPECT_THROW(lifted_isotropic_formula(make_generalized_ball(0.4, 1)), DomainError);
    EXPECT_EQ(inverse_s_integer(0.5), 2);
    EXPECT_LT(inverse_s_integer(0.4), 1);
}

TEST(LiftedBody, VolumeMatchesMonteCarlo) {
    const auto h = make_cap_sqrt(1.0, 0.25, 0.5, 1);
    const Moments m = mc_moments(lifted_body(h).region(), 0, mc_spec());
    EXPECT_NEAR(m.volume, lifted_volume(h), 4 * m.volume_error);
}

TEST(GraphBody, BallIsDisk) {
    const auto g = make_generalized_ball(1.0, 1);
    const GraphBody G = graph_body(g);
    Vec z(2);
    z << 0.0, 1.0;
    EXPECT_TRUE(G.contains(z));
    z << 0.0, 1.01;
    EXPECT_FALSE(G.contains(z));
    z << 0.3, -0.9;
    EXPECT_TRUE(G.contains(z));
    const Moments m = mc_moments(G.region(), 0, mc_spec());
    EXPECT_NEAR(m.volume, M_PI, 4 * m.volume_error);
}

TEST(Isotropy, ReportsForBallAndCap) {
    const IsotropyReport b = isotropy_report(make_generalized_ball(1.0, 1));
    EXPECT_NEAR(b.covariance(0, 0), 0.25, 1e-9);
    EXPECT_NEAR(b.L_f, 1.0 / M_PI, 1e-9);
    const IsotropyReport c = isotropy_report(make_cap_quadratic(1.0, 1.0, 1.0, 1));
    EXPECT_NEAR(c.covariance(0, 0), 0.2, 1e-9);
    EXPECT_NEAR(c.L_f, 0.75 / std::sqrt(5.0), 1e-9);
}

TEST(Isotropy, TranslationAndAffineInvariance) {
    Mat T(2, 2);
    T << 1.3, 0.4, 0.1, 0.8;
    Vec c(2);
    c << 0.2, -0.1;
    const auto h = make_cap_quadratic(1.0, 1.0, 1.0, 2);
    const auto hT = apply_affine(h, T, 1.0, c);
    EXPECT_NEAR(isotropic_constant_f(hT), isotropic_constant_f(h), 1e-8);
    const Mat a = covariance(translate(h, c)), b = covariance(h);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Isotropy, IsotropizeWhitens) {
    Mat T(2, 2);
    T << 1.5, 0.7, 0.0, 0.6;
    Vec c(2);
    c << 0.3, 0.1;
    const auto f = isotropize(apply_affine(make_cap_sqrt(1.0, 0.25, 1.0, 2), T, 1.0, c));
    const IsotropyReport r = isotropy_report(f);
    EXPECT_LT((r.covariance - identity(2)).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_LT(r.barycenter.norm(), 1e-3);
}

TEST(Isotropy, BodyConstants) {
    const Box disk_box{-Vec::Ones(2), Vec::Ones(2)};
    const BodyIsotropy d =
        isotropic_constant_body(Region{[](const Vec& z) { return z.squaredNorm() <= 1.0; }, disk_box}, mc_spec());
    EXPECT_NEAR(d.L_K, 0.5 / std::sqrt(M_PI), 3 * d.error);
    const Box seg{-0.5 * Vec::Ones(1), 0.5 * Vec::Ones(1)};
    const BodyIsotropy s = isotropic_constant_body(Region{[](const Vec&) { return true; }, seg}, mc_spec());
    EXPECT_NEAR(s.L_K, 1.0 / std::sqrt(12.0), 3 * s.error + 1e-6);
}

TEST(Isotropy, BodyAffineInvariance) {
    Mat A(2, 2);
    A << 2.0, 0.5, 0.0, 0.7;
    const Mat Ai = A.inverse();
    const Box box{-Vec::Ones(2), Vec::Ones(2)};
    const Box abox{-2.6 * Vec::Ones(2), 2.6 * Vec::Ones(2)};
    const BodyIsotropy a = isotropic_constant_body(Region{[](const Vec& z) { return z.squaredNorm() <= 1.0; }, box},
                                                   mc_spec());
    const BodyIsotropy b = isotropic_constant_body(
        Region{[Ai](const Vec& z) { return (Ai * z).squaredNorm() <= 1.0; }, abox}, mc_spec());
    EXPECT_NEAR(a.L_K, b.L_K, 3 * (a.error + b.error));
}

TEST(Isotropy, LiftedFormulaAnchor) {
    const auto g = make_generalized_ball(1.0, 1);
    EXPECT_NEAR(lifted_isotropic_formula(g), 0.5 / std::sqrt(M_PI), 1e-7);
    Mat T(1, 1);
    T << 1.7;
    const auto h = make_cap_quadratic(1.0, 1.0, 0.5, 1);
    EXPECT_NEAR(lifted_isotropic_formula(apply_affine(h, T)), lifted_isotropic_formula(h), 1e-8);
}
