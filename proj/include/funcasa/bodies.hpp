#pragma once

#include "funcasa/asa.hpp"
#include "funcasa/citations.hpp"
#include "funcasa/errors.hpp"
#include "funcasa/moments.hpp"
#include "funcasa/quadrature.hpp"
#include "funcasa/sconcave.hpp"

#include <cmath>

namespace funcasa {

/// 1/s as an integer, or -1 when 1/s is not a natural number.
inline int inverse_s_integer(double s) {
    const double k = 1.0 / s;
    const double r = std::round(k);
    if (r >= 1.0 && std::abs(k - r) <= 1e-9 * k) return static_cast<int>(r);
    return -1;
}

/// K_s(f) = {(x, y) in R^n x R^{1/s} : x/sqrt(s) in S_f, |y| <= f^s(x/sqrt(s))}.
struct LiftedBody {
    SConcaveFunction base;
    int extra = 1;  ///< 1/s
    int total_dim() const { return base.n() + extra; }

    bool contains(const Vec& z) const {
        const int n = base.n();
        const double rs = std::sqrt(base.s());
        const Vec x = z.head(n) / rs;
        if (!base.support().contains(x)) return false;
        return z.tail(extra).norm() <= base.phi(x);
    }

    Box bounding_box() const {
        const int n = base.n();
        const Box b = base.support().bounding_box();
        const double rs = std::sqrt(base.s());
        const double top = std::pow(base.sup_norm(), base.s());
        Vec lo(total_dim()), hi(total_dim());
        lo.head(n) = b.lo * rs;
        hi.head(n) = b.hi * rs;
        lo.tail(extra).setConstant(-top);
        hi.tail(extra).setConstant(top);
        return Box{lo, hi};
    }

    Region region() const {
        LiftedBody self = *this;
        return Region{[self](const Vec& z) { return self.contains(z); }, bounding_box()};
    }
};

inline LiftedBody lifted_body(const SConcaveFunction& f) {
    const int k = inverse_s_integer(f.s());
    if (k < 1) throw DomainError("the lifted body K_s(f) requires 1/s to be a natural number");
    return LiftedBody{f, k};
}

/// s^{n/2} vol(B_2^{1/s}) int f.
inline double lifted_volume(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const int k = inverse_s_integer(f.s());
    if (k < 1) throw DomainError("the lifted body K_s(f) requires 1/s to be a natural number");
    return std::pow(f.s(), 0.5 * f.n()) * unit_ball_volume(k) * integral_of(f, spec).value;
}

/// G(f) = {(x, y) : x in S_f, |y| <= f^s(x)}, |G(f)| = 2 int f^s.
struct GraphBody {
    SConcaveFunction base;

    int total_dim() const { return base.n() + 1; }

    bool contains(const Vec& z) const {
        const int n = base.n();
        const Vec x = z.head(n);
        if (!base.support().contains(x)) return false;
        return std::abs(z[n]) <= base.phi(x);
    }

    Box bounding_box() const {
        const int n = base.n();
        const Box b = base.support().bounding_box();
        const double top = std::pow(base.sup_norm(), base.s());
        Vec lo(n + 1), hi(n + 1);
        lo.head(n) = b.lo;
        hi.head(n) = b.hi;
        lo[n] = -top;
        hi[n] = top;
        return Box{lo, hi};
    }

    double volume(const QuadratureSpec& spec = {}) const {
        const IntegralResult r =
            integrate_jet(base, [](const Sample& p) { return std::max(0.0, p.jet.phi); }, spec, false);
        return 2.0 * r.value;
    }

    Region region() const {
        GraphBody self = *this;
        return Region{[self](const Vec& z) { return self.contains(z); }, bounding_box()};
    }
};

inline GraphBody graph_body(const SConcaveFunction& f) {
    const Box b = f.support().bounding_box();
    if (!b.lo.allFinite() || !b.hi.allFinite()) throw DomainError("graph body needs a bounded support");
    return GraphBody{f};
}

struct IsotropyReport {
    Mat covariance;
    Vec barycenter;
    double L_f = 0.0;
    double sup_norm = 0.0;
    double integral = 0.0;
    double error = 0.0;  ///< largest moment error estimate
    Mat whitening;       ///< Cov^{-1/2}
};

inline IsotropyReport isotropy_report(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const FunctionMoments m = function_moments(f, spec, 2);
    if (!(m.mass.value > 0.0)) throw NumericError("integral of f is not positive");
    IsotropyReport r;
    r.covariance = m.covariance();
    r.barycenter = m.barycenter();
    if (condition_number_spd(r.covariance) > 1e12)
        throw NumericError("covariance is numerically singular (condition > 1e12)");
    r.integral = m.mass.value;
    r.sup_norm = f.sup_norm();
    r.error = m.error;
    const int n = f.n();
    r.L_f = std::pow(r.sup_norm / r.integral, 1.0 / n) *
            std::pow(spd_determinant(r.covariance), 1.0 / (2.0 * n));
    r.whitening = inverse_sqrt_spd(r.covariance);
    return r;
}

inline Mat covariance(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const FunctionMoments m = function_moments(f, spec, 2);
    return m.covariance();
}

/// L_f = (sup f / int f)^{1/n} det(Cov f)^{1/(2n)}.
inline double isotropic_constant_f(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    return isotropy_report(f, spec).L_f;
}

/// Affine image of f with barycenter 0 and identity covariance.
inline SConcaveFunction isotropize(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const IsotropyReport r = isotropy_report(f, spec);
    Eigen::SelfAdjointEigenSolver<Mat> es(r.covariance);
    const Mat root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
                     es.eigenvectors().transpose();
    // h(y) = f(c + C^{1/2} y) = f(C^{1/2}(y - shift)) with shift = -C^{-1/2} c.
    return apply_affine(f, root, 1.0, -(r.whitening * r.barycenter));
}

struct BodyIsotropy {
    double L_K = 0.0;
    double error = 0.0;  ///< propagated 3-sigma error of L_K
    double volume = 0.0;
    Mat covariance;
};

/// L_K = det(Cov(1_K))^{1/(2d)} / |K|^{1/d}; the minimum over GL(d) is
/// reached by whitening, so no search is needed.
inline BodyIsotropy isotropic_constant_body(const Region& K, const QuadratureSpec& spec = {}) {
    QuadratureSpec sp = spec;
    if (sp.max_evals < 100000) sp.max_evals = 100000;
    const int d = K.box.dim();
    if (d > 6) throw DomainError("Monte Carlo isotropic constants are limited to dimension <= 6");
    const Moments m = mc_moments(K, 2, sp);
    BodyIsotropy out;
    out.volume = m.volume;
    out.covariance = m.covariance();
    const double det = spd_determinant(out.covariance);
    if (!(det > 0.0)) throw NumericError("body covariance is not positive definite");
    out.L_K = std::pow(det, 1.0 / (2.0 * d)) / std::pow(m.volume, 1.0 / d);
    // First-order propagation: relative errors of the volume and of the
    // second moments, scaled by their exponents.
    const double rel_vol = m.volume_error / m.volume;
    double rel_sec = 0.0;
    for (int i = 0; i < d; ++i)
        rel_sec = std::max(rel_sec, m.second_error(i, i) / std::max(1e-300, std::abs(m.second(i, i))));
    out.error = out.L_K * (rel_sec * 0.5 + rel_vol * (0.5 + 1.0 / d));
    return out;
}

/// L_{K_s(f)} by the closed route:
/// (L_f^n (int f^{2s+1})^{1/(2s)} / (2^{1/(2s)} (1+1/(2s))^{1/(2s)} |f|_inf
///   (int f)^{1/(2s)} vol(B^{1/s})))^{1/(n+1/s)}.
inline double lifted_isotropic_formula(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const int k = inverse_s_integer(f.s());
    if (k < 1) throw DomainError(std::string(cite::kLiftedHypothesis) + " requires 1/s in N");
    const double s = f.s();
    const int n = f.n();
    const IsotropyReport r = isotropy_report(f, spec);
    const double e = (2.0 * s + 1.0) / s;
    const IntegralResult high = integrate_jet(
        f, [e](const Sample& p) { return p.jet.phi > 0.0 ? std::pow(p.jet.phi, e) : 0.0; }, spec, false);
    const double q = 1.0 / (2.0 * s);
    const double rhs = std::pow(r.L_f, n) * std::pow(high.value, q) /
                       (std::pow(2.0, q) * std::pow(1.0 + q, q) * r.sup_norm *
                        std::pow(r.integral, q) * unit_ball_volume(k));
    return std::pow(rhs, 1.0 / (n + 1.0 / s));
}

}  // namespace funcasa
