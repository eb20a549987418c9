#pragma once

#include "funcasa/errors.hpp"
#include "funcasa/quadrature.hpp"
#include "funcasa/sconcave.hpp"

#include <cmath>

namespace funcasa {

enum class AsaForm { F, Psi };

struct AsaQuery {
    double lambda = 0.0;
    AsaForm form = AsaForm::F;
    QuadratureSpec spec{};
};

/// r^{(n+1/s)(1-2 lambda)} pi^{n/2} s^{-n/2} Gamma(1/(2s)+1) / Gamma((n+1/s)/2+1).
inline double closed_form_ball_asa(double s, int n, double r, double lambda) {
    if (!(s > 0.0) || !(r > 0.0) || n < 1) throw ParameterError("closed form needs s, r > 0, n >= 1");
    const double ns = n + 1.0 / s;
    const double lg = 0.5 * n * std::log(M_PI) - 0.5 * n * std::log(s) +
                      std::lgamma(0.5 / s + 1.0) - std::lgamma(0.5 * ns + 1.0);
    return std::pow(r, ns * (1.0 - 2.0 * lambda)) * std::exp(lg);
}

/// Integral of the generalized ball g_{e}^{(s)} in R^n.
inline double ball_integral(double s, int n) { return closed_form_ball_asa(s, n, 1.0, 0.0); }

namespace detail {

inline void check_asa_query(const SConcaveFunction& f, const AsaQuery& q) {
    if (!std::isfinite(q.lambda)) throw ParameterError("lambda must be finite");
    if ((q.lambda < 0.0 || q.lambda > 1.0) && f.is_custom())
        throw DomainError(
            "lambda outside [0,1] is only evaluated for closed-form families with nonsingular Hessian");
}

// log of the f-form integrand without the constant prefactor; returns
// false when the sample contributes nothing.
inline bool asa_log_integrand(const Sample& p, double s, int n, double lambda, double& out) {
    const double phi = p.jet.phi;
    if (!(phi > 0.0)) return false;
    const double denom = phi - p.x.dot(p.jet.grad);
    const double scale = std::max(1.0, phi);
    if (denom < -1e-9 * scale)
        throw DomainError("phi(x) - <x, grad phi(x)> is negative: the origin is not interior to the support (recenter f)");
    if (denom < 1e-12) return false;
    double logdet = 0.0;
    if (lambda != 0.0) {
        const double det = spd_determinant(-p.jet.hess);
        if (!(det > 0.0)) {
            if (lambda > 0.0) return false;
            throw DomainError("det(-Hess phi) is not positive and lambda < 0");
        }
        logdet = std::log(det);
    }
    const double a = (1.0 / s - 1.0) * (1.0 - lambda);
    const double b = lambda * (n + 1.0 / s + 1.0) - 1.0;
    out = a * std::log(phi) + lambda * logdet - b * std::log(denom);
    return true;
}

}  // namespace detail

/// lambda-affine surface area in the f-form:
/// 1/(s^{n lambda}(1+ns)) int phi^{(1/s-1)(1-lambda)} det(-Hess phi)^lambda
///   / (phi - <x, grad phi>)^{lambda(n+1/s+1)-1} dx.
inline IntegralResult asa_f_form(const SConcaveFunction& f, const AsaQuery& q) {
    detail::check_asa_query(f, q);
    const double s = f.s();
    const int n = f.n();
    const double lambda = q.lambda;
    const double pre = 1.0 / (std::pow(s, n * lambda) * (1.0 + n * s));
    IntegralResult r = integrate_jet(
        f,
        [&](const Sample& p) {
            double lg = 0.0;
            if (!detail::asa_log_integrand(p, s, n, lambda, lg)) return 0.0;
            return std::exp(lg);
        },
        q.spec, true);
    r.value *= pre;
    r.error_estimate *= pre;
    return r;
}

/// psi-form with psi = (1 - f^s)/s, after scaling f so that sup f <= 1:
/// 1/(1+ns) int (1 - s psi)^{(1/s-1)(1-lambda)} det(Hess psi)^lambda
///   / (1 + s(<x, grad psi> - psi))^{lambda(n+1/s+1)-1} dx.
inline IntegralResult asa_psi_form(const SConcaveFunction& f, const AsaQuery& q) {
    detail::check_asa_query(f, q);
    const double sup = f.sup_norm();
    const double alpha = sup > 1.0 ? 1.0 / sup : 1.0;
    const SConcaveFunction g = alpha == 1.0 ? f : scale(f, alpha);
    const double s = g.s();
    const int n = g.n();
    const double lambda = q.lambda;
    const double a = (1.0 / s - 1.0) * (1.0 - lambda);
    const double b = lambda * (n + 1.0 / s + 1.0) - 1.0;
    IntegralResult r = integrate_jet(
        g,
        [&](const Sample& p) {
            const double psi = (1.0 - p.jet.phi) / s;
            const Vec dpsi = -p.jet.grad / s;
            const double base = 1.0 - s * psi;
            if (!(base > 0.0)) return 0.0;
            const double denom = 1.0 + s * (p.x.dot(dpsi) - psi);
            if (denom < -1e-9)
                throw DomainError("1 + s(<x, grad psi> - psi) is negative: recenter f");
            if (denom < 1e-12) return 0.0;
            double det = 1.0;
            if (lambda != 0.0) {
                det = spd_determinant(-p.jet.hess / s);
                if (!(det > 0.0)) {
                    if (lambda > 0.0) return 0.0;
                    throw DomainError("det(Hess psi) is not positive and lambda < 0");
                }
            }
            return std::exp(a * std::log(base) + lambda * std::log(det) - b * std::log(denom));
        },
        q.spec, true);
    // as(f) = alpha^{-(1-2 lambda)} as(alpha f)
    const double back = std::pow(alpha, -(1.0 - 2.0 * lambda)) / (1.0 + n * s);
    r.value *= back;
    r.error_estimate *= back;
    return r;
}

inline IntegralResult asa(const SConcaveFunction& f, const AsaQuery& q) {
    return q.form == AsaForm::F ? asa_f_form(f, q) : asa_psi_form(f, q);
}

inline IntegralResult asa(const SConcaveFunction& f, double lambda, const QuadratureSpec& spec = {}) {
    return asa_f_form(f, AsaQuery{lambda, AsaForm::F, spec});
}

}  // namespace funcasa
