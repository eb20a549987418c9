#pragma once

#include "funcasa/asa.hpp"
#include "funcasa/check.hpp"
#include "funcasa/citations.hpp"
#include "funcasa/errors.hpp"
#include "funcasa/quadrature.hpp"
#include "funcasa/sampling.hpp"
#include "funcasa/sconcave.hpp"

#include <memory>
#include <optional>

namespace funcasa {

struct MinimizerSpec {
    int starts = 16;
    int iterations = 200;
    double step_tol = 1e-10;
    /// Points with f < floor * sup f are excluded from the search.
    double floor = 1e-12;
};

/// (1/s) (S)^o for a support S containing the origin in its interior.
inline Support polar_support(const Support& sup, double s) {
    const int n = sup.dim();
    if (sup.is_ellipsoid()) {
        const EllipsoidSupport& e = sup.as_ellipsoid();
        const Mat B = e.shape.inverse().transpose();
        const Vec& c = e.center;
        const Mat Q = B.transpose() * B - c * c.transpose();
        Eigen::LLT<Mat> llt(Q);
        if (llt.info() != Eigen::Success || (e.shape * c).norm() >= 1.0)
            throw DomainError("the origin is not interior to the support; the polar is unbounded");
        const Vec qc = llt.solve(c);
        const double k = 1.0 + c.dot(qc);
        const Vec y0 = -qc / s;
        const Mat L = llt.matrixL();
        const Mat shape = (s / std::sqrt(k)) * L.transpose();
        return Support::ellipsoid(y0, shape);
    }
    // Sampled support function; the inradius about 0 bounds the polar.
    double r_in = std::numeric_limits<double>::infinity();
    for (int k = 0; k < (n == 1 ? 2 : 512); ++k) {
        const Vec d = halton_direction(static_cast<std::uint64_t>(k), n);
        r_in = std::min(r_in, 1.0 / sup.origin_gauge(d));
    }
    const double half = 1.0 / (s * 0.9 * r_in);
    auto shared = std::make_shared<const Support>(sup);
    return Support::oracle(
        [shared, s](const Vec& y) { return s * shared->support_function(y) < 1.0; },
        Box{Vec::Constant(n, -half), Vec::Constant(n, half)}, zeros(n));
}

/// Result of one pointwise dual evaluation.
struct DualPoint {
    double phi = 0.0;  ///< phi^o(y) = f^o(y)^s
    Vec argmin;        ///< minimizer x* (empty when y is outside the support)
    bool converged = true;
};

/// Lazily evaluated (s)-Legendre dual
/// f^o(y) = inf_x (1 - s<x, y>)_+^{1/s} / f(x).
class DualFunction {
public:
    DualFunction(const SConcaveFunction& f, const MinimizerSpec& spec)
        : impl_(std::make_shared<Impl>(f, spec)) {}

    const SConcaveFunction& base() const { return impl_->f; }
    const Support& support() const { return *impl_->support; }
    double s() const { return impl_->f.s(); }
    bool closed_form() const { return impl_->closed.has_value(); }
    const MinimizerSpec& minimizer_spec() const { return impl_->spec; }

    /// phi^o(y) with the minimizer.
    DualPoint evaluate(const Vec& y) const { return impl_->minimize(y); }

    double f(const Vec& y) const {
        if (impl_->closed) return impl_->closed->f(y);
        const DualPoint p = evaluate(y);
        return p.phi > 0.0 ? std::pow(p.phi, 1.0 / s()) : 0.0;
    }

    Jet jet(const Vec& y) const {
        if (impl_->closed) return impl_->closed->jet(y);
        return impl_->dual_jet(y);
    }

    /// The dual as an s-concave function usable by every engine. Closed
    /// form for centered generalized balls, otherwise a custom function
    /// whose values and derivatives come from the minimization.
    SConcaveFunction as_function() const {
        if (impl_->closed) return *impl_->closed;
        auto impl = impl_;
        const Support& sup = *impl->support;
        return make_custom(
            impl->f.s(), impl->f.n(),
            [impl](const Vec& y) { return impl->minimize(y).phi; }, sup,
            [impl](const Vec& y) { return impl->dual_jet(y); }, "dual");
    }

private:
    struct Impl {
        SConcaveFunction f;
        MinimizerSpec spec;
        std::shared_ptr<const Support> support;
        std::optional<SConcaveFunction> closed;
        std::vector<Vec> starts;
        double phi_floor = 0.0;

        Impl(const SConcaveFunction& fn, const MinimizerSpec& sp) : f(fn), spec(sp) {
            if (sp.starts < 1 || sp.iterations < 1 || !(sp.step_tol > 0.0))
                throw ParameterError("invalid minimizer spec");
            const int n = f.n();
            if (!f.support().contains(zeros(n)) || !(f.phi(zeros(n)) > 0.0))
                throw DomainError("the (s)-Legendre dual needs 0 in the interior of the support (recenter f)");
            support = std::make_shared<const Support>(polar_support(f.support(), f.s()));
            if (const auto* b = std::get_if<family::GeneralizedBall>(&f.family())) {
                const AffineMap& m = f.affine();
                if (f.s() == f.native_s() && m.shift.isZero(0.0)) {
                    // (alpha g_{e,r}(T .))^o = alpha^{-1} g_{e,1/r}(T^{-T} .)
                    const SConcaveFunction g = make_generalized_ball(f.s(), n, 1.0 / b->r);
                    closed = apply_affine(g, m.T.inverse().transpose(), 1.0 / m.alpha);
                }
            }
            phi_floor = std::pow(sp.floor * f.sup_norm(), f.s());
            // Low-discrepancy starts inside S_f above the floor.
            const Support& sf = f.support();
            const Box box = sf.bounding_box();
            starts.push_back(zeros(n));
            for (std::uint64_t k = 1; static_cast<int>(starts.size()) < sp.starts && k < 100000; ++k) {
                const Vec x = box.lo + halton(k, n).cwiseProduct(box.widths());
                if (sf.contains(x) && f.phi(x) > phi_floor) starts.push_back(x);
            }
        }

        // G(x) = log(1 - s<x,y>) - log phi(x); +inf when infeasible.
        double objective(const Vec& x, const Vec& y) const {
            if (!f.support().contains(x)) return std::numeric_limits<double>::infinity();
            const double p = f.phi(x);
            if (!(p > phi_floor)) return std::numeric_limits<double>::infinity();
            const double a = 1.0 - f.s() * x.dot(y);
            if (!(a > 0.0)) return -std::numeric_limits<double>::infinity();
            return std::log(a) - std::log(p);
        }

        DualPoint minimize(const Vec& y) const {
            DualPoint out;
            if (!support->contains(y)) {
                out.phi = 0.0;
                return out;
            }
            const double s = f.s();
            const int n = f.n();
            double best = std::numeric_limits<double>::infinity();
            Vec best_x = zeros(n);
            bool any_converged = false;
            for (const Vec& x0 : starts) {
                Vec x = x0;
                double gx = objective(x, y);
                if (gx == -std::numeric_limits<double>::infinity()) {
                    out.phi = 0.0;
                    return out;
                }
                if (!std::isfinite(gx)) continue;
                bool conv = false;
                for (int it = 0; it < spec.iterations; ++it) {
                    const Jet j = f.jet(x);
                    const double a = 1.0 - s * x.dot(y);
                    const Vec grad = -s * y / a - j.grad / j.phi;
                    const Mat gg = j.grad * j.grad.transpose() / (j.phi * j.phi);
                    const Mat yy = (s * s / (a * a)) * (y * y.transpose());
                    Mat H = -j.hess / j.phi + gg - yy;
                    Vec dir;
                    Eigen::LLT<Mat> llt(H);
                    if (llt.info() == Eigen::Success) {
                        dir = -llt.solve(grad);
                    } else {
                        Eigen::LLT<Mat> llt2(-j.hess / j.phi + gg + yy);
                        dir = llt2.info() == Eigen::Success ? Vec(-llt2.solve(grad)) : Vec(-grad);
                    }
                    if (!(dir.dot(grad) < 0.0)) dir = -grad;
                    double t = 1.0;
                    double gn = objective(x + t * dir, y);
                    int back = 0;
                    while (!(gn <= gx + 1e-4 * t * dir.dot(grad)) && back < 60) {
                        if (gn == -std::numeric_limits<double>::infinity()) {
                            out.phi = 0.0;
                            return out;
                        }
                        t *= 0.5;
                        gn = objective(x + t * dir, y);
                        ++back;
                    }
                    if (back >= 60) {
                        conv = true;  // no further decrease at this resolution
                        break;
                    }
                    const double step = t * dir.norm();
                    x += t * dir;
                    gx = gn;
                    if (step < spec.step_tol * std::max(1.0, x.norm())) {
                        conv = true;
                        break;
                    }
                }
                any_converged = any_converged || conv;
                if (gx < best) {
                    best = gx;
                    best_x = x;
                }
            }
            if (!std::isfinite(best))
                throw NumericError("dual minimization found no feasible start");
            out.phi = std::exp(best);
            out.argmin = best_x;
            out.converged = any_converged;
            if (!any_converged)
                throw NumericError("dual minimization did not converge from any start", out.phi, 0.0);
            return out;
        }

        Jet dual_jet(const Vec& y) const {
            const DualPoint p = minimize(y);
            const int n = f.n();
            Jet out;
            out.phi = p.phi;
            if (p.argmin.size() == 0) {
                out.grad = zeros(n);
                out.hess = Mat::Zero(n, n);
                return out;
            }
            const double s = f.s();
            const Vec& x = p.argmin;
            const Jet j = f.jet(x);
            const double a = 1.0 - s * x.dot(y);
            out.grad = -s * x / j.phi;
            const Mat Hxx = -(s * s / (a * a)) * (y * y.transpose()) - j.hess / j.phi +
                            j.grad * j.grad.transpose() / (j.phi * j.phi);
            const Mat Hxy = -(s / a) * identity(n) - (s * s / (a * a)) * (y * x.transpose());
            const Mat Dx = -Hxx.fullPivLu().solve(Hxy);
            out.hess = -(s / j.phi) * (identity(n) - x * j.grad.transpose() / j.phi) * Dx;
            out.hess = 0.5 * (out.hess + out.hess.transpose()).eval();
            return out;
        }
    };

    std::shared_ptr<const Impl> impl_;
};

inline DualFunction legendre_s_dual(const SConcaveFunction& f, const MinimizerSpec& spec = {}) {
    return DualFunction(f, spec);
}

/// int f * int f^o <= (int g_e)^2.
inline CheckResult santalo_check(const SConcaveFunction& f, const QuadratureSpec& spec = {},
                                 const MinimizerSpec& mspec = {}) {
    const IntegralResult a = integral_of(f, spec);
    const SConcaveFunction dual = legendre_s_dual(f, mspec).as_function();
    const IntegralResult b = integral_of(dual, spec);
    const double ge = ball_integral(f.s(), f.n());
    const double lhs = a.value * b.value;
    const double err = a.error_estimate * std::abs(b.value) + b.error_estimate * std::abs(a.value);
    return make_check("blaschke_santalo", "santalo", cite::kSantalo, family_name(f.family()),
                      Relation::LessEq, lhs, ge * ge, err, 1e-6);
}

}  // namespace funcasa
