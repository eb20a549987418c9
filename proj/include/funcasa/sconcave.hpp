#pragma once

#include "funcasa/errors.hpp"
#include "funcasa/linalg.hpp"
#include "funcasa/sampling.hpp"
#include "funcasa/support.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace funcasa {

/// Value, gradient and Hessian of phi = f^s at a point.
struct Jet {
    double phi = 0.0;
    Vec grad;
    Mat hess;
};

namespace family {

/// g_{e,r}: phi = (r^2 - s|x|^2)^{1/2}.
struct GeneralizedBall {
    double r = 1.0;
};

/// phi = R - (eps + |x|^2)^{1/2}, R^2 > eps > 0.
struct CapSqrt {
    double R = 1.0;
    double eps = 0.25;
};

/// phi = b - R|x|^2.
struct CapQuadratic {
    double b = 1.0;
    double R = 1.0;
};

/// phi given by callbacks in base coordinates. `jet` is optional; when it
/// is missing derivatives come from finite differences of `phi`.
struct Custom {
    std::function<double(const Vec&)> phi;
    std::function<Jet(const Vec&)> jet;
    std::shared_ptr<const Support> support;
    std::string label = "custom";
};

}  // namespace family

using Family = std::variant<family::GeneralizedBall, family::CapSqrt, family::CapQuadratic,
                            family::Custom>;

/// x -> alpha * base(T (x - shift)).
struct AffineMap {
    double alpha = 1.0;
    Mat T;
    Vec shift;
};

/// Point of the polar parametrization x = shift + T^{-1}(c + R (1-d) theta)
/// with the volume element folded into `weight`.
struct PolarPoint {
    Vec x;
    Jet jet;
    double weight = 0.0;
};

/// Per-direction data of the polar parametrization.
struct PolarFrame {
    Vec theta;
    double radius = 0.0;
};

inline const char* family_name(const Family& fam) {
    switch (fam.index()) {
        case 0: return "generalized_ball";
        case 1: return "cap_sqrt";
        case 2: return "cap_quadratic";
        default: return "custom";
    }
}

/// An s-concave function f on R^n: f = alpha * base(T(x - shift))
/// where base^{native_s} is one of the families above, viewed as s-concave
/// for some s <= native_s.
class SConcaveFunction {
public:
    SConcaveFunction(double s, double native_s, int n, Family fam, AffineMap map)
        : s_(s), native_s_(native_s), n_(n), family_(std::move(fam)), map_(std::move(map)) {
        if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("s must be a positive real");
        if (!(native_s >= s * (1.0 - 1e-14))) throw ParameterError("s exceeds the native concavity");
        if (n < 1 || n > kMaxDim) throw ParameterError("dimension out of range");
        if (!(map_.alpha > 0.0) || !std::isfinite(map_.alpha))
            throw ParameterError("alpha must be positive");
        if (map_.T.rows() != n || map_.T.cols() != n || map_.shift.size() != n)
            throw ParameterError("affine map does not match the dimension");
        t_inv_ = map_.T.inverse();
        abs_det_t_ = std::abs(map_.T.determinant());
        if (!(abs_det_t_ > 1e-300) || !t_inv_.allFinite())
            throw ParameterError("affine map T is singular");
        base_support_ = std::make_shared<const Support>(make_base_support());
        support_ = std::make_shared<const Support>(base_support_->pullback(map_.T, map_.shift));
    }

    double s() const { return s_; }
    double native_s() const { return native_s_; }
    int n() const { return n_; }
    double n_s() const { return n_ + 1.0 / s_; }
    const Family& family() const { return family_; }
    const AffineMap& affine() const { return map_; }
    const Support& support() const { return *support_; }
    const Support& base_support() const { return *base_support_; }
    double abs_det_T() const { return abs_det_t_; }
    const Mat& T_inverse() const { return t_inv_; }
    bool is_custom() const { return std::holds_alternative<family::Custom>(family_); }

    bool is_affine_image() const {
        return map_.alpha != 1.0 || !map_.T.isIdentity(0.0) || !map_.shift.isZero(0.0);
    }

    /// The function with the affine map stripped.
    SConcaveFunction base() const {
        return SConcaveFunction(s_, native_s_, n_, family_,
                                AffineMap{1.0, identity(n_), zeros(n_)});
    }

    /// Symmetric under x -> -x.
    bool is_even() const { return !is_custom() && map_.shift.isZero(0.0); }

    double phi(const Vec& x) const {
        const Vec u = to_base(x);
        if (!base_support_->contains(u)) return 0.0;
        const double b = std::max(0.0, base_phi(u));
        return std::pow(map_.alpha, s_) * std::pow(b, s_ / native_s_);
    }

    double f(const Vec& x) const {
        const double p = phi(x);
        return p > 0.0 ? std::pow(p, 1.0 / s_) : 0.0;
    }

    Vec grad_phi(const Vec& x) const { return jet(x).grad; }
    Mat hess_phi(const Vec& x) const { return jet(x).hess; }

    /// phi and its derivatives at an interior point.
    Jet jet(const Vec& x) const { return compose(base_jet(to_base(x), std::nullopt)); }

    /// Largest value of f.
    double sup_norm() const {
        return std::visit(
            [&](const auto& fam) -> double {
                using F = std::decay_t<decltype(fam)>;
                double peak = 0.0;  // max of the native phi
                if constexpr (std::is_same_v<F, family::GeneralizedBall>) {
                    peak = fam.r;
                } else if constexpr (std::is_same_v<F, family::CapSqrt>) {
                    peak = fam.R - std::sqrt(fam.eps);
                } else if constexpr (std::is_same_v<F, family::CapQuadratic>) {
                    peak = fam.b;
                } else {
                    const Box box = base_support_->bounding_box();
                    peak = std::max(0.0, fam.phi(base_support_->interior_point()));
                    for (std::uint64_t k = 1; k <= 4096; ++k) {
                        const Vec u = box.lo + halton(k, n_).cwiseProduct(box.widths());
                        if (base_support_->contains(u)) peak = std::max(peak, fam.phi(u));
                    }
                }
                return map_.alpha * std::pow(peak, 1.0 / native_s_);
            },
            family_);
    }

    /// Ray data for the polar parametrization in base coordinates.
    PolarFrame polar_frame(const Vec& theta) const {
        if (!is_custom()) return PolarFrame{theta, base_radius()};
        const Vec c = base_support_->interior_point();
        return PolarFrame{theta, (base_support_->boundary_point(theta) - c).norm()};
    }

    /// Point at relative depth d in (0, 1] from the boundary along a ray.
    /// For the closed-form families phi is evaluated from d directly so it
    /// keeps full relative accuracy as d -> 0.
    PolarPoint polar_point(const PolarFrame& frame, double d, bool need_jet = true) const {
        const double rho = 1.0 - d;
        const Vec c = is_custom() ? base_support_->interior_point() : zeros(n_);
        const Vec u = c + frame.radius * rho * frame.theta;
        std::optional<double> exact;
        const double dd = d * (2.0 - d);
        std::visit(
            [&](const auto& fam) {
                using F = std::decay_t<decltype(fam)>;
                if constexpr (std::is_same_v<F, family::GeneralizedBall>) {
                    exact = fam.r * std::sqrt(dd);
                } else if constexpr (std::is_same_v<F, family::CapSqrt>) {
                    const double r0sq = fam.R * fam.R - fam.eps;
                    exact = r0sq * dd / (fam.R + std::sqrt(fam.eps + u.squaredNorm()));
                } else if constexpr (std::is_same_v<F, family::CapQuadratic>) {
                    exact = fam.b * dd;
                }
            },
            family_);
        PolarPoint p;
        p.x = map_.shift + t_inv_ * u;
        if (need_jet) {
            p.jet = compose(base_jet(u, exact));
        } else {
            const double b = exact ? *exact : base_phi(u);
            p.jet.phi = std::pow(map_.alpha, s_) * std::pow(std::max(0.0, b), s_ / native_s_);
        }
        p.weight = std::pow(frame.radius, n_) * std::pow(rho, n_ - 1) / abs_det_t_;
        return p;
    }

    /// Support radius of the base family (closed-form families only).
    double base_radius() const {
        return std::visit(
            [&](const auto& fam) -> double {
                using F = std::decay_t<decltype(fam)>;
                if constexpr (std::is_same_v<F, family::GeneralizedBall>) {
                    return fam.r / std::sqrt(native_s_);
                } else if constexpr (std::is_same_v<F, family::CapSqrt>) {
                    return std::sqrt(fam.R * fam.R - fam.eps);
                } else if constexpr (std::is_same_v<F, family::CapQuadratic>) {
                    return std::sqrt(fam.b / fam.R);
                } else {
                    return 0.0;
                }
            },
            family_);
    }

    Vec to_base(const Vec& x) const { return map_.T * (x - map_.shift); }

private:
    Support make_base_support() const {
        if (const auto* c = std::get_if<family::Custom>(&family_)) {
            if (!c->phi || !c->support) throw ParameterError("custom function needs phi and a support");
            if (c->support->dim() != n_) throw ParameterError("custom support dimension mismatch");
            if (!(c->phi(c->support->interior_point()) > 0.0))
                throw ParameterError("custom function vanishes at the declared interior point");
            return *c->support;
        }
        return Support::ball(zeros(n_), base_radius());
    }

    double base_phi(const Vec& u) const {
        return std::visit(
            [&](const auto& fam) -> double {
                using F = std::decay_t<decltype(fam)>;
                if constexpr (std::is_same_v<F, family::GeneralizedBall>) {
                    return std::sqrt(std::max(0.0, fam.r * fam.r - native_s_ * u.squaredNorm()));
                } else if constexpr (std::is_same_v<F, family::CapSqrt>) {
                    return fam.R - std::sqrt(fam.eps + u.squaredNorm());
                } else if constexpr (std::is_same_v<F, family::CapQuadratic>) {
                    return fam.b - fam.R * u.squaredNorm();
                } else {
                    return fam.phi(u);
                }
            },
            family_);
    }

    // Native phi and derivatives in base coordinates.
    Jet base_jet(const Vec& u, std::optional<double> exact) const {
        Jet j;
        const int n = n_;
        std::visit(
            [&](const auto& fam) {
                using F = std::decay_t<decltype(fam)>;
                if constexpr (std::is_same_v<F, family::GeneralizedBall>) {
                    const double p = exact ? *exact : base_phi(u);
                    const double s = native_s_;
                    j.phi = p;
                    j.grad = -s * u / p;
                    j.hess = -(s / p) * identity(n) - (s * s / (p * p * p)) * (u * u.transpose());
                } else if constexpr (std::is_same_v<F, family::CapSqrt>) {
                    const double q = std::sqrt(fam.eps + u.squaredNorm());
                    j.phi = exact ? *exact : fam.R - q;
                    j.grad = -u / q;
                    j.hess = -identity(n) / q + (u * u.transpose()) / (q * q * q);
                } else if constexpr (std::is_same_v<F, family::CapQuadratic>) {
                    j.phi = exact ? *exact : base_phi(u);
                    j.grad = -2.0 * fam.R * u;
                    j.hess = -2.0 * fam.R * identity(n);
                } else {
                    j = fam.jet ? fam.jet(u) : finite_difference_jet(fam, u);
                }
            },
            family_);
        return j;
    }

    // h = 1e-5 max(1,|u|) for the gradient and a larger step for second
    // differences; stencils that leave the support become one-sided.
    Jet finite_difference_jet(const family::Custom& fam, const Vec& u) const {
        const int n = n_;
        Jet j;
        j.phi = fam.phi(u);
        j.grad = zeros(n);
        j.hess = Mat::Zero(n, n);
        const double scale = std::max(1.0, u.norm());
        const double h1 = 1e-5 * scale;
        const double h2 = 1e-4 * scale;
        const Support& sup = *fam.support;
        auto val = [&](const Vec& v) { return fam.phi(v); };
        for (int i = 0; i < n; ++i) {
            const Vec e = Vec::Unit(n, i);
            const bool fwd = sup.contains(u + h1 * e);
            const bool bwd = sup.contains(u - h1 * e);
            if (fwd && bwd)
                j.grad[i] = (val(u + h1 * e) - val(u - h1 * e)) / (2.0 * h1);
            else if (fwd)
                j.grad[i] = (-3.0 * j.phi + 4.0 * val(u + h1 * e) - val(u + 2.0 * h1 * e)) / (2.0 * h1);
            else
                j.grad[i] = (3.0 * j.phi - 4.0 * val(u - h1 * e) + val(u - 2.0 * h1 * e)) / (2.0 * h1);
        }
        for (int i = 0; i < n; ++i) {
            const Vec ei = Vec::Unit(n, i);
            double si = 1.0;
            if (!sup.contains(u + 2.0 * h2 * ei)) si = -1.0;
            const Vec hi = si * h2 * ei;
            if (sup.contains(u + h2 * ei) && sup.contains(u - h2 * ei)) {
                j.hess(i, i) = (val(u + h2 * ei) - 2.0 * j.phi + val(u - h2 * ei)) / (h2 * h2);
            } else {
                j.hess(i, i) = (j.phi - 2.0 * val(u + hi) + val(u + 2.0 * hi)) / (h2 * h2);
            }
            for (int k = i + 1; k < n; ++k) {
                double sk = 1.0;
                if (!sup.contains(u + 2.0 * h2 * Vec::Unit(n, k))) sk = -1.0;
                const Vec hk = sk * h2 * Vec::Unit(n, k);
                const double v = (val(u + hi + hk) - val(u + hi) - val(u + hk) + j.phi) /
                                 (si * sk * h2 * h2);
                j.hess(i, k) = j.hess(k, i) = v;
            }
        }
        return j;
    }

    // Native base jet -> phi = f^s in x coordinates.
    Jet compose(const Jet& b) const {
        const double p = s_ / native_s_;
        Jet q = b;
        if (p != 1.0) {
            const double pw = p * std::pow(b.phi, p - 1.0);
            q.phi = std::pow(b.phi, p);
            q.hess = pw * (b.hess + ((p - 1.0) / b.phi) * (b.grad * b.grad.transpose()));
            q.grad = pw * b.grad;
        }
        const double a = std::pow(map_.alpha, s_);
        Jet out;
        out.phi = a * q.phi;
        out.grad = a * (map_.T.transpose() * q.grad);
        out.hess = a * (map_.T.transpose() * q.hess * map_.T);
        return out;
    }

    double s_;
    double native_s_;
    int n_;
    Family family_;
    AffineMap map_;
    Mat t_inv_;
    double abs_det_t_ = 1.0;
    std::shared_ptr<const Support> base_support_;
    std::shared_ptr<const Support> support_;
};

inline AffineMap identity_map(int n) { return AffineMap{1.0, identity(n), zeros(n)}; }

inline void check_common(double s, int n) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("s must be a positive real");
    if (n < 1 || n > kMaxDim) throw ParameterError("n must be a positive integer <= 8");
}

/// g_{e,r}^(s)(x) = (r^2 - s|x|^2)_+^{1/(2s)}.
inline SConcaveFunction make_generalized_ball(double s, int n, double r = 1.0) {
    check_common(s, n);
    if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("r must be positive");
    return SConcaveFunction(s, s, n, family::GeneralizedBall{r}, identity_map(n));
}

/// h^s = R - (eps + |x|^2)^{1/2}.
inline SConcaveFunction make_cap_sqrt(double R, double eps, double s, int n) {
    check_common(s, n);
    if (!(eps > 0.0) || !(R * R > eps) || !(R > 0.0))
        throw ParameterError("cap_sqrt needs R^2 > eps > 0");
    return SConcaveFunction(s, s, n, family::CapSqrt{R, eps}, identity_map(n));
}

/// h^s = b - R|x|^2.
inline SConcaveFunction make_cap_quadratic(double b, double R, double s, int n) {
    check_common(s, n);
    if (!(b > 0.0) || !(R > 0.0) || !std::isfinite(b) || !std::isfinite(R))
        throw ParameterError("cap_quadratic needs b, R > 0");
    return SConcaveFunction(s, s, n, family::CapQuadratic{b, R}, identity_map(n));
}

enum class CapKind { Sqrt, Quadratic };

/// Dispatching form: (p1, p2) = (R, eps) for Sqrt and (b, R) for Quadratic.
inline SConcaveFunction make_cap(CapKind kind, double p1, double p2, double s, int n) {
    return kind == CapKind::Sqrt ? make_cap_sqrt(p1, p2, s, n) : make_cap_quadratic(p1, p2, s, n);
}

/// f given through phi = f^s. The support must carry a bounding box and a
/// strict interior point.
inline SConcaveFunction make_custom(double s, int n, std::function<double(const Vec&)> phi,
                                    Support support, std::function<Jet(const Vec&)> jet = {},
                                    std::string label = "custom") {
    check_common(s, n);
    family::Custom c{std::move(phi), std::move(jet),
                     std::make_shared<const Support>(std::move(support)), std::move(label)};
    return SConcaveFunction(s, s, n, std::move(c), identity_map(n));
}

/// x -> alpha f(T(x - shift)).
inline SConcaveFunction apply_affine(const SConcaveFunction& f, const Mat& T, double alpha,
                                     const Vec& shift) {
    const int n = f.n();
    if (T.rows() != n || T.cols() != n || shift.size() != n)
        throw ParameterError("affine map does not match the dimension");
    if (!(std::abs(T.determinant()) > 1e-300)) throw ParameterError("affine map T is singular");
    if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
    // alpha_f * base(T_f(T(x - shift) - shift_f))
    //   = alpha alpha_f * base(T_f T (x - (shift + T^{-1} shift_f)))
    const AffineMap& m = f.affine();
    AffineMap out{alpha * m.alpha, m.T * T, shift + T.inverse() * m.shift};
    return SConcaveFunction(f.s(), f.native_s(), n, f.family(), out);
}

inline SConcaveFunction apply_affine(const SConcaveFunction& f, const Mat& T, double alpha = 1.0) {
    return apply_affine(f, T, alpha, zeros(f.n()));
}

inline SConcaveFunction translate(const SConcaveFunction& f, const Vec& shift) {
    return apply_affine(f, identity(f.n()), 1.0, shift);
}

inline SConcaveFunction scale(const SConcaveFunction& f, double alpha) {
    return apply_affine(f, identity(f.n()), alpha, zeros(f.n()));
}

/// The same f viewed as s_new-concave. Requires s_new <= native s.
inline SConcaveFunction with_concavity(const SConcaveFunction& f, double s_new) {
    if (!(s_new > 0.0)) throw ParameterError("s must be positive");
    if (s_new > f.native_s() * (1.0 + 1e-14))
        throw DomainError("an s-concave function is only s'-concave for s' <= s");
    return SConcaveFunction(s_new, f.native_s(), f.n(), f.family(), f.affine());
}

enum class Direction { Inner, Outer };

struct SampleSpec {
    int points = 4096;
    int boundary_points = 256;
    double slack = 1e-9;
};

/// Inner: S_h in S_f and h <= f + slack on samples of S_h. Outer: the
/// reversed relations.
inline bool contains(const SConcaveFunction& h, const SConcaveFunction& f, Direction dir,
                     const SampleSpec& grid = {}) {
    if (h.n() != f.n()) throw ParameterError("contains: dimension mismatch");
    if (std::abs(h.s() - f.s()) > 1e-12 * std::max(1.0, f.s()))
        throw ParameterError("contains: concavity parameters differ");
    if (dir == Direction::Outer) return contains(f, h, Direction::Inner, grid);
    const int n = h.n();
    const Support& sh = h.support();
    const Support& sf = f.support();
    const Box box = sh.bounding_box();
    auto ok = [&](const Vec& x) {
        if (!sf.contains(x, 1e-9)) return false;
        return h.f(x) <= f.f(x) + grid.slack;
    };
    int accepted = 0;
    for (std::uint64_t k = 1; accepted < grid.points && k < 64ULL * grid.points; ++k) {
        const Vec x = box.lo + halton(k, n).cwiseProduct(box.widths());
        if (!sh.contains(x)) continue;
        ++accepted;
        if (!ok(x)) return false;
    }
    const int nb = n == 1 ? 2 : grid.boundary_points;
    for (int k = 0; k < nb; ++k) {
        const Vec x = sh.boundary_point(halton_direction(static_cast<std::uint64_t>(k), n));
        if (!sf.contains(x, 1e-9)) return false;
    }
    return ok(sh.interior_point());
}

}  // namespace funcasa
