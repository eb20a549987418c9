#pragma once

#include "funcasa/errors.hpp"
#include "funcasa/linalg.hpp"
#include "funcasa/sampling.hpp"

#include <functional>
#include <variant>

namespace funcasa {

/// Axis-aligned box [lo, hi].
struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const { return (hi - lo).prod(); }
    Vec center() const { return 0.5 * (lo + hi); }
    Vec widths() const { return hi - lo; }
    bool contains(const Vec& x) const {
        return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    }
};

/// { x : |shape (x - center)| <= 1 }.
struct EllipsoidSupport {
    Vec center;
    Mat shape;
};

/// Convex set known only through a membership predicate. Callers must
/// supply a bounding box and a strict-interior point; nothing here tries to
/// discover the set.
struct OracleSupport {
    std::function<bool(const Vec&)> member;
    Box box;
    Vec interior;
};

/// The convex support S_f = {f > 0} of an s-concave function.
class Support {
public:
    static Support ball(const Vec& center, double radius) {
        if (!(radius > 0.0)) throw ParameterError("ball support needs a positive radius");
        const int n = static_cast<int>(center.size());
        return Support(EllipsoidSupport{center, identity(n) / radius});
    }

    static Support ellipsoid(const Vec& center, const Mat& shape) {
        if (shape.rows() != center.size() || shape.cols() != center.size())
            throw ParameterError("ellipsoid shape must be square and match the center");
        if (std::abs(shape.determinant()) < 1e-300)
            throw ParameterError("ellipsoid shape matrix is singular");
        return Support(EllipsoidSupport{center, shape});
    }

    static Support oracle(std::function<bool(const Vec&)> member, const Box& box,
                          const Vec& interior) {
        if (!member) throw ParameterError("oracle support needs a membership predicate");
        if (box.lo.size() != interior.size() || box.hi.size() != interior.size())
            throw ParameterError("oracle bounding box and interior point disagree in dimension");
        if (!((box.hi - box.lo).array() > 0.0).all())
            throw ParameterError("oracle bounding box is degenerate");
        if (!box.contains(interior) || !member(interior))
            throw ParameterError("oracle interior point is not inside the set");
        return Support(OracleSupport{std::move(member), box, interior});
    }

    int dim() const {
        return std::visit([](const auto& s) { return dim_of(s); }, repr_);
    }

    bool is_ellipsoid() const { return std::holds_alternative<EllipsoidSupport>(repr_); }
    const EllipsoidSupport& as_ellipsoid() const { return std::get<EllipsoidSupport>(repr_); }
    const OracleSupport& as_oracle() const { return std::get<OracleSupport>(repr_); }

    /// Closed-set membership with a relative tolerance on the gauge.
    bool contains(const Vec& x, double tol = 0.0) const {
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_))
            return (e->shape * (x - e->center)).norm() <= 1.0 + tol;
        const auto& o = std::get<OracleSupport>(repr_);
        if (tol > 0.0) {
            // Shrink toward the interior point before asking the oracle.
            const Vec y = o.interior + (x - o.interior) / (1.0 + tol);
            return o.box.contains(y) && o.member(y);
        }
        return o.box.contains(x) && o.member(x);
    }

    Vec interior_point() const {
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_)) return e->center;
        return std::get<OracleSupport>(repr_).interior;
    }

    Box bounding_box() const {
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_)) {
            const Mat inv = e->shape.inverse();
            Vec half(e->center.size());
            for (int i = 0; i < half.size(); ++i) half[i] = inv.row(i).norm();
            return Box{e->center - half, e->center + half};
        }
        return std::get<OracleSupport>(repr_).box;
    }

    /// Minkowski gauge of x with respect to the set recentered at its
    /// interior point: <= 1 inside, > 1 outside.
    double gauge(const Vec& x) const {
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_))
            return (e->shape * (x - e->center)).norm();
        const auto& o = std::get<OracleSupport>(repr_);
        const Vec dir = x - o.interior;
        if (dir.norm() == 0.0) return 0.0;
        const double t = ray_exit(o, o.interior, dir);
        return 1.0 / t;
    }

    /// Point where the ray from the interior point along `dir` leaves the set.
    Vec boundary_point(const Vec& dir) const {
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_)) {
            const double g = (e->shape * dir).norm();
            return e->center + dir / g;
        }
        const auto& o = std::get<OracleSupport>(repr_);
        return o.interior + ray_exit(o, o.interior, dir) * dir;
    }

    /// Gauge of x with respect to the set itself (origin-based Minkowski
    /// functional). Requires 0 in the interior.
    double origin_gauge(const Vec& x) const {
        if (x.norm() == 0.0) return 0.0;
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_)) {
            // Solve |A(x/t - c)| = 1 for t > 0: |Ax - tAc|^2 = t^2.
            const Vec ax = e->shape * x;
            const Vec ac = e->shape * e->center;
            const double qa = ac.squaredNorm() - 1.0;  // < 0 when 0 is interior
            const double qb = -2.0 * ax.dot(ac);
            const double qc = ax.squaredNorm();
            if (qa >= 0.0) throw DomainError("origin is not interior to the support");
            const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
            return (-qb - disc) / (2.0 * qa);
        }
        const auto& o = std::get<OracleSupport>(repr_);
        const Vec zero = Vec::Zero(x.size());
        if (!o.member(zero)) throw DomainError("origin is not interior to the support");
        return 1.0 / ray_exit(o, zero, x);
    }

    /// Support function h(y) = sup_{x in S} <x, y>.
    double support_function(const Vec& y) const {
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_)) {
            const Mat inv_t = e->shape.inverse().transpose();
            return e->center.dot(y) + (inv_t * y).norm();
        }
        // Sampled maximum over boundary points; slightly underestimates
        // for sets with sharp corners between sample rays.
        const auto& o = std::get<OracleSupport>(repr_);
        const int n = dim();
        double best = -std::numeric_limits<double>::infinity();
        const int rays = n == 1 ? 2 : 2048;
        for (int k = 0; k < rays; ++k) {
            const Vec d = halton_direction(static_cast<std::uint64_t>(k), n);
            best = std::max(best, (o.interior + ray_exit(o, o.interior, d) * d).dot(y));
        }
        return best;
    }

    /// Preimage { x : T (x - shift) in S }.
    Support pullback(const Mat& t, const Vec& shift) const {
        const Mat t_inv = t.inverse();
        if (const auto* e = std::get_if<EllipsoidSupport>(&repr_)) {
            return Support(EllipsoidSupport{shift + t_inv * e->center, e->shape * t});
        }
        const auto& o = std::get<OracleSupport>(repr_);
        auto member = o.member;
        auto inner_box = o.box;
        const Mat tc = t;
        const Vec sc = shift;
        // Image of the base box under x = shift + T^{-1} u.
        const Vec mid = shift + t_inv * o.box.center();
        const Vec half_base = 0.5 * o.box.widths();
        Vec half(mid.size());
        for (int i = 0; i < half.size(); ++i)
            half[i] = t_inv.row(i).cwiseAbs().dot(half_base);
        return Support(OracleSupport{
            [member, inner_box, tc, sc](const Vec& x) {
                const Vec u = tc * (x - sc);
                return inner_box.contains(u) && member(u);
            },
            Box{mid - half, mid + half}, shift + t_inv * o.interior});
    }

private:
    using Repr = std::variant<EllipsoidSupport, OracleSupport>;
    explicit Support(EllipsoidSupport e) : repr_(std::move(e)) {}
    explicit Support(OracleSupport o) : repr_(std::move(o)) {}

    static int dim_of(const EllipsoidSupport& e) { return static_cast<int>(e.center.size()); }
    static int dim_of(const OracleSupport& o) { return static_cast<int>(o.interior.size()); }

    // Largest t with from + t*dir inside, by bisection (60 halvings).
    static double ray_exit(const OracleSupport& o, const Vec& from, const Vec& dir) {
        double hi = 1.0;
        auto inside = [&](double t) {
            const Vec p = from + t * dir;
            return o.box.contains(p) && o.member(p);
        };
        int grow = 0;
        while (inside(hi) && grow++ < 200) hi *= 2.0;
        double lo = 0.0;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (inside(mid) ? lo : hi) = mid;
        }
        return lo;
    }

    Repr repr_;
};

}  // namespace funcasa
