#pragma once

#include "funcasa/errors.hpp"
#include "funcasa/linalg.hpp"
#include "funcasa/parallel.hpp"
#include "funcasa/sampling.hpp"
#include "funcasa/sconcave.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace funcasa {

enum class Scheme { Radial, TensorGrid, MonteCarlo };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Radial: return "radial";
        case Scheme::TensorGrid: return "tensor";
        default: return "montecarlo";
    }
}

struct QuadratureSpec {
    Scheme scheme = Scheme::Radial;
    double tol = 1e-6;
    std::int64_t max_evals = 20'000'000;
    std::uint64_t seed = 0;
    double boundary_offset = 1e-12;
    /// Absolute floor for the stopping rule; integrals near zero never meet
    /// a purely relative tolerance.
    double abs_tol = 0.0;

    void validate() const {
        if (!(tol > 0.0)) throw ParameterError("quadrature tol must be positive");
        if (max_evals < 1000) throw ParameterError("max_evals must be at least 1000");
        if (!(boundary_offset > 0.0) || boundary_offset > 1e-6)
            throw ParameterError("boundary_offset must lie in (0, 1e-6]");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evals = 0;
};

inline IntegralResult operator+(IntegralResult a, const IntegralResult& b) {
    a.value += b.value;
    a.error_estimate += b.error_estimate;
    a.evals += b.evals;
    return a;
}

/// Surface area of the unit sphere S^{n-1}.
inline double sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

/// Volume of the unit ball B_2^n.
inline double unit_ball_volume(int n) { return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

namespace detail {

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
inline void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(static_cast<std::size_t>(m));
    weights.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        nodes[static_cast<std::size_t>(k)] = es.eigenvalues()[k];
        const double v = es.eigenvectors()(0, k);
        weights[static_cast<std::size_t>(k)] = 2.0 * v * v;
    }
}

/// Directions and weights of an angular rule on S^{n-1} at refinement
/// level `level` (each level roughly doubles the count).
inline void angular_rule(int n, int level, std::vector<Vec>& dirs, std::vector<double>& w) {
    dirs.clear();
    w.clear();
    if (n == 1) {
        dirs.push_back(Vec::Constant(1, 1.0));
        dirs.push_back(Vec::Constant(1, -1.0));
        w = {1.0, 1.0};
        return;
    }
    if (n == 2) {
        const int m = 8 << level;
        for (int k = 0; k < m; ++k) {
            const double a = 2.0 * M_PI * (k + 0.5) / m;
            Vec v(2);
            v << std::cos(a), std::sin(a);
            dirs.push_back(v);
            w.push_back(2.0 * M_PI / m);
        }
        return;
    }
    if (n == 3) {
        const int m = 4 << level;
        std::vector<double> z, wz;
        gauss_legendre(m, z, wz);
        const int ma = 2 * m;
        for (int i = 0; i < m; ++i) {
            const double rz = std::sqrt(std::max(0.0, 1.0 - z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)]));
            for (int k = 0; k < ma; ++k) {
                const double a = 2.0 * M_PI * (k + 0.5) / ma;
                Vec v(3);
                v << rz * std::cos(a), rz * std::sin(a), z[static_cast<std::size_t>(i)];
                dirs.push_back(v);
                w.push_back(wz[static_cast<std::size_t>(i)] * 2.0 * M_PI / ma);
            }
        }
        return;
    }
    // Quasi-random directions, equal weights.
    const int m = 256 << level;
    const double area = sphere_area(n);
    for (int k = 0; k < m; ++k) {
        dirs.push_back(halton_direction(static_cast<std::uint64_t>(k), n));
        w.push_back(area / m);
    }
}

/// Integral over d in (0, 1) of h(d). The interval [0, delta) is replaced
/// by a power-law extrapolation from h(delta), h(2 delta), h(4 delta).
template <class H>
IntegralResult depth_integral(H&& h, double delta, double tol) {
    IntegralResult r;
    auto wrapped = [&](double x, double xc) {
        ++r.evals;
        // Near the left end the exact depth is delta + |xc|.
        const double d = (xc < 0.0) ? delta - xc : x;
        const double v = h(d);
        return std::isfinite(v) ? v : 0.0;
    };
    double err = 0.0;
    double l1 = 0.0;
    const double rel = std::max(1e-13, tol);
    const double main =
        tanh_sinh_rule().integrate(wrapped, delta, 1.0, rel, &err, &l1);
    if (!std::isfinite(main)) throw NumericError("radial integral diverged");
    const double h1 = h(delta), h2 = h(2.0 * delta), h4 = h(4.0 * delta);
    r.evals += 3;
    double tail = 0.0;
    double tail_err = 0.0;
    auto fit_tail = [&](double ha, double hb, double da) -> double {
        // h(d) ~ C d^a fitted through (da, ha), (2 da, hb); returns int_0^delta.
        if (ha == 0.0 || hb == 0.0 || (ha > 0.0) != (hb > 0.0)) return delta * ha;
        const double a = std::log2(hb / ha);
        if (a <= -0.98) throw NumericError("non-integrable boundary singularity", main, l1);
        const double c = ha / std::pow(da, a);
        return c * std::pow(delta, a + 1.0) / (a + 1.0);
    };
    if (std::isfinite(h1) && std::isfinite(h2) && std::isfinite(h4)) {
        tail = fit_tail(h1, h2, delta);
        const double alt = fit_tail(h2, h4, 2.0 * delta);
        tail_err = std::abs(tail - alt) + 1e-3 * std::abs(tail);
    } else {
        throw NumericError("integrand not finite near the boundary", main, l1);
    }
    r.value = main + tail;
    r.error_estimate = err + tail_err;
    return r;
}

}  // namespace detail

/// Sample handed to integrands: the point, phi and derivatives when
/// requested.
struct Sample {
    const Vec& x;
    const Jet& jet;
};

/// Integral of g(x, jet) over S_f. The radial scheme parametrizes S_f by
/// depth from its boundary so boundary singularities of power type are
/// resolved; grid and Monte Carlo schemes work in the bounding box and drop
/// the delta-shell at the boundary (reported through the error estimate for
/// the grid scheme only via refinement).
template <class G>
IntegralResult integrate_jet(const SConcaveFunction& f, G&& g, const QuadratureSpec& spec,
                             bool need_jet = true) {
    spec.validate();
    const int n = f.n();
    if (spec.scheme == Scheme::Radial) {
        std::vector<Vec> dirs;
        std::vector<double> w;
        IntegralResult prev;
        bool have_prev = false;
        std::int64_t evals = 0;
        const int max_level = n == 1 ? 0 : (n == 2 ? 7 : (n == 3 ? 4 : 6));
        for (int level = 0; level <= max_level; ++level) {
            detail::angular_rule(n, level, dirs, w);
            std::vector<IntegralResult> rays(dirs.size());
            parallel_for(dirs.size(), [&](std::size_t k) {
                const PolarFrame frame = f.polar_frame(dirs[k]);
                auto h = [&](double d) {
                    const PolarPoint p = f.polar_point(frame, d, need_jet);
                    return p.weight * g(Sample{p.x, p.jet});
                };
                rays[k] = detail::depth_integral(h, spec.boundary_offset, 0.01 * spec.tol);
            });
            IntegralResult cur;
            for (std::size_t k = 0; k < rays.size(); ++k) {
                cur.value += w[k] * rays[k].value;
                cur.error_estimate += w[k] * rays[k].error_estimate;
                cur.evals += rays[k].evals;
            }
            evals += cur.evals;
            if (n == 1) {
                cur.evals = evals;
                return cur;
            }
            if (have_prev) {
                const double diff = std::abs(cur.value - prev.value);
                IntegralResult out{cur.value, cur.error_estimate + diff, evals};
                if (diff <= std::max(spec.tol * std::abs(cur.value), spec.abs_tol) || diff <= 1e-300)
                    return out;
                if (evals > spec.max_evals || level == max_level)
                    throw NumericError("radial quadrature did not reach its tolerance", out.value,
                                       out.error_estimate);
            }
            prev = cur;
            have_prev = true;
        }
        throw NumericError("radial quadrature did not reach its tolerance", prev.value,
                           prev.error_estimate);
    }

    const Support& sup = f.support();
    const Box box = sup.bounding_box();
    const double vol = box.volume();
    const bool shell = sup.is_ellipsoid();
    auto value_at = [&](const Vec& x) -> double {
        if (!sup.contains(x)) return 0.0;
        if (shell && sup.gauge(x) > 1.0 - spec.boundary_offset) return 0.0;
        if (need_jet) {
            const Jet j = f.jet(x);
            return g(Sample{x, j});
        }
        Jet j;
        j.phi = f.phi(x);
        return g(Sample{x, j});
    };

    if (spec.scheme == Scheme::TensorGrid) {
        std::int64_t evals = 0;
        double prev = 0.0;
        bool have_prev = false;
        for (int k = (n == 1 ? 64 : 16);; k *= 2) {
            const std::int64_t cells = static_cast<std::int64_t>(std::pow(k, n));
            if (have_prev && evals + cells > spec.max_evals)
                throw NumericError("tensor grid did not reach its tolerance", prev,
                                   std::abs(prev));
            std::vector<double> slab(static_cast<std::size_t>(k), 0.0);
            const Vec hw = box.widths() / k;
            parallel_for(static_cast<std::size_t>(k), [&](std::size_t i0) {
                // First coordinate fixed per task so the reduction order is stable.
                double acc = 0.0;
                const std::int64_t rest = cells / k;
                Vec x(n);
                for (std::int64_t idx = 0; idx < rest; ++idx) {
                    std::int64_t r = idx;
                    x[0] = box.lo[0] + (static_cast<double>(i0) + 0.5) * hw[0];
                    for (int dmn = 1; dmn < n; ++dmn) {
                        x[dmn] = box.lo[dmn] + (static_cast<double>(r % k) + 0.5) * hw[dmn];
                        r /= k;
                    }
                    acc += value_at(x);
                }
                slab[i0] = acc;
            });
            double sum = 0.0;
            for (double v : slab) sum += v;
            const double cur = sum * vol / static_cast<double>(cells);
            evals += cells;
            if (have_prev) {
                const double diff = std::abs(cur - prev);
                if (diff <= std::max(spec.tol * std::abs(cur), spec.abs_tol))
                    return IntegralResult{cur, diff, evals};
            }
            prev = cur;
            have_prev = true;
        }
    }

    // Stratified Monte Carlo: k^n equal strata with m samples each; the
    // stream of stratum i is seeded by (seed, i).
    std::int64_t evals = 0;
    IntegralResult last;
    for (std::int64_t total = 1 << 14;; total *= 4) {
        if (evals > 0 && evals + total > spec.max_evals)
            throw NumericError("Monte Carlo did not reach its tolerance", last.value,
                               last.error_estimate);
        const int k = std::max(1, static_cast<int>(std::floor(std::pow(total / 8.0, 1.0 / n))));
        std::int64_t strata = 1;
        for (int i = 0; i < n; ++i) strata *= k;
        const std::int64_t m = std::max<std::int64_t>(2, total / strata);
        std::vector<double> means(static_cast<std::size_t>(strata)), vars(static_cast<std::size_t>(strata));
        const Vec hw = box.widths() / k;
        parallel_for(static_cast<std::size_t>(strata), [&](std::size_t st) {
            auto rng = stream_rng(spec.seed ^ static_cast<std::uint64_t>(total), st);
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            Vec lo(n);
            std::int64_t r = static_cast<std::int64_t>(st);
            for (int dmn = 0; dmn < n; ++dmn) {
                lo[dmn] = box.lo[dmn] + static_cast<double>(r % k) * hw[dmn];
                r /= k;
            }
            double s1 = 0.0, s2 = 0.0;
            Vec x(n);
            for (std::int64_t j = 0; j < m; ++j) {
                for (int dmn = 0; dmn < n; ++dmn) x[dmn] = lo[dmn] + uni(rng) * hw[dmn];
                const double v = value_at(x);
                s1 += v;
                s2 += v * v;
            }
            const double mean = s1 / m;
            means[st] = mean;
            vars[st] = std::max(0.0, s2 / m - mean * mean) / (m - 1);
        });
        const double cell_vol = vol / static_cast<double>(strata);
        double val = 0.0, var = 0.0;
        for (std::size_t i = 0; i < means.size(); ++i) {
            val += means[i] * cell_vol;
            var += vars[i] * cell_vol * cell_vol;
        }
        evals += strata * m;
        last = IntegralResult{val, 3.0 * std::sqrt(var), evals};
        if (last.error_estimate <= std::max(spec.tol * std::abs(val), spec.abs_tol)) return last;
    }
}

/// Integral of g(x) over S_f.
template <class G>
IntegralResult integrate_support(const SConcaveFunction& f, G&& g, const QuadratureSpec& spec) {
    return integrate_jet(
        f, [&](const Sample& p) { return g(p.x); }, spec, false);
}

/// Integral of f itself.
inline IntegralResult integral_of(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const double inv_s = 1.0 / f.s();
    return integrate_jet(
        f, [&](const Sample& p) { return p.jet.phi > 0.0 ? std::pow(p.jet.phi, inv_s) : 0.0; },
        spec, false);
}

/// |S^{n-1}| times the integral over (0, r_max) of profile(t) t^{n-1}.
template <class P>
IntegralResult integrate_radial(P&& profile, double r_max, int n, const QuadratureSpec& spec) {
    spec.validate();
    if (!(r_max > 0.0)) throw ParameterError("r_max must be positive");
    if (n < 1) throw ParameterError("n must be positive");
    auto h = [&](double d) {
        const double t = r_max * (1.0 - d);
        return profile(t) * std::pow(t, n - 1) * r_max;
    };
    IntegralResult r = detail::depth_integral(h, spec.boundary_offset, 0.01 * spec.tol);
    const double area = n == 1 ? 2.0 : sphere_area(n);
    r.value *= area;
    r.error_estimate *= area;
    return r;
}

/// Region given by membership and a bounding box.
struct Region {
    std::function<bool(const Vec&)> member;
    Box box;
};

struct Moments {
    double volume = 0.0;
    double volume_error = 0.0;
    Vec first;         ///< integral of x over the region
    Vec first_error;
    Mat second;        ///< integral of x x^T over the region
    Mat second_error;
    std::int64_t evals = 0;
    double acceptance = 0.0;

    Vec mean() const { return first / volume; }
    Mat covariance() const {
        const Vec c = mean();
        return second / volume - c * c.transpose();
    }
};

/// Stratified Monte Carlo volume, first and second moments of a region.
/// Errors are 3x the standard error.
inline Moments mc_moments(const Region& region, int degree, const QuadratureSpec& spec) {
    spec.validate();
    if (degree < 0 || degree > 2) throw ParameterError("moment degree must be 0, 1 or 2");
    const int n = region.box.dim();
    if (n < 1 || n > 6) throw ParameterError("Monte Carlo moments need dimension 1..6");
    const std::int64_t total = std::max<std::int64_t>(1000, spec.max_evals);
    const int k = std::max(1, static_cast<int>(std::floor(std::pow(total / 16.0, 1.0 / n))));
    std::int64_t strata = 1;
    for (int i = 0; i < n; ++i) strata *= k;
    const std::int64_t m = std::max<std::int64_t>(2, total / strata);
    const int nq = 1 + n + n * n;  // 1, x_i, x_i x_j
    std::vector<std::vector<double>> s1(static_cast<std::size_t>(strata)),
        s2(static_cast<std::size_t>(strata));
    std::vector<std::int64_t> hits(static_cast<std::size_t>(strata), 0);
    const Vec hw = region.box.widths() / k;
    parallel_for(static_cast<std::size_t>(strata), [&](std::size_t st) {
        auto rng = stream_rng(spec.seed, st);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        Vec lo(n);
        std::int64_t r = static_cast<std::int64_t>(st);
        for (int dmn = 0; dmn < n; ++dmn) {
            lo[dmn] = region.box.lo[dmn] + static_cast<double>(r % k) * hw[dmn];
            r /= k;
        }
        std::vector<double> a(static_cast<std::size_t>(nq), 0.0), b(static_cast<std::size_t>(nq), 0.0);
        Vec x(n);
        std::vector<double> q(static_cast<std::size_t>(nq));
        for (std::int64_t j = 0; j < m; ++j) {
            for (int dmn = 0; dmn < n; ++dmn) x[dmn] = lo[dmn] + uni(rng) * hw[dmn];
            if (!region.member(x)) continue;
            ++hits[st];
            q[0] = 1.0;
            for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(1 + i)] = x[i];
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) q[static_cast<std::size_t>(1 + n + i * n + l)] = x[i] * x[l];
            for (int i = 0; i < nq; ++i) {
                a[static_cast<std::size_t>(i)] += q[static_cast<std::size_t>(i)];
                b[static_cast<std::size_t>(i)] += q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)];
            }
        }
        s1[st] = std::move(a);
        s2[st] = std::move(b);
    });
    const double cell_vol = region.box.volume() / static_cast<double>(strata);
    std::vector<double> val(static_cast<std::size_t>(nq), 0.0), var(static_cast<std::size_t>(nq), 0.0);
    std::int64_t hit_total = 0;
    for (std::size_t st = 0; st < s1.size(); ++st) {
        hit_total += hits[st];
        for (int i = 0; i < nq; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double mean = s1[st][ii] / m;
            val[ii] += mean * cell_vol;
            var[ii] += std::max(0.0, s2[st][ii] / m - mean * mean) / (m - 1) * cell_vol * cell_vol;
        }
    }
    Moments out;
    out.evals = strata * m;
    out.acceptance = static_cast<double>(hit_total) / static_cast<double>(out.evals);
    if (out.acceptance < 1e-4)
        throw NumericError("Monte Carlo acceptance below 1e-4; tighten the bounding box");
    out.volume = val[0];
    out.volume_error = 3.0 * std::sqrt(var[0]);
    out.first = Vec::Zero(n);
    out.first_error = Vec::Zero(n);
    out.second = Mat::Zero(n, n);
    out.second_error = Mat::Zero(n, n);
    if (degree >= 1)
        for (int i = 0; i < n; ++i) {
            out.first[i] = val[static_cast<std::size_t>(1 + i)];
            out.first_error[i] = 3.0 * std::sqrt(var[static_cast<std::size_t>(1 + i)]);
        }
    if (degree >= 2)
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                const auto ii = static_cast<std::size_t>(1 + n + i * n + l);
                out.second(i, l) = val[ii];
                out.second_error(i, l) = 3.0 * std::sqrt(var[ii]);
            }
    return out;
}

}  // namespace funcasa
