#pragma once

#include "funcasa/quadrature.hpp"
#include "funcasa/sconcave.hpp"

namespace funcasa {

/// Zeroth, first and second moments of f with their error estimates.
struct FunctionMoments {
    IntegralResult mass;
    Vec first;
    Mat second;
    double error = 0.0;  ///< largest error estimate among the entries

    Vec barycenter() const { return first / mass.value; }
    Mat covariance() const {
        const Vec c = barycenter();
        return second / mass.value - c * c.transpose();
    }
};

inline FunctionMoments function_moments(const SConcaveFunction& f, const QuadratureSpec& spec,
                                        int degree = 2) {
    const int n = f.n();
    const double inv_s = 1.0 / f.s();
    auto fval = [inv_s](const Sample& p) {
        return p.jet.phi > 0.0 ? std::pow(p.jet.phi, inv_s) : 0.0;
    };
    FunctionMoments m;
    m.mass = integrate_jet(f, fval, spec, false);
    m.error = m.mass.error_estimate;
    m.first = zeros(n);
    m.second = Mat::Zero(n, n);
    // First moments of centered f vanish, so they get an absolute floor
    // scaled by mass times support size.
    QuadratureSpec sp = spec;
    const Box box = f.support().bounding_box();
    sp.abs_tol = std::max(spec.abs_tol,
                          spec.tol * std::abs(m.mass.value) * box.widths().maxCoeff());
    if (degree >= 1)
        for (int i = 0; i < n; ++i) {
            auto r = integrate_jet(
                f, [&](const Sample& p) { return p.x[i] * fval(p); }, sp, false);
            m.first[i] = r.value;
            m.error = std::max(m.error, r.error_estimate);
        }
    if (degree >= 2)
        for (int i = 0; i < n; ++i)
            for (int k = i; k < n; ++k) {
                auto r = integrate_jet(
                    f, [&](const Sample& p) { return p.x[i] * p.x[k] * fval(p); }, sp, false);
                m.second(i, k) = m.second(k, i) = r.value;
                m.error = std::max(m.error, r.error_estimate);
            }
    return m;
}

/// Barycenter int x f / int f.
inline Vec center_of_gravity(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const FunctionMoments m = function_moments(f, spec, 1);
    if (!(m.mass.value > 0.0)) throw NumericError("integral of f is not positive");
    return m.barycenter();
}

/// f translated so its barycenter is at the origin.
inline SConcaveFunction recenter(const SConcaveFunction& f, const QuadratureSpec& spec = {}) {
    const Vec c = center_of_gravity(f, spec);
    return translate(f, -c);
}

}  // namespace funcasa
