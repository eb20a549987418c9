#pragma once

#include "funcasa/asa.hpp"
#include "funcasa/bodies.hpp"
#include "funcasa/check.hpp"
#include "funcasa/citations.hpp"
#include "funcasa/duality.hpp"
#include "funcasa/extremal.hpp"
#include "funcasa/moments.hpp"
#include "funcasa/parallel.hpp"
#include "funcasa/quadrature.hpp"
#include "funcasa/sampling.hpp"
#include "funcasa/sconcave.hpp"
#include "funcasa/serialize.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace funcasa {

struct SuiteConfig {
    std::vector<double> s_values{0.5, 1.0, 2.0};
    std::vector<int> dims{1, 2};
    std::vector<double> radii{0.5, 1.0, 2.0};
    int random_images = 1;  ///< random recentered affine images of the caps per (s, n)
    std::uint64_t seed = 0;
    QuadratureSpec spec{};
    MinimizerSpec minimizer{};
    std::int64_t mc_samples = 1'000'000;
    int extremal_budget = 4000;
    std::vector<int> extremal_dims{1};
    double equality_tol = 1e-3;
    double search_tol = 0.02;
    bool extremal = true;
    bool negative_control = false;
    std::vector<std::string> only;  ///< restrict to these check families (empty: all)
};

/// A builtin test function with a short label.
struct NamedFunction {
    std::string label;
    SConcaveFunction f;
    bool ball = false;
    double r = 1.0;
};

inline std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// g_{e,r} for the configured radii, CapQuadratic(1,1), CapSqrt(1,1/4) and
/// random recentered affine images of the caps.
inline std::vector<NamedFunction> builtin_functions(double s, int n, const SuiteConfig& cfg) {
    std::vector<NamedFunction> out;
    for (double r : cfg.radii)
        out.push_back({"ball(r=" + fmt_num(r) + ")", make_generalized_ball(s, n, r), true, r});
    const SConcaveFunction cq = make_cap_quadratic(1.0, 1.0, s, n);
    const SConcaveFunction cs = make_cap_sqrt(1.0, 0.25, s, n);
    out.push_back({"cap_quadratic", cq});
    out.push_back({"cap_sqrt", cs});
    std::mt19937_64 rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(1000 * n + std::lround(100 * s)));
    std::normal_distribution<double> gauss(0.0, 0.3);
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    for (int k = 0; k < cfg.random_images; ++k) {
        Mat T = identity(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T(i, j) += gauss(rng);
        if (std::abs(T.determinant()) < 0.2) T += 0.5 * identity(n);
        const double alpha = unif(rng);
        Vec shift(n);
        for (int i = 0; i < n; ++i) shift[i] = gauss(rng);
        const SConcaveFunction& base = k % 2 == 0 ? cq : cs;
        out.push_back({std::string(k % 2 == 0 ? "cap_quadratic" : "cap_sqrt") + "_affine#" + std::to_string(k),
                       recenter(apply_affine(base, T, alpha, shift), cfg.spec)});
    }
    return out;
}

inline std::string subject_of(const NamedFunction& nf, double s, int n) {
    return nf.label + " s=" + fmt_num(s) + " n=" + std::to_string(n);
}

namespace detail {

struct Job {
    std::string family;
    std::string label;
    std::function<void(std::vector<CheckResult>&)> run;
};

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace detail

/// Every check family the suite can emit.
inline std::vector<std::string> check_families() {
    return {"ball_normalization", "ball_scaling", "affine_covariance", "scale_covariance", "holder",
            "asa_duality", "form_equivalence", "monotone_lambda", "endpoints", "range_validity",
            "ball_extremal", "invariance", "monotone_s", "isoperimetric", "extremal_duality",
            "monotone_lambda_extremal", "sandwich", "santalo", "lifted_volume", "graph_volume",
            "lifted_isotropic", "involution", "order_reversal", "negative_control"};
}

inline std::vector<CheckResult> run_property_suite(const SuiteConfig& cfg) {
    using detail::Job;
    if (cfg.s_values.empty() || cfg.dims.empty()) throw ParameterError("suite needs s and n values");
    for (double s : cfg.s_values)
        if (!(s > 0.0)) throw ParameterError("suite s values must be positive");
    for (int n : cfg.dims)
        if (n < 1 || n > 3) throw ParameterError("suite dimensions must be in 1..3");
    cfg.spec.validate();
    const std::set<std::string> only(cfg.only.begin(), cfg.only.end());
    auto wanted = [&](const std::string& fam) {
        if (fam == "negative_control") return cfg.negative_control;
        return only.empty() || only.count(fam) > 0;
    };

    const QuadratureSpec& spec = cfg.spec;
    const MinimizerSpec& mspec = cfg.minimizer;
    QuadratureSpec mc = spec;
    mc.max_evals = std::max<std::int64_t>(cfg.mc_samples, 100000);
    mc.seed = cfg.seed;
    const double eq = cfg.equality_tol;
    const double stol = cfg.search_tol;
    auto has_dim = [&](int n) { return std::find(cfg.dims.begin(), cfg.dims.end(), n) != cfg.dims.end(); };
    auto has_s = [&](double s) { return std::find(cfg.s_values.begin(), cfg.s_values.end(), s) != cfg.s_values.end(); };
    auto query = [&](ExtremalKind kind, double lambda) {
        ExtremalQuery q;
        q.kind = kind;
        q.lambda = lambda;
        q.budget = cfg.extremal_budget;
        q.seed = cfg.seed;
        q.spec = spec;
        q.minimizer = mspec;
        return q;
    };

    std::vector<Job> jobs;
    auto add = [&](std::string fam, std::string label, std::function<void(std::vector<CheckResult>&)> fn) {
        if (wanted(fam)) jobs.push_back(Job{std::move(fam), std::move(label), std::move(fn)});
    };

    for (double s : cfg.s_values) {
        for (int n : cfg.dims) {
            const std::string sn = "s=" + fmt_num(s) + ",n=" + std::to_string(n);
            const std::vector<NamedFunction> fns = builtin_functions(s, n, cfg);

            add("ball_normalization", sn, [=](std::vector<CheckResult>& out) {
                const SConcaveFunction g = make_generalized_ball(s, n);
                for (double l : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    const IntegralResult a = asa(g, l, spec);
                    out.push_back(make_check("ball_normalization/" + sn + ",lambda=" + fmt_num(l),
                                             "ball_normalization", cite::kBallAsa, "ball(r=1) " + sn,
                                             Relation::Equal, a.value, ball_integral(s, n), a.error_estimate, eq));
                }
            });

            add("ball_scaling", sn, [=](std::vector<CheckResult>& out) {
                const SConcaveFunction g = make_generalized_ball(s, n);
                for (double r : cfg.radii) {
                    if (r == 1.0) continue;
                    const SConcaveFunction gr = make_generalized_ball(s, n, r);
                    for (double l : {0.25, 0.5, 0.75}) {
                        const IntegralResult a = asa(gr, l, spec), b = asa(g, l, spec);
                        const double k = std::pow(r, (n + 1.0 / s) * (1.0 - 2.0 * l));
                        out.push_back(make_check("ball_scaling/r=" + fmt_num(r) + "," + sn + ",lambda=" + fmt_num(l),
                                                 "ball_scaling", cite::kBallScaling,
                                                 "ball(r=" + fmt_num(r) + ") " + sn, Relation::Equal, a.value,
                                                 k * b.value, a.error_estimate + k * b.error_estimate, eq));
                    }
                }
            });

            if (n == 2) {
                add("affine_covariance", sn, [=](std::vector<CheckResult>& out) {
                    std::mt19937_64 rng = stream_rng(cfg.seed, 77 + std::lround(100 * s));
                    std::normal_distribution<double> gauss(0.0, 0.5);
                    const std::vector<NamedFunction> base{{"ball(r=1)", make_generalized_ball(s, n)},
                                                          {"cap_quadratic", make_cap_quadratic(1, 1, s, n)}};
                    for (const auto& nf : base) {
                        for (int t = 0; t < 3; ++t) {
                            Mat T = identity(n);
                            for (int i = 0; i < n; ++i)
                                for (int j = 0; j < n; ++j) T(i, j) += gauss(rng);
                            if (std::abs(T.determinant()) < 0.2) T += identity(n);
                            const SConcaveFunction fT = apply_affine(nf.f, T, 1.0);
                            for (double l : {0.25, 0.75}) {
                                const IntegralResult a = asa(fT, l, spec), b = asa(nf.f, l, spec);
                                const double k = std::pow(std::abs(T.determinant()), 2.0 * l - 1.0);
                                out.push_back(make_check(
                                    "affine_covariance/" + nf.label + ",T#" + std::to_string(t) + "," + sn +
                                        ",lambda=" + fmt_num(l),
                                    "affine_covariance", cite::kAffine, subject_of(nf, s, n), Relation::Equal,
                                    a.value, k * b.value, a.error_estimate + k * b.error_estimate, spec.tol));
                            }
                        }
                    }
                });
            }

            if (n == 1) {
                auto scale_job = [=](bool corrupted) {
                    return [=](std::vector<CheckResult>& out) {
                        const SConcaveFunction f = make_cap_quadratic(1, 1, s, n);
                        for (double alpha : {0.5, 2.0}) {
                            for (double l : {0.25, 0.75}) {
                                const IntegralResult a = asa(scale(f, alpha), l, spec), b = asa(f, l, spec);
                                const double k = std::pow(alpha, corrupted ? 1.0 - l : 1.0 - 2.0 * l);
                                CheckResult c = make_check(
                                    std::string(corrupted ? "negative_control" : "scale_covariance") +
                                        "/alpha=" + fmt_num(alpha) + "," + sn + ",lambda=" + fmt_num(l),
                                    corrupted ? "negative_control" : "scale_covariance", cite::kAffine,
                                    "cap_quadratic " + sn, Relation::Equal, a.value, k * b.value,
                                    a.error_estimate + k * b.error_estimate, spec.tol);
                                if (corrupted) c.note = "deliberately wrong exponent alpha^{1-lambda}; must fail";
                                out.push_back(c);
                            }
                        }
                    };
                };
                add("scale_covariance", sn, scale_job(false));
                add("negative_control", sn, scale_job(true));
            }

            add("holder", sn, [=](std::vector<CheckResult>& out) {
                for (const auto& nf : fns) {
                    if (nf.label.find("affine") != std::string::npos) continue;
                    if (nf.ball && nf.r != 1.0) continue;
                    const IntegralResult F = integral_of(nf.f, spec);
                    const IntegralResult D = integral_of(legendre_s_dual(nf.f, mspec).as_function(), spec);
                    // lambda = 1 and lambda outside [0,1] use as_1(f) = int f^o, which
                    // needs f^o to vanish on its boundary; of the builtins only the
                    // balls (unbounded boundary gradient) qualify.
                    std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75};
                    if (nf.ball) lambdas.insert(lambdas.end(), {1.0, -0.5, 1.5});
                    for (double l : lambdas) {
                        const IntegralResult a = asa(nf.f, l, spec);
                        const double rhs = std::pow(F.value, 1.0 - l) * std::pow(D.value, l);
                        const double rerr = rhs * (std::abs(1.0 - l) * F.error_estimate / F.value +
                                                   std::abs(l) * D.error_estimate / D.value);
                        const Relation rel = (l == 0.0 || l == 1.0 || nf.ball)
                                                 ? Relation::Equal
                                                 : (l > 0.0 && l < 1.0 ? Relation::LessEq : Relation::GreaterEq);
                        out.push_back(make_check("holder/" + nf.label + "," + sn + ",lambda=" + fmt_num(l), "holder",
                                                 cite::kHolder, subject_of(nf, s, n), rel, a.value, rhs,
                                                 a.error_estimate + rerr, rel == Relation::Equal ? eq : 0.0));
                    }
                }
            });

            if (n == 1) {
                add("asa_duality", sn, [=](std::vector<CheckResult>& out) {
                    for (const auto& nf : fns) {
                        if (nf.label.find("affine") != std::string::npos) continue;
                        const DualFunction d = legendre_s_dual(nf.f, mspec);
                        const SConcaveFunction fd = d.as_function();
                        for (double l : {0.25, 0.5}) {
                            const IntegralResult a = asa(nf.f, l, spec), b = asa(fd, 1.0 - l, spec);
                            CheckResult c = make_check(
                                "asa_duality/" + nf.label + "," + sn + ",lambda=" + fmt_num(l), "asa_duality",
                                cite::kAsaDuality, subject_of(nf, s, n), Relation::Equal, a.value, b.value,
                                a.error_estimate + b.error_estimate, d.closed_form() ? 0.01 : 0.05);
                            c.note = d.closed_form() ? "closed-form dual" : "numerical dual";
                            out.push_back(c);
                        }
                    }
                });
            }

            add("form_equivalence", sn, [=](std::vector<CheckResult>& out) {
                for (const auto& nf : fns) {
                    for (double l : {0.25, 0.75}) {
                        const IntegralResult a = asa_f_form(nf.f, AsaQuery{l, AsaForm::F, spec});
                        const IntegralResult b = asa_psi_form(nf.f, AsaQuery{l, AsaForm::Psi, spec});
                        out.push_back(make_check("form_equivalence/" + nf.label + "," + sn + ",lambda=" + fmt_num(l),
                                                 "form_equivalence", cite::kPsiForm, subject_of(nf, s, n),
                                                 Relation::Equal, a.value, b.value,
                                                 a.error_estimate + b.error_estimate, 1e-5));
                    }
                }
            });

            if (n == 1) {
                add("monotone_lambda", sn, [=](std::vector<CheckResult>& out) {
                    for (const auto& nf : fns) {
                        if (nf.ball) continue;
                        const IntegralResult a0 = asa(nf.f, 0.0, spec);
                        auto q = [&](double l, double& err) {
                            const IntegralResult a = asa(nf.f, l, spec);
                            const double v = std::pow(a.value / a0.value, 1.0 / l);
                            err = v / std::abs(l) * (a.error_estimate / a.value + a0.error_estimate / a0.value);
                            return v;
                        };
                        const std::vector<double> pos{0.1, 0.2, 0.3, 0.4, 0.5};
                        const std::vector<double> neg{-0.5, -0.4, -0.3, -0.2, -0.1};
                        // The Hoelder argument gives an increasing quantity on both
                        // sides of 0.
                        for (const auto* grid : {&pos, &neg}) {
                            const bool up = true;
                            for (std::size_t i = 0; i + 1 < grid->size(); ++i) {
                                double e1, e2;
                                const double v1 = q((*grid)[i], e1), v2 = q((*grid)[i + 1], e2);
                                CheckResult c = make_check(
                                    "monotone_lambda/" + nf.label + "," + sn + ",lambda=" + fmt_num((*grid)[i]) +
                                        ".." + fmt_num((*grid)[i + 1]),
                                    "monotone_lambda", cite::kMonotoneLambda, subject_of(nf, s, n),
                                    up ? Relation::GreaterEq : Relation::LessEq, v2, v1, e1 + e2, 1e-6);
                                c.note = "strictness is not numerically decidable; checked non-strict with floor 1e-6";
                                out.push_back(c);
                            }
                        }
                    }
                });
            }

            add("endpoints", sn, [=](std::vector<CheckResult>& out) {
                for (const auto& nf : fns) {
                    const std::string sub = subject_of(nf, s, n);
                    const std::string base = nf.label + "," + sn;
                    for (ExtremalKind k : {ExtremalKind::IS, ExtremalKind::OS}) {
                        const ExtremalEstimate e = endpoint_value(nf.f, k, 0.5, spec, mspec);
                        out.push_back(make_check("endpoints/" + std::string(kind_name(k)) + "_1/2/" + base, "endpoints",
                                                 cite::kEndpoints, sub, Relation::Equal, e.value,
                                                 closed_form_ball_asa(s, n, 1.0, 0.5), e.error, eq));
                    }
                    const IntegralResult a0 = asa(nf.f, 0.0, spec);
                    for (ExtremalKind k : {ExtremalKind::IS, ExtremalKind::os}) {
                        const ExtremalEstimate e = endpoint_value(nf.f, k, 0.0, spec, mspec);
                        out.push_back(make_check("endpoints/" + std::string(kind_name(k)) + "_0/" + base, "endpoints",
                                                 cite::kEndpoints, sub, Relation::Equal, e.value, a0.value,
                                                 e.error + a0.error_estimate, eq));
                    }
                    // int f^o again with an independent scheme: midpoint grid for
                    // n = 1, stratified Monte Carlo otherwise.
                    QuadratureSpec other = spec;
                    if (n == 1) {
                        other.scheme = Scheme::TensorGrid;
                        other.tol = std::max(spec.tol, 1e-6);
                    } else {
                        other.scheme = Scheme::MonteCarlo;
                        other.tol = 1e-2;
                        other.max_evals = 100000;
                        other.seed = cfg.seed;
                    }
                    const IntegralResult d = integral_of(legendre_s_dual(nf.f, mspec).as_function(), other);
                    for (ExtremalKind k : {ExtremalKind::OS, ExtremalKind::is}) {
                        const ExtremalEstimate e = endpoint_value(nf.f, k, 1.0, spec, mspec);
                        out.push_back(make_check("endpoints/" + std::string(kind_name(k)) + "_1/" + base, "endpoints",
                                                 cite::kEndpoints, sub, Relation::Equal, e.value, d.value,
                                                 e.error + d.error_estimate / (n == 1 ? 1.0 : 3.0), eq));
                    }
                }
            });

            if (n == 1 && s == cfg.s_values.front()) {
                add("range_validity", "", [=](std::vector<CheckResult>& out) {
                    const double inf = std::numeric_limits<double>::infinity();
                    struct Row { ExtremalKind k; double l; double v; };
                    const Row rows[] = {{ExtremalKind::IS, 0.7, inf},  {ExtremalKind::IS, -0.2, inf},
                                        {ExtremalKind::OS, 0.3, inf},  {ExtremalKind::OS, 1.2, inf},
                                        {ExtremalKind::os, 0.3, 0.0},  {ExtremalKind::is, 0.7, 0.0},
                                        {ExtremalKind::is, -1.0, 0.0}};
                    for (const Row& r : rows) {
                        const RangeVerdict v = range_check(r.k, r.l);
                        CheckResult c = make_check(
                            "range_validity/" + std::string(kind_name(r.k)) + ",lambda=" + fmt_num(r.l),
                            "range_validity", cite::kEndpoints, "any f", Relation::Equal,
                            v.valid ? std::numeric_limits<double>::quiet_NaN() : v.degenerate_value, r.v, 0.0, 0.0);
                        c.note = v.message;
                        out.push_back(c);
                    }
                });
            }

            if (n == 1) {
                add("santalo", sn, [=](std::vector<CheckResult>& out) {
                    for (const auto& nf : fns) {
                        CheckResult c = santalo_check(nf.f, spec, mspec);
                        c.name = "santalo/" + nf.label + "," + sn;
                        c.family = "santalo";
                        c.subject = subject_of(nf, s, n);
                        if (nf.ball) {
                            c.relation = Relation::Equal;
                            c.tolerance = 0.01;
                            c.verdict = decide(c.relation, c.lhs, c.rhs, c.error, c.tolerance);
                            c.note = "equality case";
                        } else {
                            c.note = "margin " + fmt_num(c.rhs - c.lhs);
                        }
                        out.push_back(c);
                    }
                });
            } else if (n == 2) {
                add("santalo", sn, [=](std::vector<CheckResult>& out) {
                    for (const auto& nf : fns) {
                        if (!nf.ball && nf.label != "cap_quadratic") continue;
                        CheckResult c = santalo_check(nf.f, spec, mspec);
                        c.name = "santalo/" + nf.label + "," + sn;
                        c.family = "santalo";
                        c.subject = subject_of(nf, s, n);
                        if (nf.ball) {
                            c.relation = Relation::Equal;
                            c.tolerance = 0.01;
                            c.verdict = decide(c.relation, c.lhs, c.rhs, c.error, c.tolerance);
                        }
                        out.push_back(c);
                    }
                });
            }

            const int k_inv = inverse_s_integer(s);
            if (k_inv >= 1 && n + k_inv <= 4) {
                add("lifted_volume", sn, [=](std::vector<CheckResult>& out) {
                    for (const auto& nf : fns) {
                        if (nf.ball && nf.r != 1.0) continue;
                        const LiftedBody K = lifted_body(nf.f);
                        const Moments m = mc_moments(K.region(), 0, mc);
                        const IntegralResult F = integral_of(nf.f, spec);
                        const double rhs = std::pow(s, 0.5 * n) * unit_ball_volume(k_inv) * F.value;
                        out.push_back(make_check("lifted_volume/" + nf.label + "," + sn, "lifted_volume",
                                                 cite::kLiftedVolume, subject_of(nf, s, n), Relation::Equal,
                                                 m.volume, rhs, m.volume_error / 3.0 + F.error_estimate, 1e-4));
                    }
                });
                add("lifted_isotropic", sn, [=](std::vector<CheckResult>& out) {
                    for (const auto& nf : fns) {
                        if (nf.ball && nf.r != 1.0) continue;
                        if (nf.label.find("affine") != std::string::npos && n > 1) continue;
                        const double formula = lifted_isotropic_formula(nf.f, spec);
                        const BodyIsotropy b = isotropic_constant_body(lifted_body(nf.f).region(), mc);
                        out.push_back(make_check("lifted_isotropic/" + nf.label + "," + sn, "lifted_isotropic",
                                                 cite::kLiftedIsotropic, subject_of(nf, s, n), Relation::Equal,
                                                 b.L_K, formula, b.error / 3.0, 0.02));
                    }
                });
            }

            if (n + 1 <= 4 && s == 1.0) {
                add("graph_volume", sn, [=](std::vector<CheckResult>& out) {
                    for (const auto& nf : fns) {
                        if (nf.ball && nf.r != 1.0) continue;
                        const GraphBody G = graph_body(nf.f);
                        const Moments m = mc_moments(G.region(), 0, mc);
                        out.push_back(make_check("graph_volume/" + nf.label + "," + sn, "graph_volume",
                                                 cite::kGraphVolume, subject_of(nf, s, n), Relation::Equal,
                                                 m.volume, G.volume(spec), m.volume_error / 3.0, 1e-4));
                    }
                });
            }

            if (s == 1.0 && n <= 2) {
                add("involution", sn, [=](std::vector<CheckResult>& out) {
                    const SConcaveFunction f = make_cap_quadratic(1, 1, s, n);
                    const SConcaveFunction fd = legendre_s_dual(f, mspec).as_function();
                    const DualFunction dd = legendre_s_dual(fd, mspec);
                    for (int k = 0; k < 4; ++k) {
                        Vec x = (0.2 * k) * halton_direction(static_cast<std::uint64_t>(k), n);
                        const double v = dd.f(x), w = f.f(x);
                        out.push_back(make_check("involution/cap_quadratic," + sn + ",probe#" + std::to_string(k),
                                                 "involution", cite::kLegendre, "cap_quadratic " + sn,
                                                 Relation::Equal, v, w, 0.0, 1e-6));
                    }
                });
                add("order_reversal", sn, [=](std::vector<CheckResult>& out) {
                    // h = 0.9 g_{e,1/2} lies below the cap b = R = 1.
                    const SConcaveFunction f = make_cap_quadratic(1, 1, s, n);
                    const SConcaveFunction h = scale(make_generalized_ball(s, n, 0.5), 0.9);
                    const DualFunction fd = legendre_s_dual(f, mspec), hd = legendre_s_dual(h, mspec);
                    const bool below = contains(h, f, Direction::Inner);
                    for (int k = 0; k < 4; ++k) {
                        Vec y = (0.3 * k) * halton_direction(static_cast<std::uint64_t>(k + 3), n);
                        CheckResult c = make_check(
                            "order_reversal/cap_quadratic," + sn + ",probe#" + std::to_string(k), "order_reversal",
                            cite::kLegendre, "h = 0.9 ball(r=0.5) <= cap_quadratic " + sn, Relation::LessEq,
                            fd.f(y), hd.f(y), 0.0, 1e-9);
                        if (!below) {
                            c.verdict = Verdict::Inconclusive;
                            c.note = "h <= f not confirmed on samples";
                        }
                        out.push_back(c);
                    }
                });
            }
        }
    }

    // Search-based families.
    if (cfg.extremal) {
        for (double s : cfg.s_values) {
            for (int n : cfg.extremal_dims) {
                if (!has_dim(n)) continue;
                const std::string sn = "s=" + fmt_num(s) + ",n=" + std::to_string(n);
                const std::vector<NamedFunction> fns = builtin_functions(s, n, cfg);
                const double B = ball_integral(s, n);

                add("ball_extremal", sn, [=](std::vector<CheckResult>& out) {
                    for (double r : cfg.radii) {
                        if (r == 1.0) continue;
                        const SConcaveFunction g = make_generalized_ball(s, n, r);
                        struct KL { ExtremalKind k; double l; };
                        for (const KL& kl : {KL{ExtremalKind::IS, 0.25}, KL{ExtremalKind::OS, 0.75},
                                             KL{ExtremalKind::os, -1.0}, KL{ExtremalKind::is, 2.0}}) {
                            const ExtremalEstimate e = extremal_estimate(g, query(kl.k, kl.l));
                            const double target = std::pow(r, (n + 1.0 / s) * (1.0 - 2.0 * kl.l)) * B;
                            out.push_back(make_check("ball_extremal/" + std::string(kind_name(kl.k)) + ",r=" +
                                                         fmt_num(r) + "," + sn + ",lambda=" + fmt_num(kl.l),
                                                     "ball_extremal", cite::kBallExtremal,
                                                     "ball(r=" + fmt_num(r) + ") " + sn, Relation::Equal, e.value,
                                                     target, e.error, stol));
                        }
                    }
                });

                // One job per builtin: the estimates feed the isoperimetric,
                // sandwich and monotonicity families.
                for (const auto& nf : fns) {
                    const std::string sub = subject_of(nf, s, n);
                    const std::string base = nf.label + "," + sn;
                    const bool want_iso = wanted("isoperimetric");
                    const bool want_sand = wanted("sandwich") && inverse_s_integer(s) >= 1;
                    const bool want_mono = wanted("monotone_lambda_extremal") && !nf.ball &&
                                           nf.label.find("affine") == std::string::npos;
                    if (!want_iso && !want_sand && !want_mono) continue;
                    jobs.push_back(Job{"isoperimetric", base, [=](std::vector<CheckResult>& out) {
                        const IntegralResult Fi = integral_of(nf.f, spec);
                        const double F = Fi.value;
                        std::map<std::pair<int, double>, ExtremalEstimate> cache;
                        auto est = [&](ExtremalKind k, double l) -> const ExtremalEstimate& {
                            const auto key = std::make_pair(static_cast<int>(k), l);
                            auto it = cache.find(key);
                            if (it == cache.end()) it = cache.emplace(key, extremal_estimate(nf.f, query(k, l))).first;
                            return it->second;
                        };
                        struct KL { ExtremalKind k; double l; };
                        const std::vector<KL> iso_rows{{ExtremalKind::IS, 0.0},  {ExtremalKind::IS, 0.25},
                                                       {ExtremalKind::IS, 0.5},  {ExtremalKind::OS, 0.5},
                                                       {ExtremalKind::OS, 0.75}, {ExtremalKind::OS, 1.0},
                                                       {ExtremalKind::os, -1.0}, {ExtremalKind::os, 0.0},
                                                       {ExtremalKind::is, 1.0},  {ExtremalKind::is, 2.0}};
                        if (want_iso) {
                            for (const KL& kl : iso_rows) {
                                const ExtremalEstimate& e = est(kl.k, kl.l);
                                const double rhs = std::pow(F, 1.0 - 2.0 * kl.l) * std::pow(B, 2.0 * kl.l);
                                const bool equality = nf.ball || (kl.k == ExtremalKind::IS && (kl.l == 0.0 || kl.l == 0.5)) ||
                                                      (kl.k == ExtremalKind::OS && kl.l == 0.5) ||
                                                      (kl.k == ExtremalKind::os && kl.l == 0.0);
                                const Relation rel = equality ? Relation::Equal
                                                     : is_sup(kl.k) ? Relation::LessEq
                                                                    : Relation::GreaterEq;
                                const double err = e.error + rhs * std::abs(1.0 - 2.0 * kl.l) * Fi.error_estimate / F;
                                const double tol = equality ? (e.bound_sense == BoundSense::ExactEndpoint ? eq : stol) : 0.0;
                                CheckResult c = make_check("isoperimetric/" + std::string(kind_name(kl.k)) + "/" + base +
                                                               ",lambda=" + fmt_num(kl.l),
                                                           "isoperimetric", cite::kIsoperimetric, sub, rel, e.value, rhs,
                                                           err, tol);
                                c.note = bound_sense_name(e.bound_sense);
                                out.push_back(c);
                            }
                        }
                        if (want_sand) {
                            for (const KL& kl : {KL{ExtremalKind::IS, 0.25}, KL{ExtremalKind::OS, 0.75},
                                                 KL{ExtremalKind::os, -1.0}, KL{ExtremalKind::is, 2.0}}) {
                                const ExtremalEstimate& e = est(kl.k, kl.l);
                                BoundConstants bc;
                                bc.isotropic_terms = false;
                                const TheoremBounds tb = theorem_bounds(nf.f, kl.k, kl.l, spec, bc,
                                                                        BoundRoute::IntegerInverse, mspec);
                                const std::string nm = "sandwich/" + std::string(kind_name(kl.k)) + "/" + base +
                                                       ",lambda=" + fmt_num(kl.l);
                                const double tol_lo = nf.ball ? stol : 0.0;
                                CheckResult lo = make_check(nm + "/lower", "sandwich", tb.lower_citation, sub,
                                                            Relation::GreaterEq, e.value, tb.lower, e.error, tol_lo);
                                CheckResult hi = make_check(nm + "/upper", "sandwich", tb.upper_citation, sub,
                                                            Relation::LessEq, e.value, tb.upper, e.error,
                                                            nf.ball ? stol : 0.0);
                                lo.note = hi.note = tb.route + "; explicit constant-free terms only";
                                out.push_back(lo);
                                out.push_back(hi);
                            }
                        }
                        if (want_mono) {
                            const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5};
                            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                                const double v1 = std::pow(est(ExtremalKind::IS, grid[i]).value / F, 1.0 / grid[i]);
                                const double v2 = std::pow(est(ExtremalKind::IS, grid[i + 1]).value / F, 1.0 / grid[i + 1]);
                                CheckResult c = make_check("monotone_lambda_extremal/IS/" + base + ",lambda=" +
                                                               fmt_num(grid[i]) + ".." + fmt_num(grid[i + 1]),
                                                           "monotone_lambda_extremal", cite::kMonotoneLambdaExtremal,
                                                           sub, Relation::GreaterEq, v2, v1, 0.0, stol);
                                c.note = "estimate level; slack = search tolerance";
                                if (c.verdict == Verdict::Fail) {
                                    c.verdict = Verdict::Inconclusive;
                                    c.note += "; one-sided estimates cannot refute the ordering";
                                }
                                out.push_back(c);
                            }
                        }
                    }});
                }

                if (n == 1 && s == 1.0) {
                    add("extremal_duality", sn, [=](std::vector<CheckResult>& out) {
                        struct Row { std::string label; SConcaveFunction f; ExtremalKind k; double l; };
                        const std::vector<Row> rows{
                            {"ball(r=1)", make_generalized_ball(s, n), ExtremalKind::IS, 0.3},
                            {"ball(r=2)", make_generalized_ball(s, n, 2.0), ExtremalKind::IS, 0.25},
                            {"cap_quadratic", make_cap_quadratic(1, 1, s, n), ExtremalKind::IS, 0.25},
                            {"cap_quadratic", make_cap_quadratic(1, 1, s, n), ExtremalKind::os, -1.0}};
                        for (const Row& r : rows) {
                            const DualityPair p = duality_pair(r.f, r.k, r.l, query(r.k, r.l));
                            CheckResult c = make_check("extremal_duality/" + std::string(kind_name(r.k)) + "/" + r.label +
                                                           "," + sn + ",lambda=" + fmt_num(r.l),
                                                       "extremal_duality", cite::kExtremalDuality,
                                                       r.label + " " + sn, Relation::Equal, p.primal.value,
                                                       p.dual.value, p.primal.error + p.dual.error, stol);
                            c.note = "gap " + fmt_num(p.gap) + " (both sides are same-sense search bounds)";
                            out.push_back(c);
                        }
                    });
                }
            }
        }

        if (has_dim(2) && has_s(1.0)) {
            add("invariance", "s=1,n=2", [=](std::vector<CheckResult>& out) {
                const int n = 2;
                const SConcaveFunction f = make_cap_quadratic(1, 1, 1.0, n);
                Mat T(2, 2);
                T << 1.3, 0.4, -0.2, 0.8;
                const SConcaveFunction fT = apply_affine(f, T, 1.0);
                for (ExtremalKind k : {ExtremalKind::IS, ExtremalKind::os}) {
                    const double l = k == ExtremalKind::IS ? 0.25 : -1.0;
                    const ExtremalEstimate a = extremal_estimate(fT, query(k, l));
                    const ExtremalEstimate b = extremal_estimate(f, query(k, l));
                    const double m = std::pow(std::abs(T.determinant()), 2.0 * l - 1.0);
                    out.push_back(make_check("invariance/" + std::string(kind_name(k)) + "/cap_quadratic,s=1,n=2,lambda=" +
                                                 fmt_num(l),
                                             "invariance", cite::kInvariance, "cap_quadratic s=1 n=2", Relation::Equal,
                                             a.value, m * b.value, a.error + m * b.error, stol));
                }
            });
        }
        if (has_dim(1)) {
            add("invariance", "alpha", [=](std::vector<CheckResult>& out) {
                const SConcaveFunction f = make_cap_sqrt(1, 0.25, 1.0, 1);
                for (ExtremalKind k : {ExtremalKind::OS, ExtremalKind::is}) {
                    const double l = k == ExtremalKind::OS ? 0.75 : 2.0;
                    const ExtremalEstimate a = extremal_estimate(scale(f, 3.0), query(k, l));
                    const ExtremalEstimate b = extremal_estimate(f, query(k, l));
                    const double m = std::pow(3.0, 1.0 - 2.0 * l);
                    out.push_back(make_check("invariance/" + std::string(kind_name(k)) + "/cap_sqrt,alpha=3,s=1,n=1,lambda=" +
                                                 fmt_num(l),
                                             "invariance", cite::kInvariance, "cap_sqrt s=1 n=1", Relation::Equal,
                                             a.value, m * b.value, a.error + m * b.error, stol));
                }
            });
            add("monotone_s", "n=1", [=](std::vector<CheckResult>& out) {
                // f = cap with native s = 2, viewed as s1-concave for s1 <= 2.
                const SConcaveFunction f2 = make_cap_quadratic(1, 1, 2.0, 1);
                struct KL { ExtremalKind k; double l; Relation rel; };
                for (const KL& kl : {KL{ExtremalKind::IS, 0.25, Relation::GreaterEq},
                                     KL{ExtremalKind::OS, 0.75, Relation::GreaterEq},
                                     KL{ExtremalKind::os, -1.0, Relation::LessEq},
                                     KL{ExtremalKind::is, 2.0, Relation::LessEq}}) {
                    const ExtremalEstimate e2 = extremal_estimate(f2, query(kl.k, kl.l));
                    for (double s1 : {0.5, 1.0}) {
                        const ExtremalEstimate e1 = extremal_estimate(with_concavity(f2, s1), query(kl.k, kl.l));
                        CheckResult c = make_check("monotone_s/" + std::string(kind_name(kl.k)) + "/cap_quadratic(s=2),s1=" +
                                                       fmt_num(s1) + ",lambda=" + fmt_num(kl.l),
                                                   "monotone_s", cite::kMonotoneS, "cap_quadratic native s=2 n=1",
                                                   kl.rel, e1.value, e2.value, e1.error + e2.error, stol);
                        c.note = "estimate level; slack = search tolerance";
                        if (c.verdict == Verdict::Fail) {
                            // Both sides are same-sense search bounds; a reversed order
                            // can come from the search gap alone.
                            c.verdict = Verdict::Inconclusive;
                            c.note += "; one-sided estimates cannot refute the ordering";
                        }
                        out.push_back(c);
                    }
                }
            });
        }
    }

    // Run the independent jobs; a failing job becomes an inconclusive row.
    std::vector<std::vector<CheckResult>> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<CheckResult>& out = results[i];
        try {
            jobs[i].run(out);
        } catch (const std::exception& e) {
            CheckResult c;
            c.name = jobs[i].family + "/" + jobs[i].label + "/error";
            c.family = jobs[i].family;
            c.subject = jobs[i].label;
            c.lhs = c.rhs = std::numeric_limits<double>::quiet_NaN();
            c.verdict = Verdict::Inconclusive;
            c.note = std::string("error: ") + e.what();
            out.push_back(c);
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto& c : out) c.runtime = dt / static_cast<double>(out.size());
    });
    std::vector<CheckResult> all;
    for (auto& r : results) all.insert(all.end(), r.begin(), r.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return all;
}

struct SuiteSummary {
    int pass = 0;
    int fail = 0;
    int inconclusive = 0;
    std::set<std::string> families;
    bool ok() const { return fail == 0; }
};

inline SuiteSummary summarize(const std::vector<CheckResult>& checks) {
    SuiteSummary s;
    for (const auto& c : checks) {
        s.families.insert(c.family);
        if (c.verdict == Verdict::Pass) ++s.pass;
        else if (c.verdict == Verdict::Fail) ++s.fail;
        else ++s.inconclusive;
    }
    return s;
}

inline json number_or_string(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline json check_to_json(const CheckResult& c, bool timing) {
    json j;
    j["name"] = c.name;
    j["family"] = c.family;
    j["citation"] = c.citation;
    j["subject"] = c.subject;
    j["relation"] = relation_symbol(c.relation);
    j["lhs"] = number_or_string(c.lhs);
    j["rhs"] = number_or_string(c.rhs);
    j["error"] = number_or_string(c.error);
    j["tolerance"] = c.tolerance;
    j["verdict"] = verdict_name(c.verdict);
    if (!c.note.empty()) j["note"] = c.note;
    if (timing) j["runtime"] = c.runtime;
    return j;
}

inline json suite_config_json(const SuiteConfig& cfg) {
    return {{"s_values", cfg.s_values},
            {"dims", cfg.dims},
            {"radii", cfg.radii},
            {"random_images", cfg.random_images},
            {"seed", cfg.seed},
            {"tol", cfg.spec.tol},
            {"scheme", scheme_name(cfg.spec.scheme)},
            {"max_evals", cfg.spec.max_evals},
            {"mc_samples", cfg.mc_samples},
            {"extremal_budget", cfg.extremal_budget},
            {"extremal_dims", cfg.extremal_dims},
            {"equality_tol", cfg.equality_tol},
            {"search_tol", cfg.search_tol},
            {"extremal", cfg.extremal},
            {"negative_control", cfg.negative_control},
            {"only", cfg.only}};
}

/// Report body; identical config and seed give an identical document
/// unless `timing` adds per-check runtimes.
inline json suite_report_json(const SuiteConfig& cfg, const std::vector<CheckResult>& checks, bool timing) {
    const SuiteSummary s = summarize(checks);
    json j;
    j["schema"] = kSchemaVersion;
    j["config"] = suite_config_json(cfg);
    j["summary"] = {{"pass", s.pass},
                    {"fail", s.fail},
                    {"inconclusive", s.inconclusive},
                    {"families", s.families.size()},
                    {"status", s.ok() ? "pass" : "fail"}};
    j["checks"] = json::array();
    for (const auto& c : checks) j["checks"].push_back(check_to_json(c, timing));
    return j;
}

inline std::string suite_report_text(const std::vector<CheckResult>& checks, bool timing) {
    std::size_t w = 4;
    for (const auto& c : checks) w = std::max(w, c.name.size());
    std::string out;
    char line[1024];
    std::snprintf(line, sizeof line, "%-*s  %-12s  %-2s  %16s  %16s  %10s  %s\n", static_cast<int>(w), "name",
                  "verdict", "", "lhs", "rhs", "error", "citation");
    out += line;
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-*s  %-12s  %-2s  %16.9g  %16.9g  %10.3g  %s", static_cast<int>(w),
                      c.name.c_str(), verdict_name(c.verdict), relation_symbol(c.relation), c.lhs, c.rhs, c.error,
                      c.citation.c_str());
        out += line;
        if (timing) {
            std::snprintf(line, sizeof line, "  %.3fs", c.runtime);
            out += line;
        }
        if (!c.note.empty()) out += "  # " + c.note;
        out += "\n";
    }
    const SuiteSummary s = summarize(checks);
    std::snprintf(line, sizeof line, "pass %d  fail %d  inconclusive %d  families %zu\n", s.pass, s.fail,
                  s.inconclusive, s.families.size());
    out += line;
    return out;
}

}  // namespace funcasa
