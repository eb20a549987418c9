// Acceptance run: one line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include "funcasa/funcasa.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace funcasa;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    double limit = 0.0;  ///< runtime limit in seconds, 0 for none
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const std::vector<double> kLambdas{0.0, 0.25, 0.5, 0.75, 1.0};

Outcome ball_normalization() {
    Outcome o;
    o.limit = 10.0;
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0})
        for (int n : {1, 2, 3})
            for (double l : kLambdas) {
                const double v = asa(make_generalized_ball(s, n), l).value;
                worst = std::max(worst, rel(v, closed_form_ball_asa(s, n, 1.0, l)));
            }
    const double a1 = asa(make_generalized_ball(1.0, 1), 0.25).value;
    const double a2 = asa(make_generalized_ball(0.5, 1), 0.25).value;
    const double anchor = std::max(rel(a1, M_PI / 2), rel(a2, 4 * std::sqrt(2.0) / 3));
    o.pass = worst <= 1e-3 && anchor <= 1e-3;
    o.detail = fmt("max rel err %.2e over 45 cases, anchors %.2e (tol 1e-3)", worst, anchor);
    return o;
}

Outcome scaling_law() {
    Outcome o;
    double worst = 0.0, half = 0.0;
    for (double s : {0.5, 1.0, 2.0})
        for (int n : {1, 2})
            for (double l : kLambdas) {
                const double base = asa(make_generalized_ball(s, n), l).value;
                for (double r : {0.5, 2.0}) {
                    const double v = asa(make_generalized_ball(s, n, r), l).value;
                    const double want = std::pow(r, (n + 1.0 / s) * (1.0 - 2.0 * l));
                    worst = std::max(worst, rel(v / base, want));
                    if (l == 0.5) half = std::max(half, rel(v, base));
                }
            }
    o.pass = worst <= 1e-3 && half <= 1e-3;
    o.detail = fmt("max rel err of ratio %.2e, r-independence at 1/2 %.2e (tol 1e-3)", worst, half);
    return o;
}

Outcome affine_covariance() {
    Outcome o;
    std::mt19937_64 rng(20240101);
    std::normal_distribution<double> g(0.0, 0.5);
    int bad = 0, total = 0;
    double worst = 0.0;  // |gap| / (3 err)
    const std::vector<SConcaveFunction> fs{make_generalized_ball(1.0, 2), make_cap_quadratic(1.0, 1.0, 1.0, 2)};
    for (int t = 0; t < 20; ++t) {
        Mat T = identity(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) T(i, j) += g(rng);
        if (std::abs(T.determinant()) < 0.2) {
            --t;
            continue;
        }
        const double det = std::abs(T.determinant());
        for (const auto& f : fs)
            for (double l : {0.25, 0.75}) {
                const IntegralResult a = asa(apply_affine(f, T), l);
                const IntegralResult b = asa(f, l);
                const double c = std::pow(det, 2 * l - 1);
                const double err = a.error_estimate + c * b.error_estimate;
                const double gap = std::abs(a.value - c * b.value);
                worst = std::max(worst, gap / (3 * err));
                ++total;
                if (gap > 3 * err) ++bad;
            }
    }
    o.pass = bad == 0;
    o.detail = std::to_string(total - bad) + "/" + std::to_string(total) +
               fmt(" within 3x combined error (max gap/3err = %.3f)", worst);
    return o;
}

Outcome duality() {
    Outcome o;
    double ball_worst = 0.0, cap_worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        const auto f = make_generalized_ball(1.0, 1, r);
        const auto d = legendre_s_dual(f).as_function();
        for (double l : {0.25, 0.5}) ball_worst = std::max(ball_worst, rel(asa(f, l).value, asa(d, 1 - l).value));
    }
    for (const auto& f : {make_cap_quadratic(1.0, 1.0, 1.0, 1), make_cap_sqrt(1.0, 0.25, 1.0, 1)}) {
        const auto d = legendre_s_dual(f).as_function();
        for (double l : {0.25, 0.5}) cap_worst = std::max(cap_worst, rel(asa(f, l).value, asa(d, 1 - l).value));
    }
    o.pass = ball_worst <= 0.01 && cap_worst <= 0.05;
    o.detail = fmt("balls max rel gap %.2e (tol 1%%), caps %.2e (tol 5%%)", ball_worst, cap_worst);
    return o;
}

// Runs a restricted property suite and requires every row to pass.
Outcome suite_rows(const std::vector<std::string>& families, const std::string& what, bool expect_fail = false) {
    SuiteConfig cfg;
    cfg.only = families;
    cfg.negative_control = expect_fail;
    const std::vector<CheckResult> rows = run_property_suite(cfg);
    int pass = 0, fail = 0, inc = 0;
    std::string first;
    for (const auto& c : rows) {
        if (c.verdict == Verdict::Pass) ++pass;
        else if (c.verdict == Verdict::Fail) ++fail;
        else ++inc;
        if (c.verdict != Verdict::Pass && first.empty()) first = c.name;
    }
    Outcome o;
    if (expect_fail) {
        o.pass = fail > 0 && fail == static_cast<int>(rows.size());
        o.detail = std::to_string(fail) + "/" + std::to_string(rows.size()) + " corrupted-exponent rows fail";
        return o;
    }
    o.pass = fail == 0 && inc == 0 && !rows.empty();
    o.detail = what + ": " + std::to_string(pass) + " pass, " + std::to_string(fail) + " fail, " +
               std::to_string(inc) + " inconclusive";
    if (!first.empty()) o.detail += " (first non-pass: " + first + ")";
    return o;
}

Outcome endpoints() { return suite_rows({"endpoints"}, "endpoint rows"); }

Outcome extremal_self_consistency() {
    Outcome o;
    o.limit = 240.0;
    const auto g = make_generalized_ball(1.0, 1, 2.0);
    const double B = M_PI / 2;
    struct KL { ExtremalKind k; double l; };
    std::ostringstream os;
    double slowest = 0.0;
    for (const KL& kl : {KL{ExtremalKind::IS, 0.25}, KL{ExtremalKind::OS, 0.75}, KL{ExtremalKind::os, -1.0},
                         KL{ExtremalKind::is, 2.0}}) {
        ExtremalQuery q;
        q.kind = kl.k;
        q.lambda = kl.l;
        q.budget = 16000;
        const auto t0 = std::chrono::steady_clock::now();
        const ExtremalEstimate e = extremal_estimate(g, q);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, dt);
        const double target = std::pow(2.0, 2.0 * (1.0 - 2.0 * kl.l)) * B;
        const double gap = rel(e.value, target);
        const bool ok = gap <= 0.02 && e.evaluations <= 16000 && dt < 60.0;
        o.pass = o.pass && ok;
        os << kind_name(kl.k) << "@" << kl.l << ": " << fmt("%.3e rel", gap) << (ok ? "" : " FAIL") << "; ";
    }
    os << fmt("slowest kind %.1fs (limit 60s)", slowest);
    o.detail = os.str();
    return o;
}

Outcome isoperimetric() { return suite_rows({"isoperimetric"}, "isoperimetric rows"); }

Outcome santalo() { return suite_rows({"santalo"}, "santalo rows"); }

Outcome lifted_isotropic() {
    Outcome o;
    o.limit = 120.0;
    QuadratureSpec mc;
    mc.scheme = Scheme::MonteCarlo;
    mc.tol = 1e-9;
    mc.max_evals = 1'000'000;
    double worst = 0.0;
    for (auto [n, k] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
        const double s = 1.0 / k;
        for (const auto& f : {make_generalized_ball(s, n), make_cap_quadratic(1.0, 1.0, s, n),
                              make_cap_sqrt(1.0, 0.25, s, n)}) {
            const double formula = lifted_isotropic_formula(f);
            const BodyIsotropy b = isotropic_constant_body(lifted_body(f).region(), mc);
            worst = std::max(worst, rel(b.L_K, formula));
        }
    }
    const auto g = make_generalized_ball(1.0, 1);
    const double anchor = 0.5 / std::sqrt(M_PI);
    mc.max_evals = 4'000'000;
    const double a = rel(lifted_isotropic_formula(g), anchor);
    const double b = rel(isotropic_constant_body(lifted_body(g).region(), mc).L_K, anchor);
    o.pass = worst <= 0.02 && a <= 1e-3 && b <= 1e-3;
    o.detail = fmt("max formula/MC rel gap %.2e (tol 2%%); anchor formula %.1e, MC %.1e (tol 1e-3)", worst, a, b);
    return o;
}

Outcome sandwich() { return suite_rows({"sandwich"}, "sandwich rows"); }

Outcome negative_control() { return suite_rows({"negative_control"}, "", true); }

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "ball normalization", ball_normalization},
        {2, "scaling law", scaling_law},
        {3, "affine covariance", affine_covariance},
        {4, "asa duality", duality},
        {5, "endpoints", endpoints},
        {6, "extremal self-consistency", extremal_self_consistency},
        {7, "isoperimetric inequalities", isoperimetric},
        {8, "functional Santalo", santalo},
        {9, "lifted-body isotropic constant", lifted_isotropic},
        {10, "sandwich coherence", sandwich},
        {11, "negative control", negative_control},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.limit > 0.0 && dt >= o.limit) {
            o.pass = false;
            o.detail += fmt("; runtime %.1fs over limit %.0fs", dt, o.limit);
        }
        if (!o.pass) ++failed;
        std::printf("[%s] %2d %-32s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
