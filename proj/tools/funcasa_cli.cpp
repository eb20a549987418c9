// funcasa: command-line front end for the affine surface area toolkit.
//
//   funcasa eval      --function F --lambda L [--form f|psi] [--emit-table]
//   funcasa dual      --function F [--at y1,..,yn]...
//   funcasa extremal  --function F --kind IS|OS|is|os --lambda L [--bounds]
//   funcasa isotropy  --function F [--lifted] [--mc-samples N]
//   funcasa verify    [--seed S] [--negative-control] [--only FAMILY]...
//
// Exit status: 0 ok, 1 verify found a failing check, 2 usage, 3 domain,
// 4 numeric failure.

#include "funcasa/funcasa.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace funcasa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumeric = 4;

struct Options {
    std::string function;
    double lambda = 0.0;
    bool lambda_set = false;
    std::string kind = "IS";
    std::string scheme = "radial";
    double tol = 1e-6;
    std::uint64_t seed = 0;
    std::int64_t max_evals = 20'000'000;
    int budget = 16000;
    int restarts = 8;
    std::string format = "json";
    std::string output;
    std::string form = "f";
    bool emit_table = false;
    std::vector<double> table_lambdas;
    bool timing = false;
    bool bounds = false;
    std::vector<std::string> at;
    bool lifted = false;
    std::int64_t mc_samples = 1'000'000;
    bool negative_control = false;
    bool no_extremal = false;
    std::vector<std::string> only;
};

/// One output line: every numeric value travels with its error estimate.
struct Row {
    std::string name;
    double value = 0.0;
    double error = 0.0;
    std::string citation;
    std::string verdict = "n/a";
};

struct Document {
    json body = json::object();
    std::vector<Row> rows;
    std::string text;        ///< preformatted table (verify)
    std::string csv;         ///< preformatted CSV (emit-table)
    int status = kExitOk;
};

Scheme parse_scheme(const std::string& s) {
    if (s == "radial") return Scheme::Radial;
    if (s == "tensor") return Scheme::TensorGrid;
    return Scheme::MonteCarlo;
}

QuadratureSpec quadrature_spec(const Options& o) {
    QuadratureSpec q;
    q.scheme = parse_scheme(o.scheme);
    q.tol = o.tol;
    q.seed = o.seed;
    q.max_evals = o.max_evals;
    q.validate();
    return q;
}

json spec_json(const QuadratureSpec& q) {
    return {{"scheme", scheme_name(q.scheme)}, {"tol", q.tol}, {"max_evals", q.max_evals},
            {"seed", q.seed}, {"boundary_offset", q.boundary_offset}};
}

json row_json(const Row& r) {
    json j{{"name", r.name}, {"value", number_or_string(r.value)}, {"error", number_or_string(r.error)},
           {"citation", r.citation}};
    if (r.verdict != "n/a") j["verdict"] = r.verdict;
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render_csv(const std::vector<Row>& rows) {
    std::string out = "name,value,error,citation,verdict\n";
    for (const auto& r : rows)
        out += csv_field(r.name) + "," + num(r.value) + "," + num(r.error) + "," + csv_field(r.citation) +
               "," + r.verdict + "\n";
    return out;
}

std::string render_table(const std::vector<Row>& rows) {
    std::size_t w = 4, wc = 8;
    for (const auto& r : rows) {
        w = std::max(w, r.name.size());
        wc = std::max(wc, r.citation.size());
    }
    std::string out;
    char line[512];
    std::snprintf(line, sizeof line, "%-*s  %22s  %12s  %-*s  %s\n", static_cast<int>(w), "name", "value", "error",
                  static_cast<int>(wc), "citation", "verdict");
    out += line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-*s  %22.15g  %12.4g  %-*s  %s\n", static_cast<int>(w), r.name.c_str(),
                      r.value, r.error, static_cast<int>(wc), r.citation.c_str(), r.verdict.c_str());
        out += line;
    }
    return out;
}

void write_output(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output);
    if (!out) throw ParameterError("cannot write output file '" + o.output + "'");
    out << text;
}

void emit(const Options& o, const Document& d) {
    if (!d.csv.empty()) return write_output(o, d.csv);
    if (o.format == "csv") return write_output(o, render_csv(d.rows));
    if (o.format == "table") return write_output(o, d.text.empty() ? render_table(d.rows) : d.text);
    json body = d.body;
    if (!body.contains("results")) {
        body["results"] = json::array();
        for (const auto& r : d.rows) body["results"].push_back(row_json(r));
    }
    write_output(o, body.dump(2) + "\n");
}

bool is_plain_ball(const SConcaveFunction& f) {
    if (!std::holds_alternative<family::GeneralizedBall>(f.family())) return false;
    const AffineMap& m = f.affine();
    return m.alpha == 1.0 && m.shift.isZero(0.0) && m.T.isIdentity(0.0) && f.native_s() == f.s();
}

double ball_radius(const SConcaveFunction& f) { return std::get<family::GeneralizedBall>(f.family()).r; }

Vec parse_point(const std::string& text, int n) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParameterError("--at expects comma-separated numbers, got '" + text + "'");
        }
    }
    if (static_cast<int>(vals.size()) != n)
        throw ParameterError("--at point '" + text + "' needs " + std::to_string(n) + " coordinates");
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = vals[static_cast<std::size_t>(i)];
    return v;
}

json base_config(const Options& o, const SConcaveFunction& f, const QuadratureSpec& q) {
    return {{"function", to_json(f)}, {"quadrature", spec_json(q)}, {"format", o.format}};
}

std::vector<double> default_grid(double lo, double hi, int steps) {
    std::vector<double> g;
    for (int i = 0; i <= steps; ++i) g.push_back(lo + (hi - lo) * i / steps);
    return g;
}

std::string sweep_csv(const std::vector<double>& lambdas, const std::vector<IntegralResult>& res) {
    std::string out = "lambda,value,error\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        out += num(lambdas[i]) + "," + num(res[i].value) + "," + num(res[i].error_estimate) + "\n";
    return out;
}

Document cmd_eval(const Options& o) {
    const SConcaveFunction f = load_function(o.function);
    const QuadratureSpec q = quadrature_spec(o);
    const AsaForm form = o.form == "psi" ? AsaForm::Psi : AsaForm::F;
    Document d;
    d.body["schema"] = kSchemaVersion;
    d.body["command"] = "eval";
    json cfg = base_config(o, f, q);
    cfg["form"] = o.form;
    if (o.emit_table) {
        const std::vector<double> grid = o.table_lambdas.empty() ? default_grid(0.0, 1.0, 20) : o.table_lambdas;
        std::vector<IntegralResult> res(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) res[i] = asa(f, AsaQuery{grid[i], form, q});
        d.csv = sweep_csv(grid, res);
        return d;
    }
    if (!o.lambda_set) throw ParameterError("eval needs --lambda (or --emit-table)");
    cfg["lambda"] = o.lambda;
    d.body["config"] = cfg;
    const IntegralResult r = asa(f, AsaQuery{o.lambda, form, q});
    Row row{"asa", r.value, r.error_estimate, form == AsaForm::Psi ? cite::kPsiForm : cite::kDefinition};
    if (is_plain_ball(f)) {
        const double rad = ball_radius(f);
        row.citation = rad == 1.0 ? cite::kBallAsa : cite::kBallScaling;
        d.body["closed_form"] = closed_form_ball_asa(f.s(), f.n(), rad, o.lambda);
    }
    d.body["value"] = number_or_string(r.value);
    d.body["error"] = number_or_string(r.error_estimate);
    d.body["citation"] = row.citation;
    d.body["evaluations"] = r.evals;
    d.rows.push_back(row);
    return d;
}

Document cmd_dual(const Options& o) {
    const SConcaveFunction f = load_function(o.function);
    const QuadratureSpec q = quadrature_spec(o);
    std::vector<Vec> points;
    for (const auto& a : o.at) points.push_back(parse_point(a, f.n()));
    Document d;
    d.body["schema"] = kSchemaVersion;
    d.body["command"] = "dual";
    json cfg = base_config(o, f, q);
    MinimizerSpec ms;
    cfg["minimizer"] = {{"starts", ms.starts}, {"iterations", ms.iterations}, {"step_tol", ms.step_tol},
                        {"floor", ms.floor}};
    d.body["config"] = cfg;
    const DualFunction dual = legendre_s_dual(f, ms);
    d.body["closed_form"] = dual.closed_form();
    // Point values: the spread against a run with 4x the starts is the error.
    MinimizerSpec wide = ms;
    wide.starts *= 4;
    const DualFunction dual_wide = legendre_s_dual(f, wide);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double v = dual.f(points[i]);
        const double err = dual.closed_form() ? 0.0 : std::abs(v - dual_wide.f(points[i]));
        d.rows.push_back({"dual(" + o.at[i] + ")", v, err, cite::kLegendre});
    }
    const IntegralResult a = integral_of(f, q);
    const IntegralResult b = integral_of(dual.as_function(), q);
    const double ge = ball_integral(f.s(), f.n());
    const double prod = a.value * b.value;
    const double perr = a.error_estimate * std::abs(b.value) + b.error_estimate * std::abs(a.value);
    const CheckResult c = make_check("santalo", "santalo", cite::kSantalo, "", Relation::LessEq, prod, ge * ge,
                                     perr, is_plain_ball(f) ? 0.01 : 0.0);
    d.rows.push_back({"integral_f", a.value, a.error_estimate, cite::kDefinition});
    d.rows.push_back({"integral_dual", b.value, b.error_estimate, cite::kLegendre});
    d.rows.push_back({"santalo_product", prod, perr, cite::kSantalo, verdict_name(c.verdict)});
    d.rows.push_back({"santalo_bound", ge * ge, 0.0, cite::kSantalo});
    return d;
}

Document cmd_extremal(const Options& o) {
    const ExtremalKind kind = parse_kind(o.kind);
    const SConcaveFunction f = load_function(o.function);
    const QuadratureSpec q = quadrature_spec(o);
    if (o.budget < 100) throw ParameterError("--budget must be at least 100");
    if (o.restarts < 1) throw ParameterError("--restarts must be at least 1");
    ExtremalQuery eq;
    eq.kind = kind;
    eq.budget = o.budget;
    eq.restarts = o.restarts;
    eq.seed = o.seed;
    eq.spec = q;
    Document d;
    d.body["schema"] = kSchemaVersion;
    d.body["command"] = "extremal";
    json cfg = base_config(o, f, q);
    cfg["kind"] = kind_name(kind);
    cfg["budget"] = eq.budget;
    cfg["restarts"] = eq.restarts;
    if (o.emit_table) {
        std::vector<double> grid = o.table_lambdas;
        if (grid.empty()) {
            switch (kind) {
                case ExtremalKind::IS: grid = default_grid(0.0, 0.5, 10); break;
                case ExtremalKind::OS: grid = default_grid(0.5, 1.0, 10); break;
                case ExtremalKind::os: grid = default_grid(-2.0, 0.0, 10); break;
                default: grid = default_grid(1.0, 3.0, 10); break;
            }
        }
        for (double l : grid) {
            const RangeVerdict rv = range_check(kind, l);
            if (!rv.valid) throw DomainError(rv.message + " (" + rv.citation + ")");
        }
        std::vector<IntegralResult> res(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            eq.lambda = grid[i];
            const ExtremalEstimate e = extremal_estimate(f, eq);
            res[i] = IntegralResult{e.value, e.error, e.evaluations};
        }
        d.csv = sweep_csv(grid, res);
        return d;
    }
    if (!o.lambda_set) throw ParameterError("extremal needs --lambda (or --emit-table)");
    const RangeVerdict rv = range_check(kind, o.lambda);
    if (!rv.valid) throw DomainError(rv.message + " (" + rv.citation + ")");
    eq.lambda = o.lambda;
    cfg["lambda"] = o.lambda;
    d.body["config"] = cfg;
    const ExtremalEstimate e = extremal_estimate(f, eq);
    Row row{std::string(kind_name(kind)) + "_lambda", e.value, e.error, e.citation};
    d.body["value"] = number_or_string(e.value);
    d.body["error"] = number_or_string(e.error);
    d.body["citation"] = e.citation;
    d.body["bound_sense"] = bound_sense_name(e.bound_sense);
    d.body["evaluations"] = e.evaluations;
    if (e.witness) {
        const Witness& w = *e.witness;
        d.body["witness"] = {{"family", search_family_name(w.family)},
                             {"native_s", w.native_s},
                             {"alpha", w.alpha},
                             {"shape", w.shape},
                             {"T", detail::mat_to_json(w.T)},
                             {"shift", detail::vec_to_json(w.shift)}};
    }
    if (o.bounds) {
        const TheoremBounds tb = theorem_bounds(f, kind, o.lambda, q);
        const bool inside = e.value >= tb.lower - 3.0 * e.error && e.value <= tb.upper + 3.0 * e.error;
        row.verdict = inside ? "pass" : "fail";
        d.rows.push_back(row);
        d.rows.push_back({"lower_bound", tb.lower, 0.0, tb.lower_citation});
        d.rows.push_back({"upper_bound", tb.upper, 0.0, tb.upper_citation});
        d.body["bounds"] = {{"route", tb.route},
                            {"lower", number_or_string(tb.lower)},
                            {"upper", number_or_string(tb.upper)},
                            {"lower_parametric", number_or_string(tb.lower_parametric)},
                            {"upper_parametric", number_or_string(tb.upper_parametric)},
                            {"lower_citation", tb.lower_citation},
                            {"upper_citation", tb.upper_citation},
                            {"parametric_note", tb.parametric_note},
                            {"isoperimetric", tb.isoperimetric}};
    } else {
        d.rows.push_back(row);
    }
    return d;
}

Document cmd_isotropy(const Options& o) {
    const SConcaveFunction f = load_function(o.function);
    const QuadratureSpec q = quadrature_spec(o);
    if (o.mc_samples < 100000) throw ParameterError("--mc-samples must be at least 100000");
    const int k = inverse_s_integer(f.s());
    if (o.lifted && k < 1) throw DomainError(std::string(cite::kLiftedHypothesis) + " requires 1/s in N (s = " + num(f.s()) + ")");
    Document d;
    d.body["schema"] = kSchemaVersion;
    d.body["command"] = "isotropy";
    json cfg = base_config(o, f, q);
    cfg["mc_samples"] = o.mc_samples;
    d.body["config"] = cfg;
    const IsotropyReport r = isotropy_report(f, q);
    d.rows.push_back({"integral_f", r.integral, r.error, cite::kDefinition});
    d.rows.push_back({"sup_norm", r.sup_norm, 0.0, cite::kIsotropicF});
    // L_f scales with det(Cov)^{1/(2n)} / int f^{1/n}; first-order error.
    const double rel = r.error / std::max(r.integral, 1e-300);
    d.rows.push_back({"L_f", r.L_f, r.L_f * rel * (1.0 + 1.0 / f.n()), cite::kIsotropicF});
    d.rows.push_back({"barycenter_norm", r.barycenter.norm(), r.error, cite::kIsotropicF});
    d.body["covariance"] = detail::mat_to_json(r.covariance);
    d.body["barycenter"] = detail::vec_to_json(r.barycenter);
    if (k >= 1 && f.n() + k <= 6) {
        QuadratureSpec mc = q;
        mc.scheme = Scheme::MonteCarlo;
        mc.max_evals = o.mc_samples;
        mc.tol = 1e-9;  // run the full sample budget
        const double formula = lifted_isotropic_formula(f, q);
        const BodyIsotropy b = isotropic_constant_body(lifted_body(f).region(), mc);
        const CheckResult c = make_check("lifted", "lifted_isotropic", cite::kLiftedIsotropic, "",
                                         Relation::Equal, b.L_K, formula, b.error / 3.0, 0.02);
        d.rows.push_back({"L_K_formula", formula, 0.0, cite::kLiftedIsotropic});
        d.rows.push_back({"L_K_montecarlo", b.L_K, b.error, cite::kIsotropicBody, verdict_name(c.verdict)});
        d.rows.push_back({"lifted_volume", b.volume, b.error * b.volume / std::max(b.L_K, 1e-300),
                          cite::kLiftedVolume});
    } else if (o.lifted) {
        throw DomainError("Monte Carlo isotropic constants are limited to total dimension <= 6");
    }
    return d;
}

Document cmd_verify(const Options& o) {
    SuiteConfig cfg;
    cfg.seed = o.seed;
    cfg.spec = quadrature_spec(o);
    cfg.extremal_budget = o.budget;
    cfg.mc_samples = o.mc_samples;
    cfg.negative_control = o.negative_control;
    cfg.extremal = !o.no_extremal;
    const std::vector<std::string> known = check_families();
    for (const auto& fam : o.only)
        if (std::find(known.begin(), known.end(), fam) == known.end())
            throw ParameterError("unknown check family '" + fam + "'");
    cfg.only = o.only;
    if (std::find(cfg.only.begin(), cfg.only.end(), "negative_control") != cfg.only.end())
        cfg.negative_control = true;
    const std::vector<CheckResult> checks = run_property_suite(cfg);
    Document d;
    d.body = suite_report_json(cfg, checks, o.timing);
    d.body["command"] = "verify";
    d.text = suite_report_text(checks, o.timing);
    for (const auto& c : checks)
        d.rows.push_back({c.name, c.lhs, c.error, c.citation, verdict_name(c.verdict)});
    d.status = summarize(checks).ok() ? kExitOk : kExitCheckFailed;
    return d;
}

int report_error(const Options& o, const char* type, const std::string& msg, int status,
                 const NumericError* ne = nullptr) {
    if (o.format == "json") {
        json j{{"schema", kSchemaVersion},
               {"error", {{"type", type}, {"message", msg}, {"exit_status", status}}}};
        if (ne) {
            j["error"]["partial_value"] = number_or_string(ne->partial_value());
            j["error"]["partial_error"] = number_or_string(ne->partial_error());
        }
        try {
            write_output(o, j.dump(2) + "\n");
        } catch (const std::exception&) {
            std::cout << j.dump(2) << "\n";
        }
    }
    std::cerr << "funcasa: " << type << " error: " << msg << "\n";
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Functional affine surface areas of s-concave functions"};
    app.require_subcommand(1);
    app.fallthrough();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scheme", o.scheme, "quadrature scheme")
            ->check(CLI::IsMember({"radial", "tensor", "montecarlo"}));
        sub->add_option("--tol", o.tol, "relative tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "random seed (default 0)");
        sub->add_option("--max-evals", o.max_evals, "evaluation budget of the integrator")
            ->check(CLI::Range(std::int64_t{1000}, std::int64_t{4'000'000'000}));
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_option("-o,--output", o.output, "write the document to this path");
        sub->add_flag("--timing", o.timing, "include runtimes (verify)");
    };
    auto add_function = [&](CLI::App* sub) {
        sub->add_option("-f,--function", o.function, "function descriptor: JSON file path or inline JSON")
            ->required();
    };
    auto add_lambda = [&](CLI::App* sub) {
        sub->add_option_function<double>(
            "-l,--lambda",
            [&](const double& v) {
                o.lambda = v;
                o.lambda_set = true;
            },
            "lambda");
        sub->add_flag("--emit-table", o.emit_table, "emit a lambda sweep as CSV (lambda,value,error)");
        sub->add_option("--table-lambdas", o.table_lambdas, "lambda grid for --emit-table")->delimiter(',');
    };

    CLI::App* eval = app.add_subcommand("eval", "lambda-affine surface area");
    add_function(eval);
    add_lambda(eval);
    eval->add_option("--form", o.form, "integrand form")->check(CLI::IsMember({"f", "psi"}));
    add_common(eval);

    CLI::App* dual = app.add_subcommand("dual", "(s)-Legendre dual and the Santalo product");
    add_function(dual);
    dual->add_option("--at", o.at, "evaluate the dual at a point (comma-separated), repeatable");
    add_common(dual);

    CLI::App* extremal = app.add_subcommand("extremal", "extremal affine surface areas");
    add_function(extremal);
    add_lambda(extremal);
    extremal->add_option("--kind", o.kind, "IS, OS, is or os")->check(CLI::IsMember({"IS", "OS", "is", "os"}));
    extremal->add_option("--budget", o.budget, "candidate evaluations over all restarts");
    extremal->add_option("--restarts", o.restarts, "search restarts");
    extremal->add_flag("--bounds", o.bounds, "add the theorem bounds");
    add_common(extremal);

    CLI::App* iso = app.add_subcommand("isotropy", "isotropic constants and the lifted body");
    add_function(iso);
    iso->add_flag("--lifted", o.lifted, "require the lifted-body route");
    iso->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples for the lifted body");
    add_common(iso);

    CLI::App* verify = app.add_subcommand("verify", "property suite");
    verify->add_flag("--negative-control", o.negative_control, "include the corrupted-exponent check");
    verify->add_option("--only", o.only, "restrict to a check family, repeatable");
    verify->add_flag("--no-extremal", o.no_extremal, "skip extremal searches");
    verify->add_option("--budget", o.budget, "extremal budget per search");
    verify->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples");
    add_common(verify);
    o.budget = 16000;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(o, "usage", e.what(), kExitUsage);
    }
    if (verify->parsed() && verify->count("--budget") == 0) o.budget = 4000;

    try {
        Document d;
        if (eval->parsed()) d = cmd_eval(o);
        else if (dual->parsed()) d = cmd_dual(o);
        else if (extremal->parsed()) d = cmd_extremal(o);
        else if (iso->parsed()) d = cmd_isotropy(o);
        else d = cmd_verify(o);
        emit(o, d);
        return d.status;
    } catch (const ParameterError& e) {
        return report_error(o, "usage", e.what(), kExitUsage);
    } catch (const DomainError& e) {
        return report_error(o, "domain", e.what(), kExitDomain);
    } catch (const NumericError& e) {
        return report_error(o, "numeric", e.what(), kExitNumeric, &e);
    } catch (const SearchError& e) {
        return report_error(o, "numeric", e.what(), kExitNumeric);
    } catch (const std::exception& e) {
        return report_error(o, "numeric", e.what(), kExitNumeric);
    }
}
