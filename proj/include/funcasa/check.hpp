#pragma once

#include <cmath>
#include <string>

namespace funcasa {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

enum class Relation { LessEq, GreaterEq, Equal };

inline const char* relation_symbol(Relation r) {
    switch (r) {
        case Relation::LessEq: return "<=";
        case Relation::GreaterEq: return ">=";
        default: return "==";
    }
}

/// One theorem check: lhs (relation) rhs, with a combined error bar and a
/// relative tolerance for equalities.
struct CheckResult {
    std::string name;
    std::string family;    ///< check family (for grouping)
    std::string citation;
    std::string subject;   ///< function and parameters the check ran on
    Relation relation = Relation::LessEq;
    double lhs = 0.0;
    double rhs = 0.0;
    double error = 0.0;      ///< combined numerical error of lhs - rhs
    double tolerance = 0.0;  ///< relative tolerance for equalities
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
    double runtime = 0.0;
};

/// Three-valued decision. Inequalities pass with a margin of at least
/// 3x the combined error and fail when violated by more than that.
/// Equalities pass when |lhs - rhs| <= 3 err + tol |rhs|.
inline Verdict decide(Relation rel, double lhs, double rhs, double error, double tol) {
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
        if (rel == Relation::LessEq && std::isinf(rhs) && rhs > 0 && !std::isnan(lhs)) return Verdict::Pass;
        if (rel == Relation::GreaterEq && std::isinf(lhs) && lhs > 0 && !std::isnan(rhs)) return Verdict::Pass;
        if (rel == Relation::Equal && lhs == rhs) return Verdict::Pass;
        return Verdict::Inconclusive;
    }
    const double e = 3.0 * std::abs(error);
    if (rel == Relation::Equal) {
        const double gap = std::abs(lhs - rhs);
        if (gap <= e + tol * std::abs(rhs)) return Verdict::Pass;
        if (gap > e + tol * std::abs(rhs) + e) return Verdict::Fail;
        return Verdict::Inconclusive;
    }
    const double margin = rel == Relation::LessEq ? rhs - lhs : lhs - rhs;
    // A relative slack tol lets equality cases of an inequality pass.
    const double slack = tol * std::abs(rhs);
    if (margin + slack >= e && margin + slack >= 0.0) return Verdict::Pass;
    if (margin + slack < -e) return Verdict::Fail;
    return Verdict::Inconclusive;
}

inline CheckResult make_check(std::string name, std::string family, std::string citation,
                              std::string subject, Relation rel, double lhs, double rhs,
                              double error, double tol) {
    CheckResult c;
    c.name = std::move(name);
    c.family = std::move(family);
    c.citation = std::move(citation);
    c.subject = std::move(subject);
    c.relation = rel;
    c.lhs = lhs;
    c.rhs = rhs;
    c.error = error;
    c.tolerance = tol;
    c.verdict = decide(rel, lhs, rhs, error, tol);
    return c;
}

}  // namespace funcasa
