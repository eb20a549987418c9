#pragma once

#include "funcasa/errors.hpp"
#include "funcasa/moments.hpp"
#include "funcasa/sconcave.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace funcasa {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline json mat_to_json(const Mat& m) {
    json a = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

inline double number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ParameterError(std::string("descriptor field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline Vec vec_from_json(const json& j, int n, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ParameterError(std::string(what) + " must be an array of length " + std::to_string(n));
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_number()) throw ParameterError(std::string(what) + " entries must be numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

inline Mat mat_from_json(const json& j, int n, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ParameterError(std::string(what) + " must be an n x n array");
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.row(i) = vec_from_json(j[i], n, what).transpose();
    return m;
}

}  // namespace detail

/// {"schema":1,"s","n","family":{"kind","params"},"affine":{"alpha","T","shift"}}.
/// A "native_s" field is written when the function is viewed with a smaller s.
inline json to_json(const SConcaveFunction& f) {
    if (f.is_custom())
        throw ParameterError("custom functions (including numerical duals) have no descriptor");
    json j;
    j["schema"] = kSchemaVersion;
    j["s"] = f.s();
    j["n"] = f.n();
    if (f.native_s() != f.s()) j["native_s"] = f.native_s();
    json fam;
    if (const auto* b = std::get_if<family::GeneralizedBall>(&f.family())) {
        fam["kind"] = "generalized_ball";
        fam["params"] = {{"r", b->r}};
    } else if (const auto* c = std::get_if<family::CapSqrt>(&f.family())) {
        fam["kind"] = "cap_sqrt";
        fam["params"] = {{"R", c->R}, {"eps", c->eps}};
    } else {
        const auto& q = std::get<family::CapQuadratic>(f.family());
        fam["kind"] = "cap_quadratic";
        fam["params"] = {{"b", q.b}, {"R", q.R}};
    }
    j["family"] = fam;
    const AffineMap& m = f.affine();
    j["affine"] = {{"alpha", m.alpha}, {"T", detail::mat_to_json(m.T)}, {"shift", detail::vec_to_json(m.shift)}};
    return j;
}

/// Parses a descriptor. `"recenter": true` translates the result so that
/// its barycenter is the origin.
inline SConcaveFunction from_json(const json& j) {
    if (!j.is_object()) throw ParameterError("function descriptor must be a JSON object");
    if (j.contains("schema") && j.at("schema") != kSchemaVersion)
        throw ParameterError("unsupported descriptor schema (expected 1)");
    const double s = detail::number(j, "s");
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw ParameterError("descriptor field 'n' must be an integer");
    const int n = j.at("n").get<int>();
    const double native = j.contains("native_s") ? detail::number(j, "native_s") : s;
    if (!j.contains("family") || !j.at("family").is_object())
        throw ParameterError("descriptor needs a 'family' object");
    const json& fam = j.at("family");
    const std::string kind = fam.value("kind", "");
    const json params = fam.value("params", json::object());
    SConcaveFunction f = [&] {
        if (kind == "generalized_ball")
            return make_generalized_ball(native, n, params.contains("r") ? detail::number(params, "r") : 1.0);
        if (kind == "cap_sqrt")
            return make_cap_sqrt(detail::number(params, "R"), detail::number(params, "eps"), native, n);
        if (kind == "cap_quadratic")
            return make_cap_quadratic(detail::number(params, "b"), detail::number(params, "R"), native, n);
        throw ParameterError("unknown family kind '" + kind +
                             "' (expected generalized_ball, cap_sqrt, cap_quadratic)");
    }();
    if (native != s) f = with_concavity(f, s);
    if (j.contains("affine")) {
        const json& a = j.at("affine");
        const double alpha = a.contains("alpha") ? detail::number(a, "alpha") : 1.0;
        const Mat T = a.contains("T") ? detail::mat_from_json(a.at("T"), n, "affine.T") : identity(n);
        const Vec shift = a.contains("shift") ? detail::vec_from_json(a.at("shift"), n, "affine.shift") : zeros(n);
        f = apply_affine(f, T, alpha, shift);
    }
    if (j.value("recenter", false)) f = recenter(f);
    return f;
}

/// Accepts a path to a JSON file or an inline JSON document.
inline SConcaveFunction load_function(const std::string& source) {
    json j;
    std::string text = source;
    const auto first = source.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || source[first] != '{') {
        std::ifstream in(source);
        if (!in) throw ParameterError("cannot open function descriptor '" + source + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("invalid JSON descriptor: ") + e.what());
    }
    return from_json(j);
}

}  // namespace funcasa
