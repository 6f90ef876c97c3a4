#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "genut/moments.hpp"
#include "genut/propagation.hpp"
#include "genut/report.hpp"
#include "genut/sampling.hpp"
#include "genut/sigma_points.hpp"

namespace genut {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON wire formats.
//
// DistributionSpec:   {"kind": "<name>", <parameters>} with
//   gaussian: mu, sigma2        exponential: lambda       gamma: a, b
//   weibull: a, b               rayleigh: sigma           beta: a, b
//   binomial: n, p              poisson: lambda           geometric: p
//   negative_binomial: r, p
//
// MomentSpec:         {"mean": [...], "covariance": [[row], ...],
//                      "skew_diag": [...], "kurt_diag": [...]}
// SigmaPointSet:      {"points": [chi_0, chi_1, ...], "weights": [...],
//                      "u": [...], "v": [...]} where each chi_i is the i-th
//                      sigma point as a length-n array.
// ---------------------------------------------------------------------------

inline json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Vector vector_from_json(const json& a) {
    if (!a.is_array()) throw Error("json: expected an array");
    Vector v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v[Eigen::Index(i)] = a[i].get<double>();
    return v;
}

inline Matrix matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw Error("json: expected a non-empty 2-d array");
    const Eigen::Index r = Eigen::Index(rows.size());
    const Eigen::Index c = Eigen::Index(rows[0].size());
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (Eigen::Index(rows[size_t(i)].size()) != c) throw Error("json: ragged matrix");
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[size_t(i)][size_t(j)].get<double>();
    }
    return m;
}

inline json to_json(const DistributionSpec& d) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Gaussian>)
                return {{"kind", "gaussian"}, {"mu", v.mu}, {"sigma2", v.sigma2}};
            else if constexpr (std::is_same_v<T, Exponential>)
                return {{"kind", "exponential"}, {"lambda", v.lambda}};
            else if constexpr (std::is_same_v<T, Gamma>)
                return {{"kind", "gamma"}, {"a", v.a}, {"b", v.b}};
            else if constexpr (std::is_same_v<T, Weibull>)
                return {{"kind", "weibull"}, {"a", v.a}, {"b", v.b}};
            else if constexpr (std::is_same_v<T, Rayleigh>)
                return {{"kind", "rayleigh"}, {"sigma", v.sigma}};
            else if constexpr (std::is_same_v<T, Beta>)
                return {{"kind", "beta"}, {"a", v.a}, {"b", v.b}};
            else if constexpr (std::is_same_v<T, Binomial>)
                return {{"kind", "binomial"}, {"n", v.n}, {"p", v.p}};
            else if constexpr (std::is_same_v<T, Poisson>)
                return {{"kind", "poisson"}, {"lambda", v.lambda}};
            else if constexpr (std::is_same_v<T, Geometric>)
                return {{"kind", "geometric"}, {"p", v.p}};
            else
                return {{"kind", "negative_binomial"}, {"r", v.r}, {"p", v.p}};
        },
        d);
}

inline DistributionSpec distribution_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw Error("distribution json: expected an object with a \"kind\" field");
    }
    const std::string kind = j.at("kind").get<std::string>();
    auto get = [&](const char* field) -> double {
        if (!j.contains(field)) {
            throw Error("distribution json: '" + kind + "' requires field \"" + field + "\"");
        }
        return j.at(field).get<double>();
    };
    DistributionSpec d;
    if (kind == "gaussian") d = Gaussian{get("mu"), get("sigma2")};
    else if (kind == "exponential") d = Exponential{get("lambda")};
    else if (kind == "gamma") d = Gamma{get("a"), get("b")};
    else if (kind == "weibull") d = Weibull{get("a"), get("b")};
    else if (kind == "rayleigh") d = Rayleigh{get("sigma")};
    else if (kind == "beta") d = Beta{get("a"), get("b")};
    else if (kind == "binomial") d = Binomial{j.at("n").get<long>(), get("p")};
    else if (kind == "poisson") d = Poisson{get("lambda")};
    else if (kind == "geometric") d = Geometric{get("p")};
    else if (kind == "negative_binomial") d = NegativeBinomial{get("r"), get("p")};
    else throw Error("distribution json: unknown kind '" + kind + "'");
    validate(d);
    return d;
}

/// Accepts a single distribution object or an array of them.
inline std::vector<DistributionSpec> distributions_from_json(const json& j) {
    std::vector<DistributionSpec> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(distribution_from_json(e));
    } else {
        out.push_back(distribution_from_json(j));
    }
    return out;
}

inline json to_json(const MomentSpec& s) {
    return {{"mean", to_json(s.mean)},
            {"covariance", to_json(s.covariance)},
            {"skew_diag", to_json(s.skew_diag)},
            {"kurt_diag", to_json(s.kurt_diag)}};
}

inline MomentSpec moment_spec_from_json(const json& j) {
    MomentSpec s;
    s.mean = vector_from_json(j.at("mean"));
    s.covariance = matrix_from_json(j.at("covariance"));
    s.skew_diag = vector_from_json(j.at("skew_diag"));
    s.kurt_diag = vector_from_json(j.at("kurt_diag"));
    s.validate();
    return s;
}

inline json to_json(const SigmaPointSet& s) {
    json pts = json::array();
    for (Eigen::Index i = 0; i < s.count(); ++i) pts.push_back(to_json(Vector(s.points.col(i))));
    return {{"points", std::move(pts)},
            {"weights", to_json(s.weights)},
            {"u", to_json(s.u)},
            {"v", to_json(s.v)}};
}

inline SigmaPointSet sigma_point_set_from_json(const json& j) {
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) throw Error("sigma point json: bad points field");
    const Eigen::Index count = Eigen::Index(pts.size());
    const Eigen::Index n = Eigen::Index(pts[0].size());
    SigmaPointSet s;
    s.points.resize(n, count);
    for (Eigen::Index i = 0; i < count; ++i) s.points.col(i) = vector_from_json(pts[size_t(i)]);
    s.weights = vector_from_json(j.at("weights"));
    s.u = vector_from_json(j.at("u"));
    s.v = vector_from_json(j.at("v"));
    s.validate();
    return s;
}

inline json to_json(const TransformResult& r) {
    json pts = json::array();
    for (Eigen::Index i = 0; i < r.transformed_points.cols(); ++i) {
        pts.push_back(to_json(Vector(r.transformed_points.col(i))));
    }
    return {{"mean", to_json(r.mean)},
            {"covariance", to_json(r.covariance)},
            {"skew_diag", to_json(r.skew_diag)},
            {"kurt_diag", to_json(r.kurt_diag)},
            {"transformed_points", std::move(pts)},
            {"cov_min_eigenvalue", r.cov_min_eigenvalue}};
}

inline TransformResult transform_result_from_json(const json& j) {
    TransformResult r;
    r.mean = vector_from_json(j.at("mean"));
    r.covariance = matrix_from_json(j.at("covariance"));
    r.skew_diag = vector_from_json(j.at("skew_diag"));
    r.kurt_diag = vector_from_json(j.at("kurt_diag"));
    const json& pts = j.at("transformed_points");
    if (pts.is_array() && !pts.empty()) {
        const Eigen::Index m = Eigen::Index(pts[0].size());
        r.transformed_points.resize(m, Eigen::Index(pts.size()));
        for (size_t i = 0; i < pts.size(); ++i) {
            r.transformed_points.col(Eigen::Index(i)) = vector_from_json(pts[i]);
        }
    }
    r.cov_min_eigenvalue = j.value("cov_min_eigenvalue", 0.0);
    return r;
}

inline json to_json(const McTruthResult& r) {
    json j = to_json(r.result);
    j["mean_se"] = to_json(r.mean_se);
    j["cov_se"] = to_json(r.cov_se);
    j["n_draws"] = r.n_draws;
    j["seed"] = r.seed;
    j["generator_id"] = r.generator_id;
    return j;
}

inline json to_json(const TruthSource& t) {
    if (t.kind == TruthSource::Kind::Analytic) return {{"kind", "analytic"}};
    return {{"kind", "mc"}, {"n", t.n_draws}, {"seed", t.seed}};
}

inline json to_json(const ErrorReport& r) {
    json marker = json::array();
    for (Eigen::Index i = 0; i < r.errors.absolute_marker.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j2 = 0; j2 < r.errors.absolute_marker.cols(); ++j2) {
            row.push_back(bool(r.errors.absolute_marker(i, j2)));
        }
        marker.push_back(std::move(row));
    }
    return {{"quantity", to_string(r.quantity)},
            {"scheme", to_string(r.scheme)},
            {"values", to_json(r.errors.values)},
            {"absolute_marker", std::move(marker)},
            {"truth_source", to_json(r.truth_source)}};
}

}  // namespace genut
