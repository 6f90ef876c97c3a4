#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "genut/errors.hpp"
#include "genut/propagation.hpp"

namespace genut {

/// Discrete-time SIR increment state: current infected/recovered counts plus
/// the rate parameters. The map treats its input as a noisy reading of the
/// (infected, recovered) pair.
struct SIRState {
    double infected = 0.0;
    double recovered = 0.0;
    double beta = 0.0;        ///< infection rate
    double gamma = 0.0;       ///< recovery rate
    double population = 0.0;  ///< total population N

    void validate() const {
        if (!(beta > 0.0)) throw ParameterDomainError("beta", "sir: beta must be positive");
        if (!(gamma > 0.0)) throw ParameterDomainError("gamma", "sir: gamma must be positive");
        if (!(population > 0.0))
            throw ParameterDomainError("N", "sir: population must be positive");
        if (infected < 0.0 || recovered < 0.0)
            throw ParameterDomainError("I/R", "sir: counts must be non-negative");
        if (infected + recovered > population)
            throw ParameterDomainError("I/R", "sir: I + R must not exceed N");
    }
};

/// One SIR step driven by the random reading x = (x1, x2) of (I, R):
///   y1 = I + beta * (N - x1 - x2) * x1 / N
///   y2 = R + gamma * x1
inline Vector sir_map(const Vector& x, const SIRState& st) {
    if (x.size() != 2) throw Error("sir_map: input must have dimension 2");
    Vector y(2);
    y[0] = st.infected + st.beta * (st.population - x[0] - x[1]) * x[0] / st.population;
    y[1] = st.recovered + st.gamma * x[0];
    return y;
}

/// Named transform registry used by the command line tool. Available names:
///   identity              y = x                       (any dimension)
///   quadratic             y_i = alpha*x_i + beta*x_i^2  (params alpha, beta)
///   sin, cos              element-wise
///   sincos                [sin(x1*x2), cos(x1*x2)]    (dimension 2 -> 2)
///   sir                   SIR step (params beta, gamma, N, I, R; 2 -> 2)
inline Transform make_transform(const std::string& name,
                                const std::map<std::string, double>& params,
                                Eigen::Index dim) {
    auto param = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto required = [&](const std::string& key) {
        auto it = params.find(key);
        if (it == params.end())
            throw ParameterDomainError(key, "transform '" + name + "' requires parameter '" +
                                                key + "'");
        return it->second;
    };

    if (name == "identity") {
        return {dim, dim, [](const Vector& x) { return x; }};
    }
    if (name == "quadratic") {
        const double alpha = param("alpha", 3.0);
        const double beta = param("beta", 2.0);
        return {dim, dim, [alpha, beta](const Vector& x) -> Vector {
                    return alpha * x.array() + beta * x.array().square();
                }};
    }
    if (name == "sin") {
        return {dim, dim, [](const Vector& x) -> Vector { return x.array().sin(); }};
    }
    if (name == "cos") {
        return {dim, dim, [](const Vector& x) -> Vector { return x.array().cos(); }};
    }
    if (name == "sincos") {
        return {2, 2, [](const Vector& x) -> Vector {
                    Vector y(2);
                    y[0] = std::sin(x[0] * x[1]);
                    y[1] = std::cos(x[0] * x[1]);
                    return y;
                }};
    }
    if (name == "sir") {
        SIRState st;
        st.beta = required("beta");
        st.gamma = required("gamma");
        st.population = required("N");
        st.infected = required("I");
        st.recovered = required("R");
        st.validate();
        return {2, 2, [st](const Vector& x) { return sir_map(x, st); }};
    }
    throw ParameterDomainError("fn", "unknown transform '" + name + "'");
}

inline std::vector<std::string> transform_names() {
    return {"identity", "quadratic", "sin", "cos", "sincos", "sir"};
}

}  // namespace genut
