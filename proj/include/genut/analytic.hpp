#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "genut/errors.hpp"
#include "genut/moments.hpp"
#include "genut/transforms.hpp"

namespace genut {

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;
};

/// Raw moments E[x], E[x^2], E[x^3], E[x^4] from central moments.
struct RawMoments {
    double m1, m2, m3, m4;
};

inline RawMoments raw_moments(const UnivariateMoments& c) {
    RawMoments r;
    const double m = c.mean;
    r.m1 = m;
    r.m2 = c.variance + m * m;
    r.m3 = c.skewness + 3.0 * m * c.variance + m * m * m;
    r.m4 = c.kurtosis + 4.0 * m * c.skewness + 6.0 * m * m * c.variance + m * m * m * m;
    return r;
}

/// Exact mean and variance of y = alpha*x + beta*x^2 from raw moments of x.
inline MeanVar quadratic_truth(const UnivariateMoments& c, double alpha, double beta) {
    const RawMoments r = raw_moments(c);
    MeanVar out;
    out.mean = alpha * r.m1 + beta * r.m2;
    const double ey2 = alpha * alpha * r.m2 + 2.0 * alpha * beta * r.m3 + beta * beta * r.m4;
    out.variance = ey2 - out.mean * out.mean;
    return out;
}

/// Whether the characteristic function is available in closed form.
inline bool has_char_fn(const DistributionSpec& d) {
    return std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            return std::is_same_v<T, Gaussian> || std::is_same_v<T, Exponential> ||
                   std::is_same_v<T, Gamma> || std::is_same_v<T, Poisson> ||
                   std::is_same_v<T, Binomial> || std::is_same_v<T, Geometric> ||
                   std::is_same_v<T, NegativeBinomial>;
        },
        d);
}

/// Characteristic function E[exp(i t X)] for the families that admit one in
/// closed form. Throws for Weibull, Rayleigh and beta.
inline std::complex<double> char_fn(const DistributionSpec& d, double t) {
    using C = std::complex<double>;
    const C it(0.0, t);
    return std::visit(
        [&](const auto& v) -> C {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return std::exp(it * v.mu - 0.5 * v.sigma2 * t * t);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return v.lambda / (v.lambda - it);
            } else if constexpr (std::is_same_v<T, Gamma>) {
                return std::pow(1.0 - v.b * it, C(-v.a));
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return std::exp(v.lambda * (std::exp(it) - 1.0));
            } else if constexpr (std::is_same_v<T, Binomial>) {
                return std::pow(1.0 - v.p + v.p * std::exp(it), C(double(v.n)));
            } else if constexpr (std::is_same_v<T, Geometric>) {
                return v.p / (1.0 - (1.0 - v.p) * std::exp(it));
            } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
                return std::pow(v.p / (1.0 - (1.0 - v.p) * std::exp(it)), C(v.r));
            } else {
                throw Error("char_fn: no closed form for this distribution");
            }
        },
        d);
}

/// Exact mean and variance of y = sin(X) via the characteristic function:
/// E[sin X] = Im cf(1) and E[sin^2 X] = (1 - Re cf(2)) / 2.
inline MeanVar sin_truth(const DistributionSpec& d) {
    const double m = char_fn(d, 1.0).imag();
    const double es2 = 0.5 * (1.0 - char_fn(d, 2.0).real());
    return {m, es2 - m * m};
}

/// Probability mass function for the discrete families.
inline double pmf(const DistributionSpec& d, long k) {
    if (k < 0) return 0.0;
    return std::visit(
        [k](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Poisson>) {
                return std::exp(k * std::log(v.lambda) - v.lambda - std::lgamma(double(k) + 1.0));
            } else if constexpr (std::is_same_v<T, Binomial>) {
                if (k > v.n) return 0.0;
                const double logc = std::lgamma(double(v.n) + 1.0) -
                                    std::lgamma(double(k) + 1.0) -
                                    std::lgamma(double(v.n - k) + 1.0);
                if (v.p == 0.0) return k == 0 ? 1.0 : 0.0;
                if (v.p == 1.0) return k == v.n ? 1.0 : 0.0;
                return std::exp(logc + k * std::log(v.p) + (v.n - k) * std::log1p(-v.p));
            } else if constexpr (std::is_same_v<T, Geometric>) {
                if (v.p == 1.0) return k == 0 ? 1.0 : 0.0;
                return std::exp(std::log(v.p) + k * std::log1p(-v.p));
            } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
                const double logc = std::lgamma(v.r + double(k)) - std::lgamma(double(k) + 1.0) -
                                    std::lgamma(v.r);
                return std::exp(logc + v.r * std::log(v.p) + k * std::log1p(-v.p));
            } else {
                throw Error("pmf: not a discrete distribution");
            }
        },
        d);
}

/// E[g(X)] for a discrete X by direct summation over the support, truncated
/// once the accumulated probability mass is within `tail_tol` of one.
inline double discrete_series_expectation(const DistributionSpec& d,
                                          const std::function<double(long)>& g,
                                          double tail_tol = 1e-14) {
    double acc = 0.0;
    double mass = 0.0;
    const long hard_cap = 100000000;
    for (long k = 0; k < hard_cap; ++k) {
        const double p = pmf(d, k);
        acc += p * g(k);
        mass += p;
        if (mass >= 1.0 - tail_tol) return acc;
        // Terms that have underflowed cannot close the remaining mass gap.
        if (k > 10 && p < 1e-22 * std::max(1.0, std::abs(acc))) return acc;
    }
    throw Error("discrete_series_expectation: series did not converge");
}

/// Exact mean and covariance of one SIR step driven by an input with
/// independent coordinates. The map is quadratic in x, so the statistics are
/// polynomial in the first four moments of each coordinate:
///   y1 = I + c*(N*x1 - x1^2 - x1*x2),  c = beta/N
///   y2 = R + gamma*x1
struct SirTruth {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
};

inline SirTruth sir_analytic_truth(const SIRState& st, const UnivariateMoments& x1,
                                   const UnivariateMoments& x2) {
    st.validate();
    const double c = st.beta / st.population;
    const double a1 = st.population - 2.0 * x1.mean - x2.mean;
    const double a2 = -x1.mean;

    SirTruth t;
    t.mean[0] = st.infected + c * (st.population * x1.mean - x1.mean * x1.mean -
                                   x1.mean * x2.mean - x1.variance);
    t.mean[1] = st.recovered + st.gamma * x1.mean;

    // Centered expansion: A - E[A] = a1*z1 + a2*z2 - (z1^2 - P1) - z1*z2.
    const double var_a = a1 * a1 * x1.variance + a2 * a2 * x2.variance +
                         (x1.kurtosis - x1.variance * x1.variance) +
                         x1.variance * x2.variance - 2.0 * a1 * x1.skewness;
    const double cov_a_z1 = a1 * x1.variance - x1.skewness;

    t.cov(0, 0) = c * c * var_a;
    t.cov(0, 1) = c * st.gamma * cov_a_z1;
    t.cov(1, 0) = t.cov(0, 1);
    t.cov(1, 1) = st.gamma * st.gamma * x1.variance;
    return t;
}

}  // namespace genut
