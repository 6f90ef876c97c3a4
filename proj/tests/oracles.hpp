// Independent oracles used only by the tests: numerical integration of the
// raw densities for the continuous families, truncated summation for the
// discrete ones, and small helpers shared across test binaries. Nothing here
// goes through the closed forms under test.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "genut/moments.hpp"
#include "genut/sigma_points.hpp"

namespace oracles {

using genut::DistributionSpec;
using genut::Matrix;
using genut::UnivariateMoments;
using genut::Vector;

enum class Support { Real, HalfLine, UnitInterval, Discrete };

inline Support support_of(const DistributionSpec& d) {
    return std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, genut::Gaussian>) return Support::Real;
            else if constexpr (std::is_same_v<T, genut::Beta>) return Support::UnitInterval;
            else if constexpr (std::is_same_v<T, genut::Exponential> ||
                               std::is_same_v<T, genut::Gamma> ||
                               std::is_same_v<T, genut::Weibull> ||
                               std::is_same_v<T, genut::Rayleigh>)
                return Support::HalfLine;
            else return Support::Discrete;
        },
        d);
}

/// Density written straight from the textbook formulas.
inline double pdf(const DistributionSpec& d, double x) {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, genut::Gaussian>) {
                const double z = (x - v.mu) / std::sqrt(v.sigma2);
                return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi * v.sigma2);
            } else if constexpr (std::is_same_v<T, genut::Exponential>) {
                return x < 0 ? 0.0 : v.lambda * std::exp(-v.lambda * x);
            } else if constexpr (std::is_same_v<T, genut::Gamma>) {
                if (x <= 0) return 0.0;
                return std::exp((v.a - 1.0) * std::log(x) - x / v.b - std::lgamma(v.a) -
                                v.a * std::log(v.b));
            } else if constexpr (std::is_same_v<T, genut::Weibull>) {
                if (x <= 0) return 0.0;
                const double r = x / v.a;
                return std::exp(std::log(v.b / v.a) + (v.b - 1.0) * std::log(r) -
                                std::pow(r, v.b));
            } else if constexpr (std::is_same_v<T, genut::Rayleigh>) {
                if (x <= 0) return 0.0;
                const double s2 = v.sigma * v.sigma;
                return std::exp(std::log(x / s2) - 0.5 * x * x / s2);
            } else if constexpr (std::is_same_v<T, genut::Beta>) {
                if (x <= 0 || x >= 1) return 0.0;
                const double logb = std::lgamma(v.a + v.b) - std::lgamma(v.a) -
                                    std::lgamma(v.b);
                return std::exp(logb + (v.a - 1.0) * std::log(x) +
                                (v.b - 1.0) * std::log1p(-x));
            } else {
                throw std::logic_error("pdf oracle: discrete distribution");
            }
        },
        d);
}

/// Mass function written straight from the textbook formulas.
inline double pmf_oracle(const DistributionSpec& d, long k) {
    if (k < 0) return 0.0;
    return std::visit(
        [k](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, genut::Poisson>) {
                return std::exp(k * std::log(v.lambda) - v.lambda -
                                std::lgamma(double(k) + 1.0));
            } else if constexpr (std::is_same_v<T, genut::Binomial>) {
                if (k > v.n) return 0.0;
                double logp = std::lgamma(double(v.n) + 1.0) - std::lgamma(double(k) + 1.0) -
                              std::lgamma(double(v.n - k) + 1.0);
                if (v.p > 0) logp += k * std::log(v.p);
                else if (k > 0) return 0.0;
                if (v.p < 1) logp += (v.n - k) * std::log1p(-v.p);
                else if (k < v.n) return 0.0;
                return std::exp(logp);
            } else if constexpr (std::is_same_v<T, genut::Geometric>) {
                if (v.p == 1.0) return k == 0 ? 1.0 : 0.0;
                return v.p * std::pow(1.0 - v.p, double(k));
            } else if constexpr (std::is_same_v<T, genut::NegativeBinomial>) {
                return std::exp(std::lgamma(v.r + k) - std::lgamma(double(k) + 1.0) -
                                std::lgamma(v.r) + v.r * std::log(v.p) +
                                k * std::log1p(-v.p));
            } else {
                throw std::logic_error("pmf oracle: continuous distribution");
            }
        },
        d);
}

/// E[g(x)] by quadrature of g * pdf over the support.
inline double continuous_expectation(const DistributionSpec& d,
                                     const std::function<double(double)>& g) {
    // Where the density has underflowed, the tail contributes nothing; do not
    // multiply it by a potentially huge g(x).
    const auto f = [&](double x) {
        const double p = pdf(d, x);
        if (!(p > 0.0) || !std::isfinite(p)) return 0.0;
        return g(x) * p;
    };
    switch (support_of(d)) {
        case Support::Real: {
            boost::math::quadrature::sinh_sinh<double> integrator;
            return integrator.integrate(f, 1e-12);
        }
        case Support::UnitInterval: {
            // Substitute x = sin^2(t) so shape parameters down to 1/2 leave a
            // bounded integrand on [0, pi/2].
            const auto* beta = std::get_if<genut::Beta>(&d);
            const double a = beta->a, b = beta->b;
            const double logc =
                std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + std::log(2.0);
            const auto h = [&](double t) {
                const double s = std::sin(t), c = std::cos(t);
                const double x = s * s;
                if (x <= 0.0 || x >= 1.0) return 0.0;
                const double w = std::exp(logc + (2.0 * a - 1.0) * std::log(s) +
                                          (2.0 * b - 1.0) * std::log(c));
                return std::isfinite(w) ? g(x) * w : 0.0;
            };
            boost::math::quadrature::tanh_sinh<double> integrator;
            return integrator.integrate(h, 0.0, std::numbers::pi / 2.0, 1e-12);
        }
        case Support::HalfLine: {
            // Split so endpoint behaviour and the decaying tail are handled
            // by the quadrature suited to each piece.
            boost::math::quadrature::tanh_sinh<double> head;
            boost::math::quadrature::exp_sinh<double> tail;
            const double split = 1.0;
            return head.integrate(f, 0.0, split, 1e-12) +
                   tail.integrate([&](double t) { return f(split + t); }, 1e-12);
        }
        default:
            throw std::logic_error("continuous_expectation: discrete distribution");
    }
}

/// E[g(k)] by truncated summation; terms are added until the remaining tail
/// mass is negligible relative to the accumulated sum.
inline double discrete_expectation(const DistributionSpec& d,
                                   const std::function<double(long)>& g) {
    double acc = 0.0;
    double mass = 0.0;
    for (long k = 0; k < 200000000; ++k) {
        const double p = pmf_oracle(d, k);
        acc += p * g(k);
        mass += p;
        if (1.0 - mass < 1e-15) return acc;
        // Past the mode the mass function decays monotonically; once terms
        // underflow the remaining tail cannot move the sum.
        if (k > 10 && p < 1e-20 * std::max(1.0, std::abs(acc))) return acc;
    }
    throw std::runtime_error("discrete_expectation: no convergence");
}

inline double expectation(const DistributionSpec& d, const std::function<double(double)>& g) {
    if (support_of(d) == Support::Discrete) {
        return discrete_expectation(d, [&](long k) { return g(double(k)); });
    }
    return continuous_expectation(d, g);
}

/// First four central moments, computed without the closed forms.
inline UnivariateMoments oracle_moments(const DistributionSpec& d) {
    UnivariateMoments m;
    m.mean = expectation(d, [](double x) { return x; });
    const double mean = m.mean;
    m.variance = expectation(d, [mean](double x) { return (x - mean) * (x - mean); });
    m.skewness = expectation(d, [mean](double x) { return std::pow(x - mean, 3); });
    m.kurtosis = expectation(d, [mean](double x) { return std::pow(x - mean, 4); });
    return m;
}

// ---------------------------------------------------------------------------
// Random feasible moment specs for property tests.
// ---------------------------------------------------------------------------

/// Random spec with diagonal covariance; kurtosis diagonal is placed strictly
/// above the feasibility bound so kurtosis matching is exact. Nonnegative
/// skewness can be requested for constraint tests (shrinking u by a bound
/// repair keeps v = u + s positive only when s >= 0).
inline genut::MomentSpec random_diagonal_spec(std::mt19937_64& rng, int n,
                                              bool nonneg_skew = false) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.2, 3.0);
    genut::MomentSpec spec;
    spec.mean.resize(n);
    spec.covariance = Matrix::Zero(n, n);
    spec.skew_diag.resize(n);
    spec.kurt_diag.resize(n);
    for (int i = 0; i < n; ++i) {
        spec.mean[i] = 5.0 * unif(rng);
        const double var = pos(rng);
        spec.covariance(i, i) = var;
        const double sd = std::sqrt(var);
        double s_scaled = 2.0 * unif(rng);  // skewness over sd^3
        if (nonneg_skew) s_scaled = std::abs(s_scaled);
        const double k_scaled = s_scaled * s_scaled + pos(rng);  // above the bound
        spec.skew_diag[i] = s_scaled * sd * sd * sd;
        spec.kurt_diag[i] = k_scaled * var * var;
    }
    return spec;
}

/// Random spec with a dense SPD covariance (moment diagonals still feasible
/// under the diagonal-of-L scaling used by the generator).
inline genut::MomentSpec random_dense_spec(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.2, 3.0);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = unif(rng);
    genut::MomentSpec spec;
    spec.covariance = a * a.transpose() + 0.4 * double(n) * Matrix::Identity(n, n);
    spec.mean.resize(n);
    spec.skew_diag.resize(n);
    spec.kurt_diag.resize(n);
    const Matrix L = genut::matrix_sqrt(spec.covariance);
    for (int i = 0; i < n; ++i) {
        spec.mean[i] = 5.0 * unif(rng);
        const double lii = L(i, i);
        const double s_scaled = 2.0 * unif(rng);
        const double k_scaled = s_scaled * s_scaled + pos(rng);
        spec.skew_diag[i] = s_scaled * lii * lii * lii;
        spec.kurt_diag[i] = k_scaled * lii * lii * lii * lii;
    }
    return spec;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double rel_err(const Vector& got, const Vector& want) {
    return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

inline double rel_err(const Matrix& got, const Matrix& want) {
    return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

}  // namespace oracles
