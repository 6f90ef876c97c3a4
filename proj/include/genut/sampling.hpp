#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "genut/errors.hpp"
#include "genut/moments.hpp"
#include "genut/propagation.hpp"

namespace genut {

// ---------------------------------------------------------------------------
// Seeded Monte Carlo sampling. All draws come from a pinned generator
// (xoshiro256++ seeded through splitmix64) so that results are reproducible
// for a fixed (seed, generator, spec, N). Parallel work derives disjoint
// sub-streams from (seed, stream index); aggregation order is fixed.
// ---------------------------------------------------------------------------

inline constexpr const char* kGeneratorId = "xoshiro256++";

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : x_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (x_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t x_;
};

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in the open interval (0, 1).
    double uniform01() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

/// Seed for sub-stream `index` of a run seeded with `seed`.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 sm(seed);
    std::uint64_t out = sm.next();
    for (std::uint64_t i = 0; i < index; ++i) out = sm.next();
    return out;
}

namespace detail {

inline double draw_gaussian_std(Xoshiro256pp& rng) {
    // Box-Muller, cosine branch only; two uniforms per draw.
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double draw_gamma_std(double shape, Xoshiro256pp& rng) {
    // Marsaglia-Tsang squeeze; shape < 1 boosted through shape + 1.
    if (shape < 1.0) {
        const double boost = std::pow(rng.uniform01(), 1.0 / shape);
        return draw_gamma_std(shape + 1.0, rng) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = draw_gaussian_std(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline long draw_poisson_inversion(double lambda, Xoshiro256pp& rng) {
    const double L = std::exp(-lambda);
    long k = 0;
    double p = rng.uniform01();
    while (p > L) {
        p *= rng.uniform01();
        ++k;
    }
    return k;
}

inline long draw_poisson_ptrs(double lambda, Xoshiro256pp& rng) {
    // Hoermann's transformed rejection (PTRS), valid for lambda >= 10.
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform01() - 0.5;
        const double v = rng.uniform01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= vr) return long(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * loglam - lambda - std::lgamma(kf + 1.0)) {
            return long(kf);
        }
    }
}

inline long draw_poisson(double lambda, Xoshiro256pp& rng) {
    return lambda < 30.0 ? draw_poisson_inversion(lambda, rng) : draw_poisson_ptrs(lambda, rng);
}

}  // namespace detail

/// One draw from a distribution. Inverse CDF for exponential, Rayleigh,
/// geometric and Weibull; Box-Muller for Gaussian; Marsaglia-Tsang rejection
/// for gamma (and beta as a gamma ratio); direct methods for the discrete
/// families (Poisson switches from inversion to PTRS at lambda = 30; negative
/// binomial is sampled as a gamma-mixed Poisson, which supports non-integer r).
inline double sample_one(const DistributionSpec& d, Xoshiro256pp& rng) {
    return std::visit(
        [&rng](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return v.mu + std::sqrt(v.sigma2) * detail::draw_gaussian_std(rng);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log(rng.uniform01()) / v.lambda;
            } else if constexpr (std::is_same_v<T, Gamma>) {
                return v.b * detail::draw_gamma_std(v.a, rng);
            } else if constexpr (std::is_same_v<T, Weibull>) {
                return v.a * std::pow(-std::log(rng.uniform01()), 1.0 / v.b);
            } else if constexpr (std::is_same_v<T, Rayleigh>) {
                return v.sigma * std::sqrt(-2.0 * std::log(rng.uniform01()));
            } else if constexpr (std::is_same_v<T, Beta>) {
                const double x = detail::draw_gamma_std(v.a, rng);
                const double y = detail::draw_gamma_std(v.b, rng);
                return x / (x + y);
            } else if constexpr (std::is_same_v<T, Binomial>) {
                long k = 0;
                for (long i = 0; i < v.n; ++i) k += rng.uniform01() < v.p ? 1 : 0;
                return double(k);
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return double(detail::draw_poisson(v.lambda, rng));
            } else if constexpr (std::is_same_v<T, Geometric>) {
                if (v.p == 1.0) return 0.0;
                return std::floor(std::log(rng.uniform01()) / std::log1p(-v.p));
            } else {  // NegativeBinomial
                const double scale = (1.0 - v.p) / v.p;
                const double lambda = scale * detail::draw_gamma_std(v.r, rng);
                return lambda == 0.0 ? 0.0 : double(detail::draw_poisson(lambda, rng));
            }
        },
        d);
}

/// A reproducible batch of i.i.d. draws (one row per coordinate).
struct SampleBatch {
    Matrix draws;  ///< n x N
    std::uint64_t seed = 0;
    std::string generator_id = kGeneratorId;
};

inline SampleBatch sample(const DistributionSpec& d, Eigen::Index count, std::uint64_t seed) {
    validate(d);
    if (count < 1) throw ParameterDomainError("N", "sample: count must be at least 1");
    SampleBatch batch;
    batch.seed = seed;
    batch.draws.resize(1, count);
    Xoshiro256pp rng(seed);
    for (Eigen::Index i = 0; i < count; ++i) batch.draws(0, i) = sample_one(d, rng);
    return batch;
}

/// Empirical statistics of f over N joint draws, plus standard error
/// estimates for the mean and covariance entries.
struct McTruthResult {
    TransformResult result;  ///< transformed_points left empty
    Vector mean_se;
    Matrix cov_se;
    Eigen::Index n_draws = 0;
    std::uint64_t seed = 0;
    std::string generator_id = kGeneratorId;
};

/// Empirical mean/covariance (plus third/fourth moment diagonals) of
/// y = f(x) where the coordinates of x are independent draws from `ds`.
/// Each coordinate uses its own sub-stream derived from (seed, index), so the
/// result does not depend on how the coordinate work is scheduled. Draws are
/// processed in blocks; accumulation order is fixed.
inline McTruthResult mc_truth(const std::vector<DistributionSpec>& ds, const Transform& f,
                              Eigen::Index count, std::uint64_t seed) {
    const Eigen::Index n = Eigen::Index(ds.size());
    if (n == 0) throw Error("mc_truth: empty distribution list");
    if (f.in_dim != n) throw Error("mc_truth: transform arity mismatch");
    if (count < 1) throw ParameterDomainError("N", "mc_truth: count must be at least 1");
    for (const auto& d : ds) validate(d);

    const Eigen::Index m = f.out_dim;
    std::vector<Xoshiro256pp> streams;
    streams.reserve(size_t(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        streams.emplace_back(derive_stream_seed(seed, std::uint64_t(i)));
    }

    // Raw-moment accumulators (long double to tame cancellation at large N).
    Eigen::Array<long double, Eigen::Dynamic, 1> s1(m), s3(m), s4(m);
    Eigen::Array<long double, Eigen::Dynamic, Eigen::Dynamic> s11(m, m), s22(m, m), s21(m, m);
    s1.setZero();
    s3.setZero();
    s4.setZero();
    s11.setZero();
    s22.setZero();
    s21.setZero();

    const Eigen::Index block = std::min<Eigen::Index>(count, 1 << 16);
    Matrix x(n, block);
    Vector y(m);
    Eigen::Index done = 0;
    while (done < count) {
        const Eigen::Index len = std::min(block, count - done);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < len; ++k) x(i, k) = sample_one(ds[size_t(i)], streams[size_t(i)]);
        }
        for (Eigen::Index k = 0; k < len; ++k) {
            y = f(x.col(k).head(n));
            if (!y.allFinite()) {
                throw EvaluationError(done + k, "mc_truth: non-finite transform output");
            }
            for (Eigen::Index j = 0; j < m; ++j) {
                const long double yj = y[j];
                s1[j] += yj;
                s3[j] += yj * yj * yj;
                s4[j] += yj * yj * yj * yj;
                for (Eigen::Index l = 0; l < m; ++l) {
                    const long double yl = y[l];
                    s11(j, l) += yj * yl;
                    s21(j, l) += yj * yj * yl;
                    s22(j, l) += yj * yj * yl * yl;
                }
            }
        }
        done += len;
    }

    const long double N = static_cast<long double>(count);
    McTruthResult out;
    out.n_draws = count;
    out.seed = seed;
    out.result.mean.resize(m);
    out.result.covariance.resize(m, m);
    out.result.skew_diag.resize(m);
    out.result.kurt_diag.resize(m);
    out.mean_se.resize(m);
    out.cov_se.resize(m, m);

    for (Eigen::Index j = 0; j < m; ++j) out.result.mean[j] = double(s1[j] / N);
    for (Eigen::Index j = 0; j < m; ++j) {
        const long double mj = s1[j] / N;
        for (Eigen::Index l = 0; l < m; ++l) {
            const long double ml = s1[l] / N;
            out.result.covariance(j, l) = double(s11(j, l) / N - mj * ml);
        }
        // Central third/fourth moments from the raw sums.
        const long double m2 = s11(j, j) / N;
        const long double m3 = s3[j] / N;
        const long double m4 = s4[j] / N;
        out.result.skew_diag[j] = double(m3 - 3.0L * mj * m2 + 2.0L * mj * mj * mj);
        out.result.kurt_diag[j] = double(m4 - 4.0L * mj * m3 + 6.0L * mj * mj * m2 -
                                         3.0L * mj * mj * mj * mj);
    }
    out.result.covariance = 0.5 * (out.result.covariance + out.result.covariance.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.result.covariance, Eigen::EigenvaluesOnly);
    out.result.cov_min_eigenvalue = es.eigenvalues().minCoeff();

    for (Eigen::Index j = 0; j < m; ++j) {
        out.mean_se[j] = std::sqrt(std::max(0.0, out.result.covariance(j, j)) / double(count));
    }
    // Delta-method standard error of each covariance entry:
    // var(C_jl) ~ (E[yc_j^2 yc_l^2] - C_jl^2) / N with yc centered.
    for (Eigen::Index j = 0; j < m; ++j) {
        const long double mj = s1[j] / N;
        for (Eigen::Index l = 0; l < m; ++l) {
            const long double ml = s1[l] / N;
            const long double e_j2l2 =
                s22(j, l) / N - 2.0L * ml * s21(j, l) / N + ml * ml * s11(j, j) / N -
                2.0L * mj * (s21(l, j) / N - 2.0L * ml * s11(j, l) / N + ml * ml * s1[j] / N) +
                mj * mj * (s11(l, l) / N - 2.0L * ml * s1[l] / N + ml * ml);
            const long double c = out.result.covariance(j, l);
            const long double var_c = (e_j2l2 - c * c) / N;
            out.cov_se(j, l) = std::sqrt(std::max(0.0, double(var_c)));
        }
    }
    return out;
}

}  // namespace genut
