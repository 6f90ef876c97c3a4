#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "genut/analytic.hpp"
#include "genut/json_io.hpp"
#include "genut/moments.hpp"
#include "genut/propagation.hpp"
#include "genut/report.hpp"
#include "genut/sampling.hpp"
#include "genut/sigma_points.hpp"
#include "genut/transforms.hpp"
#include "genut/unscented.hpp"

namespace genut {

// ---------------------------------------------------------------------------
// Benchmark reproduction runs. Each selector reproduces one published example,
// error table or case study, comparing this library's output against the
// published reference values at fixed tolerances. Runs are deterministic
// given (selector, seed); Monte Carlo columns use per-row sub-streams derived
// from the run seed.
// ---------------------------------------------------------------------------

enum class ReproTarget {
    Example1,
    Example2,
    ScalarExample,
    Table2,
    Table3,
    Table4,
    Table5,
    Case2,
    Case3,
};

inline const char* to_string(ReproTarget t) {
    switch (t) {
        case ReproTarget::Example1: return "example1";
        case ReproTarget::Example2: return "example2";
        case ReproTarget::ScalarExample: return "scalar-example";
        case ReproTarget::Table2: return "table2";
        case ReproTarget::Table3: return "table3";
        case ReproTarget::Table4: return "table4";
        case ReproTarget::Table5: return "table5";
        case ReproTarget::Case2: return "case2";
        default: return "case3";
    }
}

inline ReproTarget repro_target_from_string(const std::string& s) {
    for (ReproTarget t : {ReproTarget::Example1, ReproTarget::Example2,
                          ReproTarget::ScalarExample, ReproTarget::Table2, ReproTarget::Table3,
                          ReproTarget::Table4, ReproTarget::Table5, ReproTarget::Case2,
                          ReproTarget::Case3}) {
        if (s == to_string(t)) return t;
    }
    throw ParameterDomainError("table", "unknown reproduction selector '" + s + "'");
}

namespace tol {

inline constexpr double kPrinted = 5e-4;        ///< values published with 4 decimals
inline constexpr double kExactStat = 1e-10;     ///< moment identities of the point sets
inline constexpr double kTablePct = 0.5;        ///< table cells, percentage points
inline constexpr double kGenutZeroPct = 1e-8;   ///< analytically exact table columns
inline constexpr double kCase2Pct = 1.0;        ///< case 2 cells, percentage points
inline constexpr double kCase3GenutCovPct = 0.05;
inline constexpr double kCase3UtCovPct = 0.3;
inline constexpr double kCase3MeanPct = 1e-8;
inline constexpr double kZ99 = 2.5758293035489004;  ///< two-sided 99% normal quantile

}  // namespace tol

/// One asserted number of a reproduction run. `value` is the computed result
/// (for table selectors: a percentage error); `published` is the reference it
/// is held against. Ungated rows are informational and always pass.
struct ReproRow {
    std::string distribution;
    std::string scheme;
    std::string quantity;
    std::optional<double> value;
    std::optional<double> published;
    double tolerance = 0.0;
    bool gated = false;
    bool pass = true;
    std::optional<double> truth;     ///< underlying truth value, when meaningful
    std::optional<double> band_pct;  ///< 99% CLT band (percentage points), MC rows only
};

struct ReproReport {
    std::string selector;
    std::uint64_t seed = 0;
    std::string generator_id = kGeneratorId;
    std::vector<ReproRow> rows;

    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

namespace detail {

class ReportBuilder {
public:
    ReportBuilder(ReproTarget t, std::uint64_t seed) {
        report_.selector = to_string(t);
        report_.seed = seed;
    }

    /// Gated comparison |value - published| <= tolerance.
    void expect(const std::string& dist, const std::string& scheme, const std::string& quantity,
                double value, double published, double tolerance) {
        ReproRow r;
        r.distribution = dist;
        r.scheme = scheme;
        r.quantity = quantity;
        r.value = value;
        r.published = published;
        r.tolerance = tolerance;
        r.gated = true;
        r.pass = std::isfinite(value) && std::abs(value - published) <= tolerance;
        report_.rows.push_back(std::move(r));
    }

    /// Gated upper bound value <= tolerance (used for analytically exact cells).
    void expect_max(const std::string& dist, const std::string& scheme,
                    const std::string& quantity, double value, double tolerance,
                    std::optional<double> published = std::nullopt) {
        ReproRow r;
        r.distribution = dist;
        r.scheme = scheme;
        r.quantity = quantity;
        r.value = value;
        r.published = published;
        r.tolerance = tolerance;
        r.gated = true;
        r.pass = std::isfinite(value) && value <= tolerance;
        report_.rows.push_back(std::move(r));
    }

    /// Gated CLT-band check for a Monte Carlo estimate.
    void expect_band(const std::string& dist, const std::string& scheme,
                     const std::string& quantity, double error_pct, double band_pct,
                     std::optional<double> published) {
        ReproRow r;
        r.distribution = dist;
        r.scheme = scheme;
        r.quantity = quantity;
        r.value = error_pct;
        r.published = published;
        r.tolerance = band_pct;
        r.gated = true;
        r.pass = std::isfinite(error_pct) && error_pct <= band_pct;
        r.band_pct = band_pct;
        report_.rows.push_back(std::move(r));
    }

    /// Ungated informational row.
    void note(const std::string& dist, const std::string& scheme, const std::string& quantity,
              std::optional<double> value, std::optional<double> published) {
        ReproRow r;
        r.distribution = dist;
        r.scheme = scheme;
        r.quantity = quantity;
        r.value = value;
        r.published = published;
        r.gated = false;
        r.pass = true;
        report_.rows.push_back(std::move(r));
    }

    void set_truth_on_last(double truth) { report_.rows.back().truth = truth; }

    ReproReport take() { return std::move(report_); }

private:
    ReproReport report_;
};

inline std::string idx1(const char* base, Eigen::Index i) {
    return std::string(base) + "[" + std::to_string(i) + "]";
}

inline std::string idx2(const char* base, Eigen::Index i, Eigen::Index j) {
    return std::string(base) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

inline double pct(double approx, double truth) {
    const Vector a = Vector::Constant(1, approx);
    const Vector t = Vector::Constant(1, truth);
    return percentage_error(a, t).values(0, 0);
}

/// Compares every point-set quantity printed for the two worked examples.
inline void expect_point_set(ReportBuilder& b, const std::string& dist,
                             const std::string& scheme, const SigmaPointSet& set,
                             const Matrix& chi_ref, const Vector& w_ref, const Vector& u_ref,
                             const Vector& v_ref) {
    for (Eigen::Index i = 0; i < u_ref.size(); ++i) {
        b.expect(dist, scheme, idx1("u", i), set.u[i], u_ref[i], tol::kPrinted);
        b.expect(dist, scheme, idx1("v", i), set.v[i], v_ref[i], tol::kPrinted);
    }
    for (Eigen::Index i = 0; i < w_ref.size(); ++i) {
        b.expect(dist, scheme, idx1("w", i), set.weights[i], w_ref[i], tol::kPrinted);
    }
    for (Eigen::Index r = 0; r < chi_ref.rows(); ++r) {
        for (Eigen::Index c = 0; c < chi_ref.cols(); ++c) {
            b.expect(dist, scheme, idx2("chi", r, c), set.points(r, c), chi_ref(r, c),
                     tol::kPrinted);
        }
    }
}

/// Sample-statistic identities of a point set against its moment spec.
/// `check_skew`/`check_kurt` reflect which identities survive constraining.
inline void expect_sample_stats(ReportBuilder& b, const std::string& dist,
                                const std::string& scheme, const SigmaPointSet& set,
                                const MomentSpec& spec, bool check_skew, bool check_kurt) {
    const Vector mean = sample_mean(set.points, set.weights);
    const Matrix cov = sample_covariance(set.points, set.weights, mean);
    const Vector skew = sample_skew_diag(set.points, set.weights, mean);
    const Vector kurt = sample_kurt_diag(set.points, set.weights, mean);
    for (Eigen::Index i = 0; i < spec.dim(); ++i) {
        b.expect(dist, scheme, idx1("mean_hat", i), mean[i], spec.mean[i], tol::kExactStat);
    }
    for (Eigen::Index i = 0; i < spec.dim(); ++i) {
        for (Eigen::Index j = 0; j < spec.dim(); ++j) {
            b.expect(dist, scheme, idx2("cov_hat", i, j), cov(i, j), spec.covariance(i, j),
                     tol::kExactStat);
        }
    }
    if (check_skew) {
        for (Eigen::Index i = 0; i < spec.dim(); ++i) {
            b.expect(dist, scheme, idx1("skew_hat", i), skew[i], spec.skew_diag[i],
                     tol::kExactStat);
        }
    }
    if (check_kurt) {
        for (Eigen::Index i = 0; i < spec.dim(); ++i) {
            b.expect(dist, scheme, idx1("kurt_hat", i), kurt[i], spec.kurt_diag[i],
                     tol::kExactStat);
        }
    }
}

struct TableRow {
    DistributionSpec dist;
    double genut, ut, mc, hosput;  ///< published percentage errors
};

/// Scheme estimates of (mean, variance) for a scalar distribution.
struct ScalarEstimates {
    MeanVar genut, ut;
};

inline ScalarEstimates scalar_scheme_estimates(const DistributionSpec& d, const Transform& f) {
    const MomentSpec spec = independent_joint({d});
    const TransformResult g = propagate(generate(spec), f);
    const SigmaPointSet utset =
        ut_sigma_points(spec.mean, spec.covariance, default_kappa(spec.dim()));
    const TransformResult u = propagate(utset, f);
    return {{g.mean[0], g.covariance(0, 0)}, {u.mean[0], u.covariance(0, 0)}};
}

/// Monte Carlo estimate of (mean, variance) of f over draws of a scalar
/// distribution, with delta-method standard errors.
struct ScalarMcEstimate {
    MeanVar stat;
    double mean_se;
    double var_se;
};

inline ScalarMcEstimate scalar_mc_estimate(const DistributionSpec& d, const Transform& f,
                                           Eigen::Index count, std::uint64_t seed) {
    const McTruthResult r = mc_truth({d}, f, count, seed);
    ScalarMcEstimate out;
    out.stat = {r.result.mean[0], r.result.covariance(0, 0)};
    out.mean_se = r.mean_se[0];
    out.var_se = r.cov_se(0, 0);
    return out;
}

inline void run_quadratic_table(ReportBuilder& b, Quantity q, std::uint64_t seed) {
    const std::vector<TableRow> rows =
        q == Quantity::Mean
            ? std::vector<TableRow>{
                  {Gaussian{1.0, 4.0}, 0, 0, 0.015, 0},
                  {Exponential{2.0}, 0, 0, 0.069, 0},
                  {Gamma{1.0, 2.0}, 0, 0, 0.452, 0},
                  {Weibull{1.0, 2.0}, 0, 0, 0.005, 0},
                  {Rayleigh{1.0}, 0, 0, 0.097, 0},
                  {Beta{3.0, 4.0}, 0, 0, 0.063, 0},
                  {Binomial{3, 0.3}, 0, 0, 0.457, 0},
                  {Poisson{2.0}, 0, 0, 0.270, 0},
                  {Geometric{0.5}, 0, 0, 1.251, 0},
                  {NegativeBinomial{4.0, 0.67}, 0, 0, 0.668, 0},
              }
            : std::vector<TableRow>{
                  {Gaussian{1.0, 4.0}, 0, 0, 0.029, 0},
                  {Exponential{2.0}, 0, 49.057, 0.249, 0},
                  {Gamma{1.0, 2.0}, 0, 64.0, 1.889, 0},
                  {Weibull{1.0, 2.0}, 0, 15.003, 0.310, 0},
                  {Rayleigh{1.0}, 0, 16.815, 0.381, 0},
                  {Beta{3.0, 4.0}, 0, 2.307, 0.613, 0},
                  {Binomial{3, 0.3}, 0, 16.380, 0.359, 0},
                  {Poisson{2.0}, 0, 25.946, 1.061, 0},
                  {Geometric{0.5}, 0, 67.662, 1.036, 0},
                  {NegativeBinomial{4.0, 0.67}, 0, 43.224, 2.356, 0},
              };

    const char* qn = to_string(q);
    for (size_t i = 0; i < rows.size(); ++i) {
        const TableRow& row = rows[i];
        const std::string label = label_of(row.dist);
        const Transform f = make_transform("quadratic", {{"alpha", 3.0}, {"beta", 2.0}}, 1);
        const MeanVar truth = quadratic_truth(moments_of(row.dist), 3.0, 2.0);
        const double truth_q = q == Quantity::Mean ? truth.mean : truth.variance;

        const ScalarEstimates est = scalar_scheme_estimates(row.dist, f);
        const double genut_q = q == Quantity::Mean ? est.genut.mean : est.genut.variance;
        const double ut_q = q == Quantity::Mean ? est.ut.mean : est.ut.variance;

        // Both schemes reproduce the quadratic mean exactly; only the UT
        // variance drifts for skewed inputs.
        b.expect_max(label, "genut", qn, pct(genut_q, truth_q), tol::kGenutZeroPct, row.genut);
        b.set_truth_on_last(truth_q);
        if (q == Quantity::Mean) {
            b.expect_max(label, "ut", qn, pct(ut_q, truth_q), tol::kGenutZeroPct, row.ut);
        } else {
            b.expect(label, "ut", qn, pct(ut_q, truth_q), row.ut, tol::kTablePct);
        }
        b.set_truth_on_last(truth_q);

        const ScalarMcEstimate mc =
            scalar_mc_estimate(row.dist, f, 100000, derive_stream_seed(seed, i));
        const double mc_q = q == Quantity::Mean ? mc.stat.mean : mc.stat.variance;
        const double se = q == Quantity::Mean ? mc.mean_se : mc.var_se;
        const double band_pct = 100.0 * tol::kZ99 * se / std::abs(truth_q);
        b.expect_band(label, "mc", qn, pct(mc_q, truth_q), band_pct, row.mc);
        b.set_truth_on_last(truth_q);

        b.note(label, "hosput-ref", qn, std::nullopt, row.hosput);
    }
}

inline void run_trig_table(ReportBuilder& b, Quantity q, std::uint64_t seed) {
    const std::vector<TableRow> rows =
        q == Quantity::Mean
            ? std::vector<TableRow>{
                  {Gaussian{1.57, 0.1}, 0.001, 0.001, 0.012, 0.001},
                  {Exponential{2.0}, 0.219, 5.788, 0.110, 0.219},
                  {Gamma{0.5, 0.5}, 0.312, 6.964, 0.050, 0.312},
                  {Weibull{1.0, 2.0}, 0.017, 0.831, 0.029, 0.017},
                  {Rayleigh{1.0}, 0.049, 0.912, 0.007, 0.049},
                  {Beta{3.0, 4.0}, 0.0, 0.038, 0.037, 0.0},
                  {Binomial{3, 0.3}, 0.158, 4.814, 0.046, 0.158},
                  {Poisson{0.1}, 0.275, 18.305, 0.531, 0.275},
                  {Geometric{0.7}, 2.416, 32.906, 0.138, 2.416},
                  {NegativeBinomial{0.4, 0.67}, 0.176, 44.172, 0.383, 0.176},
              }
            : std::vector<TableRow>{
                  {Gaussian{1.57, 0.1}, 5.026, 5.026, 0.444, 5.026},
                  {Exponential{2.0}, 23.499, 72.557, 0.213, 23.499},
                  {Gamma{0.5, 0.5}, 20.749, 61.391, 0.372, 20.749},
                  {Weibull{1.0, 2.0}, 4.862, 31.760, 0.043, 4.862},
                  {Rayleigh{1.0}, 12.158, 50.678, 0.531, 12.158},
                  {Beta{3.0, 4.0}, 0.031, 0.940, 0.225, 0.031},
                  {Binomial{3, 0.3}, 11.033, 24.806, 0.060, 11.033},
                  {Poisson{0.1}, 6.646, 45.895, 0.461, 6.646},
                  {Geometric{0.7}, 12.074, 87.637, 0.070, 12.074},
                  {NegativeBinomial{0.4, 0.67}, 39.068, 135.783, 0.366, 39.068},
              };

    const char* qn = to_string(q);
    const Transform f = make_transform("sin", {}, 1);
    for (size_t i = 0; i < rows.size(); ++i) {
        const TableRow& row = rows[i];
        const std::string label = label_of(row.dist);

        MeanVar truth;
        if (has_char_fn(row.dist)) {
            truth = sin_truth(row.dist);
        } else {
            // No closed-form trigonometric moments; use a large seeded run.
            const McTruthResult t =
                mc_truth({row.dist}, f, 10000000, derive_stream_seed(seed, 50 + i));
            truth = {t.result.mean[0], t.result.covariance(0, 0)};
        }
        const double truth_q = q == Quantity::Mean ? truth.mean : truth.variance;

        const ScalarEstimates est = scalar_scheme_estimates(row.dist, f);
        const double genut_q = q == Quantity::Mean ? est.genut.mean : est.genut.variance;
        const double ut_q = q == Quantity::Mean ? est.ut.mean : est.ut.variance;
        b.expect(label, "genut", qn, pct(genut_q, truth_q), row.genut, tol::kTablePct);
        b.set_truth_on_last(truth_q);
        b.expect(label, "ut", qn, pct(ut_q, truth_q), row.ut, tol::kTablePct);
        b.set_truth_on_last(truth_q);

        const ScalarMcEstimate mc =
            scalar_mc_estimate(row.dist, f, 100000, derive_stream_seed(seed, i));
        const double mc_q = q == Quantity::Mean ? mc.stat.mean : mc.stat.variance;
        const double se = q == Quantity::Mean ? mc.mean_se : mc.var_se;
        const double band_pct = 100.0 * tol::kZ99 * se / std::abs(truth_q);
        b.expect_band(label, "mc", qn, pct(mc_q, truth_q), band_pct, row.mc);
        b.set_truth_on_last(truth_q);

        b.note(label, "hosput-ref", qn, std::nullopt, row.hosput);
    }
}

inline MomentSpec example_poisson_pair_spec() {
    return independent_joint({Poisson{1.5}, Poisson{1.0}});
}

inline void run_example1(ReportBuilder& b) {
    const MomentSpec spec = example_poisson_pair_spec();
    const SigmaPointSet set = generate(spec);
    const std::string dist = "P(1.5),P(1)";

    Matrix chi_ref(2, 5);
    chi_ref << 1.5, -0.1794, 1.5, 4.1794, 1.5,
               1.0, 1.0, -0.3028, 1.0, 3.3028;
    Vector w_ref(5), u_ref(2), v_ref(2);
    w_ref << 0.3333, 0.2049, 0.2129, 0.1284, 0.1204;
    u_ref << 1.3713, 1.3028;
    v_ref << 2.1878, 2.3028;

    expect_point_set(b, dist, "genut", set, chi_ref, w_ref, u_ref, v_ref);
    expect_sample_stats(b, dist, "genut", set, spec, true, true);
}

inline void run_example2(ReportBuilder& b) {
    const MomentSpec spec = example_poisson_pair_spec();
    const SigmaPointSet base = generate(spec);
    const SigmaPointSet set = constrain(spec, base, BoxConstraint::nonnegative(2, 0.9));
    const std::string dist = "P(1.5),P(1)";
    const std::string scheme = "genut-constrained";

    Matrix chi_ref(2, 5);
    chi_ref << 1.5, 0.15, 1.5, 3.85, 1.5,
               1.0, 1.0, 0.1, 1.0, 2.9;
    Vector w_ref(5), u_ref(2), v_ref(2);
    w_ref << -0.0576, 0.3003, 0.3968, 0.1725, 0.188;
    u_ref << 1.1023, 0.9;
    v_ref << 1.9188, 1.9;

    expect_point_set(b, dist, scheme, set, chi_ref, w_ref, u_ref, v_ref);
    // Only u was redefined here, so the skewness diagonal survives.
    expect_sample_stats(b, dist, scheme, set, spec, true, false);

    b.expect_max(dist, scheme, "bound_violation", std::max(0.0, -set.points.minCoeff()), 0.0);

    const Vector mean = sample_mean(set.points, set.weights);
    const Vector kurt = sample_kurt_diag(set.points, set.weights, mean);
    b.expect(dist, scheme, "kurt_hat[0]", kurt[0], 6.2587, tol::kPrinted);
    b.expect(dist, scheme, "kurt_hat[1]", kurt[1], 2.7100, tol::kPrinted);
}

inline void run_scalar_example(ReportBuilder& b) {
    MomentSpec spec;
    spec.mean = Vector::Constant(1, 0.1);
    spec.covariance = Matrix::Constant(1, 1, 0.2);
    spec.skew_diag = Vector::Constant(1, -0.5);
    spec.kurt_diag = Vector::Constant(1, 1.3);
    const SigmaPointSet set = generate(spec);
    const std::string dist = "prescribed(0.1,0.2,-0.5,1.3)";

    b.expect(dist, "genut", "u", set.u[0], 5.8055, tol::kPrinted);
    b.expect(dist, "genut", "v", set.v[0], 0.2153, tol::kPrinted);
    b.expect(dist, "genut", "w[0]", set.weights[0], 0.2, tol::kPrinted);
    b.expect(dist, "genut", "w[1]", set.weights[1], 0.0286, tol::kPrinted);
    b.expect(dist, "genut", "w[2]", set.weights[2], 0.7714, tol::kPrinted);
    expect_sample_stats(b, dist, "genut", set, spec, true, true);
}

inline void run_case2(ReportBuilder& b, std::uint64_t seed) {
    const std::vector<DistributionSpec> ds = {Poisson{0.1}, Rayleigh{1.0}};
    const std::string dist = "P(0.1),R(1)";
    const Transform f = make_transform("sincos", {}, 2);
    const McTruthResult truth = mc_truth(ds, f, 10000000, seed);

    const MomentSpec spec = independent_joint(ds);
    const TransformResult g = propagate(generate(spec), f);
    const TransformResult u = propagate(
        ut_sigma_points(spec.mean, spec.covariance, default_kappa(spec.dim())), f);

    const PercentageError g_mean = percentage_error(g.mean, truth.result.mean);
    const PercentageError g_cov = percentage_error(g.covariance, truth.result.covariance);
    const PercentageError u_mean = percentage_error(u.mean, truth.result.mean);
    const PercentageError u_cov = percentage_error(u.covariance, truth.result.covariance);

    const double genut_mean_ref[2] = {24.7, 0.05};
    const double genut_cov_ref[2][2] = {{24.68, 8.77}, {8.77, 20.13}};
    const double ut_mean_ref[2] = {63.87, 1.43};
    const double ut_cov_ref[2][2] = {{145.51, 68.47}, {68.47, 83.16}};
    const double hosput_mean_ref[2] = {51.64, 1.23};
    const double hosput_cov_ref[2][2] = {{126.93, 28.51}, {28.51, 71.72}};

    for (Eigen::Index i = 0; i < 2; ++i) {
        b.expect(dist, "genut", idx1("mean_err", i), g_mean.values(i, 0), genut_mean_ref[i],
                 tol::kCase2Pct);
        b.set_truth_on_last(truth.result.mean[i]);
    }
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = i; j < 2; ++j) {
            b.expect(dist, "genut", idx2("cov_err", i, j), g_cov.values(i, j),
                     genut_cov_ref[i][j], tol::kCase2Pct);
            b.set_truth_on_last(truth.result.covariance(i, j));
        }
    }
    for (Eigen::Index i = 0; i < 2; ++i) {
        b.note(dist, "ut", idx1("mean_err", i), u_mean.values(i, 0), ut_mean_ref[i]);
        b.note(dist, "hosput-ref", idx1("mean_err", i), std::nullopt, hosput_mean_ref[i]);
    }
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = i; j < 2; ++j) {
            b.note(dist, "ut", idx2("cov_err", i, j), u_cov.values(i, j), ut_cov_ref[i][j]);
            b.note(dist, "hosput-ref", idx2("cov_err", i, j), std::nullopt,
                   hosput_cov_ref[i][j]);
        }
    }
}

inline void run_case3(ReportBuilder& b, std::uint64_t seed) {
    const std::vector<DistributionSpec> ds = {Poisson{10.0}, Poisson{2.0}};
    const std::string dist = "P(10),P(2)";
    SIRState st;
    st.infected = 10.0;
    st.recovered = 2.0;
    st.beta = 1.5;
    st.gamma = 0.3;
    st.population = 100.0;
    const Transform f = make_transform(
        "sir", {{"beta", st.beta}, {"gamma", st.gamma}, {"N", st.population},
                {"I", st.infected}, {"R", st.recovered}},
        2);

    // The map is quadratic, so the truth is available in closed form from the
    // first four moments of the coordinates.
    const SirTruth truth =
        sir_analytic_truth(st, moments_of(ds[0]), moments_of(ds[1]));
    const Vector truth_mean = truth.mean;
    const Matrix truth_cov = truth.cov;

    const MomentSpec spec = independent_joint(ds);
    const TransformResult g = propagate(generate(spec), f);
    const TransformResult u = propagate(
        ut_sigma_points(spec.mean, spec.covariance, default_kappa(spec.dim())), f);

    const PercentageError g_mean = percentage_error(g.mean, truth_mean);
    const PercentageError g_cov = percentage_error(g.covariance, truth_cov);
    const PercentageError u_mean = percentage_error(u.mean, truth_mean);
    const PercentageError u_cov = percentage_error(u.covariance, truth_cov);

    const double genut_cov_ref[2][2] = {{0.03, 0.0}, {0.0, 0.0}};
    const double ut_cov_ref[2][2] = {{2.56, 1.3}, {1.3, 0.0}};
    const double hosput_cov_ref[2][2] = {{0.3, 0.13}, {0.13, 0.0}};

    for (Eigen::Index i = 0; i < 2; ++i) {
        b.expect_max(dist, "genut", idx1("mean_err", i), g_mean.values(i, 0),
                     tol::kCase3MeanPct, 0.0);
        b.set_truth_on_last(truth_mean[i]);
        b.expect_max(dist, "ut", idx1("mean_err", i), u_mean.values(i, 0), tol::kCase3MeanPct,
                     0.0);
        b.set_truth_on_last(truth_mean[i]);
    }
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = i; j < 2; ++j) {
            b.expect(dist, "genut", idx2("cov_err", i, j), g_cov.values(i, j),
                     genut_cov_ref[i][j], tol::kCase3GenutCovPct);
            b.set_truth_on_last(truth_cov(i, j));
            b.expect(dist, "ut", idx2("cov_err", i, j), u_cov.values(i, j), ut_cov_ref[i][j],
                     tol::kCase3UtCovPct);
            b.set_truth_on_last(truth_cov(i, j));
            b.note(dist, "hosput-ref", idx2("cov_err", i, j), std::nullopt,
                   hosput_cov_ref[i][j]);
        }
    }

    // Independent cross-check of the closed-form truth with a seeded run.
    const McTruthResult mc = mc_truth(ds, f, 10000000, seed);
    for (Eigen::Index i = 0; i < 2; ++i) {
        const double band = 100.0 * tol::kZ99 * mc.mean_se[i] / std::abs(truth_mean[i]);
        b.expect_band(dist, "mc", idx1("mean_err", i),
                      pct(mc.result.mean[i], truth_mean[i]), band, std::nullopt);
        b.set_truth_on_last(truth_mean[i]);
    }
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = i; j < 2; ++j) {
            const double band =
                100.0 * tol::kZ99 * mc.cov_se(i, j) / std::abs(truth_cov(i, j));
            b.expect_band(dist, "mc", idx2("cov_err", i, j),
                          pct(mc.result.covariance(i, j), truth_cov(i, j)), band,
                          std::nullopt);
            b.set_truth_on_last(truth_cov(i, j));
        }
    }
}

}  // namespace detail

/// Runs one reproduction selector. Deterministic given (target, seed).
inline ReproReport reproduce(ReproTarget target, std::uint64_t seed = 42) {
    detail::ReportBuilder b(target, seed);
    switch (target) {
        case ReproTarget::Example1: detail::run_example1(b); break;
        case ReproTarget::Example2: detail::run_example2(b); break;
        case ReproTarget::ScalarExample: detail::run_scalar_example(b); break;
        case ReproTarget::Table2: detail::run_quadratic_table(b, Quantity::Mean, seed); break;
        case ReproTarget::Table3:
            detail::run_quadratic_table(b, Quantity::Covariance, seed);
            break;
        case ReproTarget::Table4: detail::run_trig_table(b, Quantity::Mean, seed); break;
        case ReproTarget::Table5: detail::run_trig_table(b, Quantity::Covariance, seed); break;
        case ReproTarget::Case2: detail::run_case2(b, seed); break;
        case ReproTarget::Case3: detail::run_case3(b, seed); break;
    }
    return b.take();
}

inline json tolerances_json() {
    return {{"printed", tol::kPrinted},
            {"exact_stat", tol::kExactStat},
            {"table_pct", tol::kTablePct},
            {"genut_zero_pct", tol::kGenutZeroPct},
            {"case2_pct", tol::kCase2Pct},
            {"case3_genut_cov_pct", tol::kCase3GenutCovPct},
            {"case3_ut_cov_pct", tol::kCase3UtCovPct},
            {"case3_mean_pct", tol::kCase3MeanPct},
            {"clt_z99", tol::kZ99}};
}

inline json to_json(const ReproReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json jr = {{"distribution", r.distribution},
                   {"scheme", r.scheme},
                   {"quantity", r.quantity},
                   {"tolerance", r.tolerance},
                   {"gated", r.gated},
                   {"pass", r.pass}};
        if (r.value) jr["value"] = *r.value;
        if (r.published) jr["paper_value"] = *r.published;
        if (r.truth) jr["truth"] = *r.truth;
        if (r.band_pct) jr["clt_band_pct"] = *r.band_pct;
        rows.push_back(std::move(jr));
    }
    return {{"selector", rep.selector},
            {"seed", rep.seed},
            {"generator_id", rep.generator_id},
            {"tolerances", tolerances_json()},
            {"all_pass", rep.all_pass()},
            {"rows", std::move(rows)}};
}

namespace detail {

inline std::string csv_num(std::optional<double> x) {
    if (!x) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", *x);
    return buf;
}

/// Quotes a field when it contains a comma, quote or newline.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

/// Writes <dir>/<selector>.csv with columns
/// distribution,scheme,quantity,error_pct,paper_value,pass.
inline std::filesystem::path write_csv(const ReproReport& rep,
                                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / (rep.selector + ".csv");
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << "distribution,scheme,quantity,error_pct,paper_value,pass\n";
    for (const auto& r : rep.rows) {
        out << detail::csv_field(r.distribution) << ',' << detail::csv_field(r.scheme) << ','
            << detail::csv_field(r.quantity) << ',' << detail::csv_num(r.value) << ','
            << detail::csv_num(r.published) << ',' << (r.pass ? "true" : "false") << '\n';
    }
    if (!out.good()) throw Error("write failed: " + path.string());
    return path;
}

/// Writes <dir>/<selector>.json, the full-precision mirror of the CSV.
inline std::filesystem::path write_json(const ReproReport& rep,
                                        const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / (rep.selector + ".json");
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << to_json(rep).dump(2) << '\n';
    if (!out.good()) throw Error("write failed: " + path.string());
    return path;
}

}  // namespace genut
