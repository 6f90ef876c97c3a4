#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "genut/analytic.hpp"
#include "genut/moments.hpp"
#include "genut/propagation.hpp"
#include "genut/sigma_points.hpp"
#include "genut/transforms.hpp"
#include "genut/unscented.hpp"
#include "oracles.hpp"

using genut::Matrix;
using genut::MomentSpec;
using genut::SigmaPointSet;
using genut::Transform;
using genut::TransformResult;
using genut::Vector;

TEST(TransformPoints, IdentityLeavesPointsUnchanged) {
    const MomentSpec spec = genut::independent_joint({genut::Poisson{1.5}, genut::Poisson{1.0}});
    const SigmaPointSet set = genut::generate(spec);
    const Matrix out = genut::transform_points(set, genut::make_transform("identity", {}, 2));
    EXPECT_LT((out - set.points).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TransformPoints, QuadraticPerPoint) {
    const MomentSpec spec = genut::independent_joint({genut::Poisson{2.0}});
    const SigmaPointSet set = genut::generate(spec);
    const Transform f = genut::make_transform("quadratic", {{"alpha", 3.0}, {"beta", 2.0}}, 1);
    const Matrix out = genut::transform_points(set, f);
    for (Eigen::Index i = 0; i < set.count(); ++i) {
        const double x = set.points(0, i);
        EXPECT_NEAR(out(0, i), 3.0 * x + 2.0 * x * x, 1e-12);
    }
}

TEST(TransformPoints, ArityMismatchAndNonFiniteDetected) {
    const MomentSpec spec = genut::independent_joint({genut::Poisson{2.0}});
    const SigmaPointSet set = genut::generate(spec);
    EXPECT_THROW(genut::transform_points(set, genut::make_transform("sincos", {}, 2)),
                 genut::Error);
    Transform bad{1, 1, [](const Vector& x) -> Vector {
                      Vector y(1);
                      y[0] = std::log(x[0]);  // negative point -> nan
                      return y;
                  }};
    try {
        genut::transform_points(set, bad);
        FAIL() << "expected EvaluationError";
    } catch (const genut::EvaluationError& e) {
        EXPECT_GE(e.point_index(), 0);
    }
}

TEST(SampleMean, ConstantPointsAndWeights) {
    Matrix pts = Matrix::Constant(2, 5, 3.5);
    Vector w(5);
    w << 0.2, 0.2, 0.2, 0.2, 0.2;
    const Vector m = genut::sample_mean(pts, w);
    EXPECT_NEAR(m[0], 3.5, 1e-15);
    EXPECT_NEAR(m[1], 3.5, 1e-15);
    const Matrix c = genut::sample_covariance(pts, w, m);
    EXPECT_LT(c.cwiseAbs().maxCoeff(), 1e-28);
}

TEST(SampleStats, UntransformedExampleValues) {
    const MomentSpec spec = genut::independent_joint({genut::Poisson{1.5}, genut::Poisson{1.0}});
    const SigmaPointSet set = genut::generate(spec);
    const Vector m = genut::sample_mean(set.points, set.weights);
    EXPECT_NEAR(m[0], 1.5, 1e-12);
    EXPECT_NEAR(m[1], 1.0, 1e-12);
    const Matrix c = genut::sample_covariance(set.points, set.weights, m);
    EXPECT_NEAR(c(0, 0), 1.5, 1e-12);
    EXPECT_NEAR(c(1, 1), 1.0, 1e-12);
    EXPECT_NEAR(c(0, 1), 0.0, 1e-12);
    const Vector s = genut::sample_skew_diag(set.points, set.weights, m);
    EXPECT_NEAR(s[0], 1.5, 1e-12);
    EXPECT_NEAR(s[1], 1.0, 1e-12);
    const Vector k = genut::sample_kurt_diag(set.points, set.weights, m);
    EXPECT_NEAR(k[0], 8.25, 1e-10);
    EXPECT_NEAR(k[1], 4.0, 1e-10);
}

TEST(SampleStats, SymmetricPointsHaveZeroSkew) {
    const SigmaPointSet set =
        genut::ut_sigma_points(Vector::Zero(3), Matrix::Identity(3, 3), 0.0);
    const Vector m = genut::sample_mean(set.points, set.weights);
    const Vector s = genut::sample_skew_diag(set.points, set.weights, m);
    EXPECT_LT(s.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Propagate, QuadraticPoissonMeanIsExact) {
    // E[3x + 2x^2] = 3*2 + 2*(4+2) = 18 for a Poisson with rate 2.
    const MomentSpec spec = genut::independent_joint({genut::Poisson{2.0}});
    const Transform f = genut::make_transform("quadratic", {}, 1);
    const TransformResult r = genut::propagate(genut::generate(spec), f);
    EXPECT_NEAR(r.mean[0], 18.0, 1e-12);

    const genut::MeanVar truth = genut::quadratic_truth(genut::moments_of(genut::Poisson{2.0}),
                                                        3.0, 2.0);
    EXPECT_NEAR(truth.mean, 18.0, 1e-12);
    EXPECT_NEAR(r.covariance(0, 0), truth.variance, truth.variance * 1e-10);
}

TEST(Propagate, QuadraticVarianceMatchesRawMomentOracle) {
    // Independent oracle: assemble Var(alpha x + beta x^2) from brute-force
    // raw moments instead of the catalog's closed forms.
    const genut::DistributionSpec d = genut::Gamma{1.0, 2.0};
    const double alpha = 3.0, beta = 2.0;
    const double m1 = oracles::expectation(d, [](double x) { return x; });
    const double m2 = oracles::expectation(d, [](double x) { return x * x; });
    const double m3 = oracles::expectation(d, [](double x) { return x * x * x; });
    const double m4 = oracles::expectation(d, [](double x) { return x * x * x * x; });
    const double mean = alpha * m1 + beta * m2;
    const double var =
        alpha * alpha * m2 + 2 * alpha * beta * m3 + beta * beta * m4 - mean * mean;

    const MomentSpec spec = genut::independent_joint({d});
    const TransformResult r =
        genut::propagate(genut::generate(spec), genut::make_transform("quadratic", {}, 1));
    EXPECT_LT(oracles::rel_err(r.mean[0], mean), 1e-10);
    EXPECT_LT(oracles::rel_err(r.covariance(0, 0), var), 1e-10);
}

TEST(Propagate, QuadraticExactnessAcrossCatalog) {
    // Kurtosis-matched points reproduce mean and variance of quadratics for
    // every catalog family; the symmetric transform reproduces only the mean.
    const std::vector<genut::DistributionSpec> grid = {
        genut::Gaussian{1.0, 4.0},  genut::Exponential{2.0},  genut::Gamma{1.0, 2.0},
        genut::Weibull{1.0, 2.0},   genut::Rayleigh{1.0},     genut::Beta{3.0, 4.0},
        genut::Binomial{3, 0.3},    genut::Poisson{2.0},      genut::Geometric{0.5},
        genut::NegativeBinomial{4.0, 0.67}};
    const Transform f = genut::make_transform("quadratic", {}, 1);
    for (const auto& d : grid) {
        const genut::MeanVar truth = genut::quadratic_truth(genut::moments_of(d), 3.0, 2.0);
        const MomentSpec spec = genut::independent_joint({d});
        const TransformResult g = genut::propagate(genut::generate(spec), f);
        EXPECT_LT(oracles::rel_err(g.mean[0], truth.mean), 1e-10) << genut::label_of(d);
        EXPECT_LT(oracles::rel_err(g.covariance(0, 0), truth.variance), 1e-10)
            << genut::label_of(d);

        const TransformResult u = genut::propagate(
            genut::ut_sigma_points(spec.mean, spec.covariance, genut::default_kappa(1)), f);
        EXPECT_LT(oracles::rel_err(u.mean[0], truth.mean), 1e-10) << genut::label_of(d);
        const genut::UnivariateMoments m = genut::moments_of(d);
        if (std::abs(m.skewness) > 1e-9) {
            EXPECT_GT(oracles::rel_err(u.covariance(0, 0), truth.variance), 1e-4)
                << genut::label_of(d);
        }
    }
}

TEST(Propagate, AffineExactness) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + int(rng() % 6);
        const int m = 1 + int(rng() % 6);
        const MomentSpec spec = oracles::random_dense_spec(rng, n);
        Matrix a(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = unif(rng);
        Vector b(m);
        for (int i = 0; i < m; ++i) b[i] = unif(rng);
        Transform f{n, m, [&a, &b](const Vector& x) -> Vector { return a * x + b; }};

        for (const SigmaPointSet& set :
             {genut::generate(spec),
              genut::ut_sigma_points(spec.mean, spec.covariance, genut::default_kappa(n))}) {
            const TransformResult r = genut::propagate(set, f);
            EXPECT_LT(oracles::rel_err(r.mean, Vector(a * spec.mean + b)), 1e-12);
            EXPECT_LT(oracles::rel_err(r.covariance, Matrix(a * spec.covariance * a.transpose())),
                      1e-12);
        }
    }
}

TEST(Propagate, ReportsEigenvalueFloor) {
    const MomentSpec spec = genut::independent_joint({genut::Poisson{1.5}});
    const TransformResult r =
        genut::propagate(genut::generate(spec), genut::make_transform("identity", {}, 1));
    EXPECT_NEAR(r.cov_min_eigenvalue, 1.5, 1e-10);
    EXPECT_TRUE(r.covariance.isApprox(r.covariance.transpose()));
}

TEST(Propagate, SirMapOnPoissonPoints) {
    const MomentSpec spec = genut::independent_joint({genut::Poisson{10.0}, genut::Poisson{2.0}});
    const Transform f = genut::make_transform(
        "sir", {{"beta", 1.5}, {"gamma", 0.3}, {"N", 100.0}, {"I", 10.0}, {"R", 2.0}}, 2);
    const TransformResult r = genut::propagate(genut::generate(spec), f);
    // Quadratic map: the sample mean is exact.
    EXPECT_NEAR(r.mean[0], 23.05, 1e-10);
    EXPECT_NEAR(r.mean[1], 5.0, 1e-12);
}
