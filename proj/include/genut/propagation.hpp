#pragma once

#include <functional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "genut/errors.hpp"
#include "genut/linalg.hpp"
#include "genut/sigma_points.hpp"

namespace genut {

/// A deterministic vector-valued transformation with explicit arity.
struct Transform {
    Eigen::Index in_dim = 0;
    Eigen::Index out_dim = 0;
    std::function<Vector(const Vector&)> fn;

    Vector operator()(const Vector& x) const { return fn(x); }
};

/// Weighted sample statistics of a transformed point set.
struct TransformResult {
    Vector mean;
    Matrix covariance;  ///< symmetrized
    Vector skew_diag;
    Vector kurt_diag;
    Matrix transformed_points;   ///< m x (2n+1)
    double cov_min_eigenvalue = 0.0;  ///< may dip below zero when w0 < 0
};

/// Applies f to every sigma point; column i of the result is f(points.col(i)).
inline Matrix transform_points(const SigmaPointSet& s, const Transform& f) {
    if (f.in_dim != s.dim()) {
        throw Error("transform_points: transform expects dimension " +
                    std::to_string(f.in_dim) + ", got " + std::to_string(s.dim()));
    }
    Matrix out(f.out_dim, s.count());
    for (Eigen::Index i = 0; i < s.count(); ++i) {
        Vector y = f(s.points.col(i));
        if (y.size() != f.out_dim) {
            throw EvaluationError(i, "transform_points: output dimension mismatch at point " +
                                         std::to_string(i));
        }
        if (!y.allFinite()) {
            throw EvaluationError(i, "transform_points: non-finite output at point " +
                                         std::to_string(i));
        }
        out.col(i) = std::move(y);
    }
    return out;
}

inline Vector sample_mean(const Matrix& points, const Vector& weights) {
    if (points.cols() != weights.size()) throw Error("sample_mean: shape mismatch");
    return points * weights;
}

inline Matrix sample_covariance(const Matrix& points, const Vector& weights,
                                const Vector& mean) {
    if (points.cols() != weights.size() || points.rows() != mean.size())
        throw Error("sample_covariance: shape mismatch");
    Matrix cov = Matrix::Zero(points.rows(), points.rows());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        const Vector d = points.col(i) - mean;
        cov.noalias() += weights[i] * d * d.transpose();
    }
    return 0.5 * (cov + cov.transpose());
}

inline Vector sample_skew_diag(const Matrix& points, const Vector& weights,
                               const Vector& mean) {
    if (points.cols() != weights.size() || points.rows() != mean.size())
        throw Error("sample_skew_diag: shape mismatch");
    Vector out = Vector::Zero(points.rows());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        const Vector d = points.col(i) - mean;
        out += weights[i] * d.array().cube().matrix();
    }
    return out;
}

inline Vector sample_kurt_diag(const Matrix& points, const Vector& weights,
                               const Vector& mean) {
    if (points.cols() != weights.size() || points.rows() != mean.size())
        throw Error("sample_kurt_diag: shape mismatch");
    Vector out = Vector::Zero(points.rows());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        const Eigen::ArrayXd d = (points.col(i) - mean).array();
        out += weights[i] * (d * d * d * d).matrix();
    }
    return out;
}

/// Transforms the sigma points and computes the weighted sample statistics of
/// the images. All sums run over the full index range in fixed order.
inline TransformResult propagate(const SigmaPointSet& s, const Transform& f) {
    TransformResult r;
    r.transformed_points = transform_points(s, f);
    r.mean = sample_mean(r.transformed_points, s.weights);
    r.covariance = sample_covariance(r.transformed_points, s.weights, r.mean);
    r.skew_diag = sample_skew_diag(r.transformed_points, s.weights, r.mean);
    r.kurt_diag = sample_kurt_diag(r.transformed_points, s.weights, r.mean);
    Eigen::SelfAdjointEigenSolver<Matrix> es(r.covariance, Eigen::EigenvaluesOnly);
    r.cov_min_eigenvalue = es.eigenvalues().minCoeff();
    return r;
}

}  // namespace genut
