#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "genut/errors.hpp"

namespace genut {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

inline void require_finite(const Eigen::Ref<const Matrix>& m, const char* name) {
    if (!m.allFinite()) {
        throw Error(std::string(name) + " contains non-finite entries");
    }
}

}  // namespace detail

enum class SqrtMethod {
    Cholesky,   ///< lower-triangular factor L with L*L^T = P
    Symmetric,  ///< symmetric positive definite square root via eigendecomposition
};

/// Square root of a symmetric positive definite matrix, i.e. a matrix S with
/// S*S^T = P. The Cholesky factor is the default; sigma point locations (but
/// not the matched moments) depend on which factor is chosen.
///
/// Input asymmetry beyond 1e-12 relative is rejected; smaller asymmetry is
/// removed by symmetrizing (P + P^T)/2 before factorization.
inline Matrix matrix_sqrt(const Matrix& P, SqrtMethod method = SqrtMethod::Cholesky) {
    if (P.rows() != P.cols()) {
        throw Error("matrix_sqrt: matrix must be square");
    }
    detail::require_finite(P, "matrix_sqrt: input");

    const double scale = P.cwiseAbs().maxCoeff();
    const double asym = (P - P.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, scale)) {
        throw Error("matrix_sqrt: matrix is not symmetric (relative asymmetry " +
                    std::to_string(asym / std::max(1.0, scale)) + ")");
    }
    const Matrix S = 0.5 * (P + P.transpose());
    const Eigen::Index n = S.rows();

    if (method == SqrtMethod::Symmetric) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(S);
        Eigen::Index worst = 0;
        if (es.eigenvalues().minCoeff(&worst) <= 0.0) {
            throw FactorizationError(worst, "matrix_sqrt: non-positive eigenvalue at index " +
                                                std::to_string(worst));
        }
        return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
               es.eigenvectors().transpose();
    }

    // Plain lower Cholesky, kept explicit so the failing pivot can be reported.
    Matrix L = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = S(j, j) - L.row(j).head(j).squaredNorm();
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw FactorizationError(j, "matrix_sqrt: non-positive pivot " + std::to_string(d) +
                                            " at index " + std::to_string(j));
        }
        L(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            L(i, j) = (S(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
        }
    }
    return L;
}

/// Element-wise k-th power. Negative k is the reciprocal of the positive power
/// and requires all entries nonzero.
inline Vector hadamard_pow(const Vector& x, int k) {
    if (k == 0) {
        throw Error("hadamard_pow: exponent must be nonzero");
    }
    const int p = k > 0 ? k : -k;
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (k < 0 && x[i] == 0.0) {
            throw DivisionByZeroError(i, "hadamard_pow: zero entry at index " +
                                             std::to_string(i) + " with negative exponent");
        }
        const double v = std::pow(x[i], p);
        out[i] = k > 0 ? v : 1.0 / v;
    }
    return out;
}

/// Element-wise quotient a / b.
inline Vector hadamard_div(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error("hadamard_div: size mismatch");
    }
    Vector out(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (b[i] == 0.0) {
            throw DivisionByZeroError(i, "hadamard_div: zero divisor at index " +
                                             std::to_string(i));
        }
        out[i] = a[i] / b[i];
    }
    return out;
}

}  // namespace genut
