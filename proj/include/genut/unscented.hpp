#pragma once

#include <cmath>
#include <string>

#include "genut/errors.hpp"
#include "genut/linalg.hpp"
#include "genut/sigma_points.hpp"

namespace genut {

/// Spread parameter for the symmetric unscented transform that matches the
/// fourth moment of a scalar Gaussian (n + kappa = 3).
inline double default_kappa(Eigen::Index n) { return 3.0 - double(n); }

/// Classic symmetric unscented transform sigma points:
///   chi[0]   = mean,                              w0      = kappa/(n+kappa)
///   chi[i]   = mean + col_i(sqrt((n+kappa) P)),   w_i     = 1/(2(n+kappa))
///   chi[i+n] = mean - col_i(sqrt((n+kappa) P)),   w_{i+n} = 1/(2(n+kappa))
///
/// The set matches the mean and covariance of any input; all odd sample
/// moments vanish by symmetry. w0 is negative for n + kappa < n, which is
/// accepted.
inline SigmaPointSet ut_sigma_points(const Vector& mean, const Matrix& P, double kappa,
                                     SqrtMethod method = SqrtMethod::Cholesky) {
    const Eigen::Index n = mean.size();
    if (P.rows() != n || P.cols() != n) throw Error("ut_sigma_points: shape mismatch");
    const double nk = double(n) + kappa;
    if (!(nk > 0.0)) {
        throw ParameterDomainError("kappa", "ut_sigma_points: n + kappa must be positive");
    }
    const Matrix L = std::sqrt(nk) * matrix_sqrt(P, method);

    SigmaPointSet set;
    set.points.resize(n, 2 * n + 1);
    set.weights.resize(2 * n + 1);
    set.points.col(0) = mean;
    set.weights[0] = kappa / nk;
    for (Eigen::Index i = 0; i < n; ++i) {
        set.points.col(1 + i) = mean + L.col(i);
        set.points.col(1 + n + i) = mean - L.col(i);
        set.weights[1 + i] = 0.5 / nk;
        set.weights[1 + n + i] = 0.5 / nk;
    }
    set.u = Vector::Constant(n, std::sqrt(nk));
    set.v = set.u;
    return set;
}

}  // namespace genut
