#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "genut/errors.hpp"
#include "genut/linalg.hpp"
#include "genut/moments.hpp"

namespace genut {

// ---------------------------------------------------------------------------
// Sigma points that match a prescribed mean, covariance and the diagonal
// components of the third and fourth central moment tensors using 2n+1
// weighted points.
//
// Placement: with L the matrix square root of the covariance (L*L^T = P),
//
//   chi[0]   = mean,
//   chi[i]   = mean - u_i * L.col(i),       i = 1..n,
//   chi[i+n] = mean + v_i * L.col(i),       i = 1..n,
//
// with per-axis spreads u > 0 and v = u + s, where s is the skewness diagonal
// rescaled by the cubed diagonal of L (s_i = skew_diag_i / L_ii^3). The same
// diagonal scaling is applied to the kurtosis diagonal when solving for the
// kurtosis-matching u. For a diagonal covariance this scaling is exact and the
// generated set reproduces all four prescribed moment diagonals. For a
// correlated covariance the mean and full covariance are still reproduced
// exactly, but third/fourth diagonal matching degrades with the size of the
// off-diagonal entries of L; treat skewness/kurtosis matching as approximate
// in that case.
//
// The center weight w_0 may be negative (the weights form a signed measure);
// downstream covariance estimates can then lose positive semidefiniteness,
// which the propagation routines report via an eigenvalue floor.
// ---------------------------------------------------------------------------

/// A weighted set of 2n+1 sigma points. Column i of `points` is the i-th point.
struct SigmaPointSet {
    Matrix points;   ///< n x (2n+1); column 0 is the mean
    Vector weights;  ///< length 2n+1; sums to one
    Vector u;        ///< length n, positive spreads below the mean
    Vector v;        ///< length n, positive spreads above the mean

    Eigen::Index dim() const { return points.rows(); }
    Eigen::Index count() const { return points.cols(); }

    /// Cheap structural checks; throws on violation.
    void validate() const {
        const Eigen::Index n = dim();
        if (count() != 2 * n + 1) throw Error("SigmaPointSet: wrong point count");
        if (weights.size() != count()) throw Error("SigmaPointSet: wrong weight count");
        if (u.size() != n || v.size() != n) throw Error("SigmaPointSet: wrong u/v length");
        if (std::abs(weights.sum() - 1.0) > 1e-14 * std::max(1.0, weights.cwiseAbs().sum()))
            throw Error("SigmaPointSet: weights do not sum to one");
        if ((u.array() <= 0.0).any() || (v.array() <= 0.0).any())
            throw Error("SigmaPointSet: u and v must be positive");
        // The center weight may be negative; the others may not.
        if ((weights.tail(2 * n).array() <= 0.0).any())
            throw Error("SigmaPointSet: off-center weights must be positive");
    }
};

/// Axis-aligned bounds with a slack parameter. Entries of `lower`/`upper` may
/// be -inf/+inf for unbounded coordinates. `theta` in (0,1) scales repaired
/// points strictly inside the bounds; values close to 1 keep them close to the
/// constraint surface.
struct BoxConstraint {
    Vector lower;
    Vector upper;
    double theta = 0.9;

    static BoxConstraint nonnegative(Eigen::Index n, double theta = 0.9) {
        BoxConstraint c;
        c.lower = Vector::Zero(n);
        c.upper = Vector::Constant(n, std::numeric_limits<double>::infinity());
        c.theta = theta;
        return c;
    }
};

/// Per-element feasibility of exact kurtosis matching.
struct FeasibilityReport {
    Eigen::Array<bool, Eigen::Dynamic, 1> feasible;
    Vector margin;  ///< kurt_diag minus the minimum admissible value; > 0 means feasible

    bool all_feasible() const { return feasible.all(); }
};

namespace detail {

/// Skewness diagonal rescaled by the cubed diagonal of the covariance factor.
inline Vector scaled_skew(const MomentSpec& spec, const Matrix& L) {
    return hadamard_div(spec.skew_diag, hadamard_pow(L.diagonal(), 3));
}

/// Kurtosis diagonal rescaled by the fourth power of the factor diagonal.
inline Vector scaled_kurt(const MomentSpec& spec, const Matrix& L) {
    return hadamard_div(spec.kurt_diag, hadamard_pow(L.diagonal(), 4));
}

inline Matrix place_points(const Vector& mean, const Matrix& L, const Vector& u,
                           const Vector& v) {
    const Eigen::Index n = mean.size();
    Matrix pts(n, 2 * n + 1);
    pts.col(0) = mean;
    for (Eigen::Index i = 0; i < n; ++i) {
        pts.col(1 + i) = mean - u[i] * L.col(i);
        pts.col(1 + n + i) = mean + v[i] * L.col(i);
    }
    return pts;
}

/// Weights from the spreads: w'' = 1/(v*(u+v)), w' = w''*v/u, w0 = 1 - sum.
inline Vector weights_from_spreads(const Vector& u, const Vector& v) {
    const Eigen::Index n = u.size();
    const Vector w2 = hadamard_div(hadamard_div(Vector::Ones(n), v), u + v);
    const Vector w1 = hadamard_div(w2.cwiseProduct(v), u);
    Vector w(2 * n + 1);
    w.segment(1, n) = w1;
    w.segment(1 + n, n) = w2;
    w[0] = 1.0 - w1.sum() - w2.sum();
    return w;
}

inline SigmaPointSet assemble(const Vector& mean, const Matrix& L, const Vector& u,
                              const Vector& v) {
    if ((v.array() <= 0.0).any()) {
        throw InfeasibleVError(v, "sigma points: derived v has non-positive entries");
    }
    if ((u.array() <= 0.0).any()) {
        throw Error("sigma points: u must be positive");
    }
    SigmaPointSet set;
    set.points = place_points(mean, L, u, v);
    set.weights = weights_from_spreads(u, v);
    set.u = u;
    set.v = v;
    return set;
}

inline Vector kurtosis_matching_u_impl(const MomentSpec& spec, const Matrix& L) {
    const Vector s = scaled_skew(spec, L);
    const Vector k = scaled_kurt(spec, L);
    const Eigen::Index n = s.size();
    Vector u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double rad = 4.0 * k[i] - 3.0 * s[i] * s[i];
        if (!(rad > 0.0)) {
            // Caller produces the detailed feasibility error.
            u[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        u[i] = 0.5 * (-s[i] + std::sqrt(rad));
    }
    return u;
}

}  // namespace detail

/// Checks, per element, whether exact kurtosis matching is possible:
/// kurt_diag_i must exceed skew_diag_i^2 / L_ii^2 (a Pearson-type inequality
/// in the scaled variables). The margin is the left side minus the right side.
inline FeasibilityReport check_feasibility(const MomentSpec& spec) {
    spec.validate();
    const Matrix L = matrix_sqrt(spec.covariance);
    const Vector d = L.diagonal();
    const Eigen::Index n = spec.dim();
    FeasibilityReport rep;
    rep.feasible.resize(n);
    rep.margin.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double bound = (spec.skew_diag[i] * spec.skew_diag[i]) / (d[i] * d[i]);
        rep.margin[i] = spec.kurt_diag[i] - bound;
        rep.feasible[i] = rep.margin[i] > 0.0;
    }
    return rep;
}

/// Spread parameters that make the point set match the kurtosis diagonal:
/// u = ( -s + sqrt(4k - 3 s^2) ) / 2 element-wise in the scaled variables.
/// Throws FeasibilityError (with per-element margins) when infeasible.
inline Vector kurtosis_matching_u(const MomentSpec& spec,
                                  SqrtMethod method = SqrtMethod::Cholesky) {
    spec.validate();
    const FeasibilityReport rep = check_feasibility(spec);
    if (!rep.all_feasible()) {
        throw FeasibilityError(rep.margin,
                               "kurtosis matching infeasible: kurtosis diagonal does not "
                               "dominate the squared skewness in some element");
    }
    return detail::kurtosis_matching_u_impl(spec, matrix_sqrt(spec.covariance, method));
}

/// How the free spread parameters u are chosen in generate().
enum class UMode {
    MatchKurtosis,  ///< solve for u that matches the kurtosis diagonal; throws if infeasible
    Default,        ///< match kurtosis when feasible, otherwise fall back to a safe spread
};

/// Generates the 2n+1 sigma points for a moment spec.
///
/// In UMode::Default, when kurtosis matching is infeasible the spread falls
/// back to u_i = max(0, -s_i) + 1 (which keeps v = u + s positive); the set
/// then still matches mean, covariance and the skewness diagonal.
inline SigmaPointSet generate(const MomentSpec& spec, UMode mode = UMode::MatchKurtosis,
                              SqrtMethod method = SqrtMethod::Cholesky) {
    spec.validate();
    const Matrix L = matrix_sqrt(spec.covariance, method);
    const Vector s = detail::scaled_skew(spec, L);

    Vector u;
    if (mode == UMode::MatchKurtosis) {
        const FeasibilityReport rep = check_feasibility(spec);
        if (!rep.all_feasible()) {
            throw FeasibilityError(rep.margin, "generate: kurtosis matching infeasible");
        }
        u = detail::kurtosis_matching_u_impl(spec, L);
    } else {
        const FeasibilityReport rep = check_feasibility(spec);
        if (rep.all_feasible()) {
            u = detail::kurtosis_matching_u_impl(spec, L);
        } else {
            u = (-s).cwiseMax(0.0).array() + 1.0;
        }
    }
    return detail::assemble(spec.mean, L, u, u + s);
}

/// Generates sigma points with explicitly supplied spreads u > 0. The derived
/// v = u + s must come out positive, otherwise InfeasibleVError is thrown.
inline SigmaPointSet generate(const MomentSpec& spec, const Vector& u,
                              SqrtMethod method = SqrtMethod::Cholesky) {
    spec.validate();
    if (u.size() != spec.dim()) throw Error("generate: u length mismatch");
    if ((u.array() <= 0.0).any()) {
        throw ParameterDomainError("u", "generate: explicit u must be positive element-wise");
    }
    const Matrix L = matrix_sqrt(spec.covariance, method);
    const Vector s = detail::scaled_skew(spec, L);
    return detail::assemble(spec.mean, L, u, u + s);
}

namespace detail {

/// theta * min over usable elements of |num ./ col|; elements with a zero
/// divisor or a non-finite quotient are excluded.
inline double repair_spread(const Vector& num, const Vector& col, double theta) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < num.size(); ++j) {
        if (col[j] == 0.0) continue;
        const double q = std::abs(num[j] / col[j]);
        if (std::isfinite(q) && q < best) best = q;
    }
    if (!std::isfinite(best)) {
        throw Error("constrain: no usable element for spread repair");
    }
    return theta * best;
}

}  // namespace detail

/// Pulls bound-violating sigma points strictly inside the box by shrinking the
/// corresponding spread, then recomputes the dependent quantities. Lower-bound
/// repairs are applied first, then upper-bound repairs on the refreshed
/// points. Whenever some v was directly redefined, v is no longer recomputed
/// from u, which sacrifices skewness matching (and kurtosis matching is lost
/// as soon as any spread is repaired).
///
/// `base` must have been produced by generate() on `spec`.
inline SigmaPointSet constrain(const MomentSpec& spec, const SigmaPointSet& base,
                               const BoxConstraint& c,
                               SqrtMethod method = SqrtMethod::Cholesky) {
    spec.validate();
    const Eigen::Index n = spec.dim();
    if (!(c.theta > 0.0 && c.theta < 1.0)) {
        throw ParameterDomainError("theta", "constrain: theta must lie in (0, 1)");
    }
    if (c.lower.size() != n || c.upper.size() != n) {
        throw Error("constrain: bound length mismatch");
    }
    if (((spec.mean - c.lower).array() <= 0.0).any() ||
        ((c.upper - spec.mean).array() <= 0.0).any()) {
        throw AssumptionError("constrain: mean must lie strictly inside the bounds");
    }

    const Matrix L = matrix_sqrt(spec.covariance, method);
    const Vector s = detail::scaled_skew(spec, L);
    Vector u = base.u;
    Vector v = base.v;
    bool v_redefined = false;

    // Lower-bound pass over the base points.
    for (Eigen::Index i = 1; i <= 2 * n; ++i) {
        if (!((base.points.col(i) - c.lower).array() < 0.0).any()) continue;
        if (i <= n) {
            u[i - 1] = detail::repair_spread(spec.mean - c.lower, L.col(i - 1), c.theta);
        } else {
            v[i - 1 - n] = detail::repair_spread(c.lower - spec.mean, L.col(i - 1 - n), c.theta);
            v_redefined = true;
        }
    }
    if (!v_redefined) v = u + s;
    Matrix pts = detail::place_points(spec.mean, L, u, v);

    // Upper-bound pass over the refreshed points.
    for (Eigen::Index i = 1; i <= 2 * n; ++i) {
        if (!((pts.col(i) - c.upper).array() > 0.0).any()) continue;
        if (i <= n) {
            u[i - 1] = detail::repair_spread(spec.mean - c.upper, L.col(i - 1), c.theta);
        } else {
            v[i - 1 - n] = detail::repair_spread(c.upper - spec.mean, L.col(i - 1 - n), c.theta);
            v_redefined = true;
        }
    }
    if (!v_redefined) v = u + s;
    return detail::assemble(spec.mean, L, u, v);
}

}  // namespace genut
