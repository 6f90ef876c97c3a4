#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "genut/errors.hpp"
#include "genut/linalg.hpp"

namespace genut {

enum class Quantity { Mean, Covariance };
enum class Scheme { GenUT, GenUTConstrained, UT, MC };

inline const char* to_string(Quantity q) {
    return q == Quantity::Mean ? "mean" : "covariance";
}

inline const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::GenUT: return "genut";
        case Scheme::GenUTConstrained: return "genut-constrained";
        case Scheme::UT: return "ut";
        default: return "mc";
    }
}

/// Where the reference values of an error grid came from.
struct TruthSource {
    enum class Kind { Analytic, MonteCarlo } kind = Kind::Analytic;
    Eigen::Index n_draws = 0;   ///< Monte Carlo only
    std::uint64_t seed = 0;     ///< Monte Carlo only

    static TruthSource analytic() { return {}; }
    static TruthSource monte_carlo(Eigen::Index n, std::uint64_t seed) {
        return {Kind::MonteCarlo, n, seed};
    }
};

/// Element-wise percentage errors. Entries whose truth is zero cannot carry a
/// relative error; they hold 100*|approx| instead and are flagged in
/// `absolute_marker` (or are exactly zero when the approximation is zero too).
struct PercentageError {
    Matrix values;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> absolute_marker;

    double max() const { return values.size() ? values.maxCoeff() : 0.0; }
};

inline PercentageError percentage_error(const Matrix& approx, const Matrix& truth) {
    if (approx.rows() != truth.rows() || approx.cols() != truth.cols()) {
        throw Error("percentage_error: shape mismatch");
    }
    detail::require_finite(approx, "percentage_error: approx");
    detail::require_finite(truth, "percentage_error: truth");
    PercentageError out;
    out.values.resize(approx.rows(), approx.cols());
    out.absolute_marker.setConstant(approx.rows(), approx.cols(), false);
    for (Eigen::Index i = 0; i < approx.rows(); ++i) {
        for (Eigen::Index j = 0; j < approx.cols(); ++j) {
            if (truth(i, j) == 0.0) {
                if (std::abs(approx(i, j)) <= 1e-12) {
                    out.values(i, j) = 0.0;
                } else {
                    out.values(i, j) = 100.0 * std::abs(approx(i, j));
                    out.absolute_marker(i, j) = true;
                }
            } else {
                out.values(i, j) = 100.0 * std::abs(approx(i, j) - truth(i, j)) /
                                   std::abs(truth(i, j));
            }
        }
    }
    return out;
}

inline PercentageError percentage_error(const Vector& approx, const Vector& truth) {
    return percentage_error(Matrix(approx), Matrix(truth));
}

/// An error grid for one (scheme, quantity) pair against a designated truth.
struct ErrorReport {
    Quantity quantity = Quantity::Mean;
    Scheme scheme = Scheme::GenUT;
    PercentageError errors;
    TruthSource truth_source;
};

}  // namespace genut
