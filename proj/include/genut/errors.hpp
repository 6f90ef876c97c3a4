#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace genut {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain. Carries the parameter name.
class ParameterDomainError : public Error {
public:
    ParameterDomainError(std::string parameter, const std::string& what)
        : Error(what), parameter_(std::move(parameter)) {}

    const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

/// A variance is zero (or negative) where a positive definite covariance is required.
class DegenerateVarianceError : public Error {
public:
    DegenerateVarianceError(Eigen::Index index, const std::string& what)
        : Error(what), index_(index) {}

    Eigen::Index index() const noexcept { return index_; }

private:
    Eigen::Index index_;
};

/// Cholesky factorization failed: the matrix is not positive definite.
class FactorizationError : public Error {
public:
    FactorizationError(Eigen::Index pivot, const std::string& what)
        : Error(what), pivot_(pivot) {}

    /// Index of the first non-positive pivot.
    Eigen::Index pivot() const noexcept { return pivot_; }

private:
    Eigen::Index pivot_;
};

/// Element-wise division hit a zero divisor.
class DivisionByZeroError : public Error {
public:
    DivisionByZeroError(Eigen::Index index, const std::string& what)
        : Error(what), index_(index) {}

    Eigen::Index index() const noexcept { return index_; }

private:
    Eigen::Index index_;
};

/// Exact kurtosis matching is infeasible. Carries the per-element margins of
/// the feasibility inequality (positive margin means feasible).
class FeasibilityError : public Error {
public:
    FeasibilityError(Eigen::VectorXd margins, const std::string& what)
        : Error(what), margins_(std::move(margins)) {}

    const Eigen::VectorXd& margins() const noexcept { return margins_; }

private:
    Eigen::VectorXd margins_;
};

/// The derived spread parameters v came out non-positive.
class InfeasibleVError : public Error {
public:
    InfeasibleVError(Eigen::VectorXd v, const std::string& what)
        : Error(what), v_(std::move(v)) {}

    const Eigen::VectorXd& v() const noexcept { return v_; }

private:
    Eigen::VectorXd v_;
};

/// A modelling assumption does not hold (e.g. the mean lies outside the bounds).
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// A transformation produced a non-finite value. Carries the sigma point index.
class EvaluationError : public Error {
public:
    EvaluationError(Eigen::Index point_index, const std::string& what)
        : Error(what), point_index_(point_index) {}

    Eigen::Index point_index() const noexcept { return point_index_; }

private:
    Eigen::Index point_index_;
};

}  // namespace genut
