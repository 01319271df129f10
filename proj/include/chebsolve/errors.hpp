#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace chebsolve {

/// A function evaluation returned NaN or infinity; carries the offending point.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& msg, Eigen::VectorXd point)
        : std::runtime_error(msg), m_point(std::move(point)) {}
    const Eigen::VectorXd& point() const { return m_point; }

private:
    Eigen::VectorXd m_point;
};

/// Degree search exceeded its cap without the coefficients converging.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficient decay too weak to certify a tail bound.
class UnreliableBoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input (expressions, intervals, tensor files, maps).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace chebsolve
