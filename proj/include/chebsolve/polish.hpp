#pragma once

#include <vector>

#include "chebsolve/chebpoly.hpp"
#include "chebsolve/dd.hpp"

namespace chebsolve {

/// Evaluates p at a double-double point with the whole Clenshaw contraction
/// carried in double-double, so residuals stay meaningful below one double
/// rounding of the coefficient mass.
Dd evaluate_dd(const ChebPoly& p, const std::vector<Dd>& x);

/// Newton-polishes an approximate root of a square polynomial system.
/// Residuals are evaluated in double-double while the Jacobian is assembled
/// in plain double from the derivative series; as in iterative refinement,
/// Jacobian rounding slows convergence but does not move the fixed point.
/// Stops when the step stagnates, the iteration cap is reached, or the
/// Jacobian becomes numerically singular, returning the best point found.
std::vector<Dd> polish_root(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& x0,
                            int maxIter = 60);

/// Same iteration as polish_root, with the derivative series built once and
/// reused across many seeds from the same system.
class RootPolisher {
  public:
    explicit RootPolisher(std::vector<ChebPoly> polys);

    std::vector<Dd> polish(const Eigen::VectorXd& x0, int maxIter = 60) const;

  private:
    std::vector<ChebPoly> m_polys;
    std::vector<std::vector<ChebPoly>> m_jac;
};

}  // namespace chebsolve
