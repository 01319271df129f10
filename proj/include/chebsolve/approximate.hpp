#pragma once

#include <functional>
#include <vector>

#include "chebsolve/chebpoly.hpp"

namespace chebsolve {

/// Black-box real function of n real variables. Evaluation must be pure; the
/// approximator memoizes grid values and evaluates sequentially, so results
/// never depend on evaluation order.
struct TargetFunction {
    int arity = 0;
    std::function<double(const Eigen::VectorXd&)> eval;
};

/// Chebyshev extrema cos(j*pi/d), j = 0..d, descending from 1 to -1. The grid
/// is built mirror-symmetric: x_{d-j} is exactly -x_j and an even-degree grid
/// has an exact zero in the middle. Doubling d keeps the shared nodes bitwise
/// identical, which the degree search relies on to reuse function values.
Eigen::VectorXd chebyshev_points(int d);

struct ApproxConfig {
    double tol = 0.0;         // 0 selects 1e-10 * (largest |f| seen on the grid)
    int maxDegree = 1 << 17;  // per-dimension cap for the doubling search
    double rhoMargin = 1e-3;  // required coefficient decay: rho > 1 + margin
};

/// Interpolates f at the tensor-product Chebyshev grid of the given degrees,
/// mapped affinely onto box. The returned polynomial lives on [-1,1]^n.
ChebPoly interpolate(const TargetFunction& f, const std::vector<int>& degrees, const Box& box);

/// Degree search: per coordinate, starting at 8 with the other coordinates
/// held at 5, doubles until the last five coefficient slices drop below tol,
/// cross-checks against a degree-(2d+1) interpolant, then backs the degree off
/// to the last coefficient above twice the converged-tail plateau.
std::vector<int> find_degrees(const TargetFunction& f, const Box& box,
                              const ApproxConfig& cfg = {});

/// Certified tail bound from geometric coefficient decay. Per dimension, with
/// g(k) the largest coefficient magnitude in slice k, the decay rate
/// rho = (g(m)/g(d))^(1/(d-m)) (m the argmax) gives the tail g(d)/(rho - 1);
/// the per-dimension tails are summed. Throws UnreliableBoundError when no
/// decay is observed.
double error_bound(const ChebPoly& p, double rhoMargin = 1e-3);

struct ApproxResult {
    ChebPoly poly;    // proxy on [-1,1]^n; the box is mapped affinely
    double eps = 0;   // certified bound for max |f - poly| over the box
    long evals = 0;   // function evaluations spent (cache misses only)
};

/// find_degrees + interpolate + error_bound + trim, with the trimmed mass
/// charged to eps.
ApproxResult approximate(const TargetFunction& f, const Box& box, const ApproxConfig& cfg = {});

}  // namespace chebsolve
