#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "chebsolve/approximate.hpp"
#include "chebsolve/solve.hpp"

namespace chebsolve {

/// Parsed arithmetic expression over variables x1..xn, the constants pi and
/// e, and an analytic function whitelist. Immutable and cheap to copy.
class Expression {
public:
    Expression() = default;

    double eval(const Eigen::VectorXd& x) const;
    int arity() const { return m_arity; }

    /// Wraps the shared AST as a black-box function for the approximator.
    TargetFunction function() const;

    struct Node;

private:
    friend Expression parse_expression(const std::string&, int);
    std::shared_ptr<const Node> m_root;
    int m_arity = 0;
};

/// Parses text with standard precedence: ^ is right-associative and binds
/// tighter than unary minus, which binds tighter than * and /, then + and -.
/// Allowed functions: sin cos tan sinh cosh tanh exp log sqrt. Non-analytic
/// names such as abs and floor are rejected since the method requires
/// smoothness. Errors carry the offending position.
Expression parse_expression(const std::string& text, int dims);

/// A rootfinding task: n black-box functions on a box, plus solver settings.
struct ProxyProblem {
    std::vector<TargetFunction> functions;
    Box box;
    SolveConfig cfg;
};

/// Outer proxy loop: approximate every function on the box, solve the proxy
/// system, and re-solve with fresh approximations on any returned box that
/// is wider than cfg.maxIntervalSize in some dimension and strictly smaller
/// than its parent. Records keep their flags; oversized boxes that cannot be
/// improved are flagged instead of dropped, and residuals are filled by
/// evaluating the original functions at each returned point.
std::vector<RootRecord> cheb_proxy_solve(const ProxyProblem& problem, SolveStats* stats = nullptr,
                                         SolveObserver* observer = nullptr);

/// f_i(point_j) for every function (rows) and record point (columns).
Eigen::MatrixXd residuals(const ProxyProblem& problem, const std::vector<RootRecord>& records);

/// Seeded deterministic orthonormal matrix: a Box-Muller normal matrix fed
/// through modified Gram-Schmidt. The same seed always gives the same matrix.
Eigen::MatrixXd orthonormal_matrix(int n, std::uint64_t seed);

/// The benchmark system x_i^2 + epsQ * (Q x)_i on [-1,1]^n.
ProxyProblem devastating_system(int n, double epsQ, std::uint64_t seed);

}  // namespace chebsolve
