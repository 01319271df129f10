#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "chebsolve/driver.hpp"

namespace chebsolve {

/// One solve invocation. Functions are expression strings, or coefficient
/// tensor files named as @path; a request where every function is a tensor
/// skips approximation and uses tensorEps as the certified error.
struct SolveRequest {
    std::vector<std::string> functions;
    std::vector<std::pair<double, double>> interval;
    SolveConfig cfg;
    double tensorEps = 0.0;
};

/// Runs the request and writes a JSON document {dimension, interval, roots,
/// stats} to out. Returns 0 on success, 2 when any root carries a warning
/// flag, 1 on errors (diagnostic goes to err).
int cmd_solve(const SolveRequest& request, std::ostream& out, std::ostream& err);

/// Conjectured degree-shrink factor for the subinterval map with half-width
/// alpha and center beta: 1 / ((1/a - 1/sqrt(a)) sqrt(1 - (b/(1-a))^2) + 1/sqrt(a)).
double tau_conjecture(double alpha, double beta);

/// For each n: the numerical degree D of T_n(alpha x + beta) and the ratio
/// D/n, with the conjectured limit in the header. Plot-ready columns.
int cmd_tau(double alpha, double beta, const std::vector<int>& nList, std::ostream& out);

/// Numerical degree of T_n on every dyadic subinterval of [0,1]: level k
/// splits [0,1] into 2^(k-1) equal pieces; one line per level.
int cmd_subdiv_degrees(int n, int levels, std::ostream& out);

/// Times the solver on seeded standard-normal Chebyshev systems of each
/// degree and measures accuracy against Newton-polished roots; reports the
/// fitted log-log time slope. Informational, machine-dependent.
int cmd_bench(int dim, const std::vector<int>& degreeList, int trials, std::uint64_t seed,
              std::ostream& out);

/// Runs every acceptance criterion and prints one pass/fail line each.
/// Returns 0 iff all pass. Timings go to err so the report body stays
/// bitwise reproducible.
int cmd_verify(std::ostream& out, std::ostream& err);

/// Flag parsing and dispatch for the chebsolve binary.
int run_cli(int argc, char** argv);

}  // namespace chebsolve
