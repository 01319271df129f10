#include "chebsolve/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace chebsolve {

namespace {

bool lexLess(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

bool recordLess(const RootRecord& a, const RootRecord& b) {
    if (lexLess(a.box.lower, b.box.lower)) return true;
    if (lexLess(b.box.lower, a.box.lower)) return false;
    if (lexLess(a.box.upper, b.box.upper)) return true;
    if (lexLess(b.box.upper, a.box.upper)) return false;
    return lexLess(a.point, b.point);
}

bool sameBox(const Box& a, const Box& b) {
    return (a.lower.array() == b.lower.array()).all() && (a.upper.array() == b.upper.array()).all();
}

bool oversized(const Box& b, double cap) { return b.width().maxCoeff() > cap; }

// A record box can collapse to a point in some coordinate; widening it keeps
// the refinement box valid while staying inside the parent.
Box widen_degenerate(const Box& b, const Box& parent) {
    Box out = b;
    for (Eigen::Index i = 0; i < b.dims(); ++i) {
        const double c = 0.5 * (out.lower[i] + out.upper[i]);
        const double minW = 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(c));
        if (out.upper[i] - out.lower[i] >= minW) continue;
        out.lower[i] = std::max(parent.lower[i], c - minW);
        out.upper[i] = std::min(parent.upper[i], c + minW);
    }
    return out;
}

struct DriverRun {
    const ProxyProblem& prob;
    SolveObserver* obs = nullptr;
    long functionEvals = 0;
    long subdivisions = 0;
    int maxDepth = 0;

    std::vector<RootRecord> solveOn(const Box& box, int depth) {
        const int n = box.dims();
        std::vector<ChebPoly> polys;
        polys.reserve(n);
        Eigen::VectorXd eps(n);
        for (int i = 0; i < n; ++i) {
            bool certified = true;
            try {
                ApproxResult r = approximate(prob.functions[i], box, prob.cfg.approx);
                functionEvals += r.evals;
                eps[i] = r.eps;
                polys.push_back(std::move(r.poly));
            } catch (const NonConvergenceError&) {
                certified = false;
            } catch (const UnreliableBoundError&) {
                certified = false;
            }
            if (!certified) {
                RootRecord rec;
                rec.point = box.center();
                rec.box = box;
                rec.residuals = Eigen::VectorXd::Zero(n);
                rec.flags = kDepthWarning;
                return {rec};
            }
        }

        SolveStats sub;
        std::vector<RootRecord> recs = cheb_solve(polys, eps, box, prob.cfg, &sub, obs);
        subdivisions += sub.subdivisions;
        maxDepth = std::max(maxDepth, depth + sub.maxDepth);

        std::vector<RootRecord> out;
        std::vector<Box> refined;
        for (RootRecord& r : recs) {
            if (oversized(r.box, prob.cfg.maxIntervalSize) && !sameBox(r.box, box) &&
                depth < prob.cfg.maxDepth) {
                // duplicate-flagged copies of one box would redo identical work
                const bool seen = std::any_of(refined.begin(), refined.end(),
                                              [&](const Box& b) { return sameBox(b, r.box); });
                if (seen) continue;
                refined.push_back(r.box);
                std::vector<RootRecord> deeper = solveOn(widen_degenerate(r.box, box), depth + 1);
                out.insert(out.end(), std::make_move_iterator(deeper.begin()),
                           std::make_move_iterator(deeper.end()));
            } else {
                if (oversized(r.box, prob.cfg.maxIntervalSize)) r.flags |= kDepthWarning;
                out.push_back(std::move(r));
            }
        }
        return out;
    }
};

}  // namespace

std::vector<RootRecord> cheb_proxy_solve(const ProxyProblem& problem, SolveStats* stats,
                                         SolveObserver* observer) {
    const int n = problem.box.dims();
    problem.box.validate();
    if (problem.functions.empty()) throw InputError("cheb_proxy_solve: no functions");
    if (static_cast<int>(problem.functions.size()) != n)
        throw InputError("cheb_proxy_solve: need as many functions as dimensions");
    for (const TargetFunction& f : problem.functions) {
        if (!f.eval) throw InputError("cheb_proxy_solve: missing function body");
        if (f.arity != n) throw InputError("cheb_proxy_solve: function arity mismatch");
    }

    const auto t0 = std::chrono::steady_clock::now();
    DriverRun run{problem, observer};
    std::vector<RootRecord> recs = run.solveOn(problem.box, 0);

    Eigen::MatrixXd res = residuals(problem, recs);
    for (std::size_t j = 0; j < recs.size(); ++j) recs[j].residuals = res.col(static_cast<Eigen::Index>(j));

    std::sort(recs.begin(), recs.end(), recordLess);

    if (stats) {
        stats->functionEvals = run.functionEvals;
        stats->subdivisions = run.subdivisions;
        stats->maxDepth = run.maxDepth;
        stats->wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return recs;
}

Eigen::MatrixXd residuals(const ProxyProblem& problem, const std::vector<RootRecord>& records) {
    const Eigen::Index n = static_cast<Eigen::Index>(problem.functions.size());
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(records.size()));
    for (std::size_t j = 0; j < records.size(); ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            out(i, static_cast<Eigen::Index>(j)) = problem.functions[i].eval(records[j].point);
    return out;
}

Eigen::MatrixXd orthonormal_matrix(int n, std::uint64_t seed) {
    if (n < 1) throw InputError("orthonormal_matrix: n must be positive");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    };
    Eigen::MatrixXd M(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double u = uniform();
            const double v = uniform();
            M(i, j) = std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
        }
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < j; ++k) M.col(j) -= M.col(k).dot(M.col(j)) * M.col(k);
        const double norm = M.col(j).norm();
        if (norm < 1e-8) throw InputError("orthonormal_matrix: degenerate draw, use another seed");
        M.col(j) /= norm;
    }
    return M;
}

ProxyProblem devastating_system(int n, double epsQ, std::uint64_t seed) {
    if (n < 1) throw InputError("devastating_system: n must be positive");
    if (!(epsQ >= 0)) throw InputError("devastating_system: epsQ must be nonnegative");
    const Eigen::MatrixXd Q = orthonormal_matrix(n, seed);
    ProxyProblem prob;
    prob.box = Box::unit(n);
    prob.functions.reserve(n);
    for (int i = 0; i < n; ++i) {
        TargetFunction f;
        f.arity = n;
        f.eval = [row = Eigen::RowVectorXd(Q.row(i)), epsQ, i](const Eigen::VectorXd& x) {
            return x[i] * x[i] + epsQ * row.dot(x);
        };
        prob.functions.push_back(std::move(f));
    }
    return prob;
}

}  // namespace chebsolve
