#include "chebsolve/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "chebsolve/polish.hpp"
#include "chebsolve/tensor_io.hpp"
#include "chebsolve/transform.hpp"

namespace chebsolve {

namespace {

using nlohmann::json;

bool is_tensor_ref(const std::string& s) { return !s.empty() && s[0] == '@'; }

json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

double parse_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty() || !std::isfinite(v))
        throw InputError(std::string(what) + ": malformed number '" + s + "'");
    return v;
}

std::pair<double, double> parse_interval(const std::string& s) {
    const std::size_t comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
        throw InputError("interval '" + s + "' must be lo,hi");
    return {parse_double(s.substr(0, comma), "interval"),
            parse_double(s.substr(comma + 1), "interval")};
}

}  // namespace

int cmd_solve(const SolveRequest& request, std::ostream& out, std::ostream& err) {
    try {
        const int n = static_cast<int>(request.interval.size());
        if (n == 0) throw InputError("solve: at least one interval required");
        if (static_cast<int>(request.functions.size()) != n)
            throw InputError("solve: need exactly one function per interval");
        Eigen::VectorXd lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = request.interval[static_cast<std::size_t>(i)].first;
            hi[i] = request.interval[static_cast<std::size_t>(i)].second;
        }
        const Box box(lo, hi);
        box.validate();
        if (!(request.tensorEps >= 0))
            throw InputError("solve: tolerance must be nonnegative");

        std::vector<RootRecord> recs;
        SolveStats stats;
        const bool allTensor =
            std::all_of(request.functions.begin(), request.functions.end(), is_tensor_ref);
        if (allTensor) {
            std::vector<ChebPoly> polys;
            polys.reserve(static_cast<std::size_t>(n));
            for (const std::string& f : request.functions) {
                ChebPoly p = read_tensor_file(f.substr(1));
                if (p.dims() != n)
                    throw InputError("solve: tensor '" + f.substr(1) + "' has dimension " +
                                     std::to_string(p.dims()) + ", expected " + std::to_string(n));
                polys.push_back(std::move(p));
            }
            const Eigen::VectorXd eps = Eigen::VectorXd::Constant(n, request.tensorEps);
            recs = cheb_solve(polys, eps, box, request.cfg, &stats);
            const Eigen::VectorXd c = box.center(), h = box.halfwidth();
            for (RootRecord& r : recs) {
                const Eigen::VectorXd local = (r.point - c).cwiseQuotient(h);
                r.residuals.resize(n);
                for (int i = 0; i < n; ++i) r.residuals[i] = evaluate(polys[static_cast<std::size_t>(i)], local);
            }
        } else {
            ProxyProblem prob;
            prob.box = box;
            prob.cfg = request.cfg;
            const Eigen::VectorXd c = box.center(), h = box.halfwidth();
            for (const std::string& f : request.functions) {
                if (is_tensor_ref(f)) {
                    ChebPoly p = read_tensor_file(f.substr(1));
                    if (p.dims() != n)
                        throw InputError("solve: tensor '" + f.substr(1) + "' has dimension " +
                                         std::to_string(p.dims()) + ", expected " + std::to_string(n));
                    TargetFunction tf;
                    tf.arity = n;
                    tf.eval = [p = std::move(p), c, h](const Eigen::VectorXd& x) {
                        const Eigen::VectorXd local = (x - c).cwiseQuotient(h);
                        return evaluate(p, local);
                    };
                    prob.functions.push_back(std::move(tf));
                } else {
                    prob.functions.push_back(parse_expression(f, n).function());
                }
            }
            recs = cheb_proxy_solve(prob, &stats);
        }

        unsigned allFlags = 0;
        json roots = json::array();
        for (const RootRecord& r : recs) {
            allFlags |= r.flags;
            json jr;
            jr["point"] = to_json(r.point);
            jr["box"] = {{"lower", to_json(r.box.lower)}, {"upper", to_json(r.box.upper)}};
            jr["residuals"] = to_json(r.residuals);
            jr["flags"] = flag_names(r.flags);
            roots.push_back(std::move(jr));
        }
        json doc;
        doc["dimension"] = n;
        json iv = json::array();
        for (int i = 0; i < n; ++i) iv.push_back(json::array({lo[i], hi[i]}));
        doc["interval"] = std::move(iv);
        doc["roots"] = std::move(roots);
        doc["stats"] = {{"function_evals", stats.functionEvals},
                        {"subdivisions", stats.subdivisions},
                        {"max_depth", stats.maxDepth},
                        {"wall_time", stats.wallTime}};
        out << doc.dump(2) << "\n";
        return allFlags != 0 ? 2 : 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

double tau_conjecture(double alpha, double beta) {
    if (!(alpha > 0) || !(alpha <= 1) || !(beta >= 0) || !(beta <= 1 - alpha))
        throw InputError("tau: need 0 < alpha <= 1 and 0 <= beta <= 1 - alpha");
    const double ra = std::sqrt(alpha);
    const double rel = 1 - alpha > 0 ? beta / (1 - alpha) : 0.0;
    return 1.0 / ((1.0 / alpha - 1.0 / ra) * std::sqrt(1.0 - rel * rel) + 1.0 / ra);
}

int cmd_tau(double alpha, double beta, const std::vector<int>& nList, std::ostream& out) {
    const double ref = tau_conjecture(alpha, beta);
    if (nList.empty()) throw InputError("tau: need at least one degree");
    char buf[160];
    std::snprintf(buf, sizeof buf, "# alpha %.17g beta %.17g conjecture %.17g\n", alpha, beta, ref);
    out << buf;
    for (int n : nList) {
        if (n < 1) throw InputError("tau: degrees must be positive");
        const int D = degree_after({alpha, beta}, n, std::numeric_limits<double>::epsilon());
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", n, D, static_cast<double>(D) / n);
        out << buf;
    }
    return 0;
}

int cmd_subdiv_degrees(int n, int levels, std::ostream& out) {
    if (n < 1) throw InputError("subdiv-degrees: degree must be positive");
    if (levels < 1 || levels > 20) throw InputError("subdiv-degrees: levels must be in 1..20");
    for (int lev = 1; lev <= levels; ++lev) {
        const int m = 1 << (lev - 1);
        out << "level " << lev << ":";
        for (int j = 0; j < m; ++j) {
            const AffineMap1D map{0.5 / m, (2.0 * j + 1) / (2.0 * m)};
            out << ' ' << degree_after(map, n, std::numeric_limits<double>::epsilon());
        }
        out << "\n";
    }
    return 0;
}

int cmd_bench(int dim, const std::vector<int>& degreeList, int trials, std::uint64_t seed,
              std::ostream& out) {
    if (dim < 1 || dim > 5) throw InputError("bench: dim must be in 1..5");
    if (trials < 1) throw InputError("bench: trials must be positive");
    if (degreeList.empty()) throw InputError("bench: need at least one degree");
    std::mt19937_64 rng(seed);
    auto normal = [&rng] {
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        const double v = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    };
    std::vector<double> logd, logt;
    out << "# degree mean_time max_error\n";
    char buf[160];
    for (int d : degreeList) {
        if (d < 1) throw InputError("bench: degrees must be positive");
        double total = 0.0, maxErr = 0.0;
        for (int t = 0; t < trials; ++t) {
            std::vector<ChebPoly> polys;
            const std::vector<int> degs(static_cast<std::size_t>(dim), d);
            for (int i = 0; i < dim; ++i) {
                ChebPoly p = ChebPoly::zeros(degs);
                for (Eigen::Index k = 0; k < p.size(); ++k) p.coeffs()[k] = normal();
                polys.push_back(std::move(p));
            }
            const auto t0 = std::chrono::steady_clock::now();
            const auto recs = cheb_solve(polys, Eigen::VectorXd::Zero(dim), Box::unit(dim));
            total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (const RootRecord& r : recs) {
                if (r.flags != 0) continue;
                const std::vector<Dd> z = polish_root(polys, r.point);
                double e = 0.0;
                for (int i = 0; i < dim; ++i)
                    e = std::max(e, std::abs(z[static_cast<std::size_t>(i)].to_double() - r.point[i]));
                maxErr = std::max(maxErr, e);
            }
        }
        const double mean = total / trials;
        logd.push_back(std::log(static_cast<double>(d)));
        logt.push_back(std::log(std::max(mean, 1e-9)));
        std::snprintf(buf, sizeof buf, "%d %.6g %.3g\n", d, mean, maxErr);
        out << buf;
    }
    if (logd.size() >= 2) {
        const double k = static_cast<double>(logd.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < logd.size(); ++i) {
            sx += logd[i];
            sy += logt[i];
            sxx += logd[i] * logd[i];
            sxy += logd[i] * logt[i];
        }
        const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        std::snprintf(buf, sizeof buf, "# slope %.3f\n", slope);
        out << buf;
    }
    return 0;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"finds all real zeros of smooth functions on a box via Chebyshev proxies"};
    app.require_subcommand(1);

    auto* sc = app.add_subcommand("solve", "solve a system of expressions or tensor files");
    std::vector<std::string> funcs, intervals;
    SolveRequest req;
    std::string outPath;
    double tol = -1.0;
    sc->add_option("--func", funcs, "expression over x1..xn, or @file for a coefficient tensor")
        ->required();
    sc->add_option("--interval", intervals, "per-dimension lo,hi pair")->required();
    sc->add_option("--max-interval-size", req.cfg.maxIntervalSize,
                   "re-solve root boxes wider than this");
    sc->add_option("--tol", tol,
                   "approximation tolerance for expressions, certified error for tensors");
    sc->add_option("--threads", req.cfg.threads, "worker threads (default 1)");
    sc->add_option("--out", outPath, "write the document here instead of stdout");

    auto* tc = app.add_subcommand("tau", "degree shrink ratio D/n under the subinterval map");
    double alpha = 0.5, beta = 0.0;
    std::vector<int> ns;
    tc->add_option("--alpha", alpha, "map half-width in (0,1]")->required();
    tc->add_option("--beta", beta, "map center in [0, 1-alpha]")->required();
    tc->add_option("--n", ns, "degrees, comma separated")->required()->delimiter(',');

    auto* dc =
        app.add_subcommand("subdiv-degrees", "numerical degree of T_n on dyadic subintervals of [0,1]");
    int tn = 0, levels = 0;
    dc->add_option("--n", tn, "Chebyshev degree")->required();
    dc->add_option("--levels", levels, "subdivision levels")->required();

    auto* bc = app.add_subcommand("bench", "timing and accuracy on seeded random systems");
    int dim = 1, trials = 3;
    std::uint64_t seed = 1;
    std::vector<int> bdegs;
    bc->add_option("--dim", dim, "dimension, 1..5")->required();
    bc->add_option("--degrees", bdegs, "degrees, comma separated")->required()->delimiter(',');
    bc->add_option("--trials", trials, "systems per degree (default 3)");
    bc->add_option("--seed", seed, "random seed (default 1)");

    auto* vc = app.add_subcommand("verify", "run every acceptance criterion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sc->parsed()) {
            req.functions = funcs;
            for (const std::string& s : intervals) req.interval.push_back(parse_interval(s));
            if (tol >= 0) {
                req.cfg.approx.tol = tol;
                req.tensorEps = tol;
            }
            if (outPath.empty()) return cmd_solve(req, std::cout, std::cerr);
            std::ofstream f(outPath);
            if (!f) {
                std::cerr << "error: cannot open '" << outPath << "' for writing\n";
                return 1;
            }
            return cmd_solve(req, f, std::cerr);
        }
        if (tc->parsed()) return cmd_tau(alpha, beta, ns, std::cout);
        if (dc->parsed()) return cmd_subdiv_degrees(tn, levels, std::cout);
        if (bc->parsed()) return cmd_bench(dim, bdegs, trials, seed, std::cout);
        if (vc->parsed()) return cmd_verify(std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace chebsolve
