#include "chebsolve/solve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <utility>

#include "chebsolve/dd.hpp"
#include "chebsolve/transform.hpp"

namespace chebsolve {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_system(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps) {
    if (polys.empty()) throw InputError("solve: empty system");
    const int n = static_cast<int>(polys.size());
    for (const ChebPoly& p : polys)
        if (p.dims() != n) throw InputError("solve: need n polynomials in n dimensions");
    if (eps.size() != n) throw InputError("solve: need one tolerance per polynomial");
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(eps[i]) || eps[i] < 0.0)
            throw InputError("solve: tolerances must be finite and nonnegative");
}

double ulp_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

bool record_less(const RootRecord& a, const RootRecord& b) {
    for (int i = 0; i < a.box.dims(); ++i) {
        if (a.box.lower[i] != b.box.lower[i]) return a.box.lower[i] < b.box.lower[i];
        if (a.box.upper[i] != b.box.upper[i]) return a.box.upper[i] < b.box.upper[i];
    }
    for (int i = 0; i < a.point.size(); ++i)
        if (a.point[i] != b.point[i]) return a.point[i] < b.point[i];
    return a.flags < b.flags;
}

RootRecord translated(RootRecord r, const Box& b) {
    const Eigen::VectorXd c = b.center(), h = b.halfwidth();
    r.point = c + h.cwiseProduct(r.point);
    r.box = Box(c + h.cwiseProduct(r.box.lower), c + h.cwiseProduct(r.box.upper));
    return r;
}

Reduction reduce_full_impl(const LinearParts& lp, const SolveConfig& cfg) {
    using Kind = Reduction::Kind;
    const int n = static_cast<int>(lp.A.cols());
    Eigen::VectorXd s(n);
    for (int j = 0; j < n; ++j) {
        const double m = lp.A.col(j).cwiseAbs().maxCoeff();
        if (!std::isfinite(m) || m == 0.0) return {Kind::NoProgress, {}};
        int e;
        std::frexp(m, &e);
        s[j] = std::ldexp(1.0, -e);  // brings the column max into [1/2, 1)
    }
    const Eigen::MatrixXd At = lp.A * s.asDiagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(At);
    if (!lu.isInvertible()) return {Kind::NoProgress, {}};
    const Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite()) return {Kind::NoProgress, {}};
    const double cond = At.cwiseAbs().colwise().sum().maxCoeff() *
                        inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!(cond <= cfg.conditionCap)) return {Kind::NoProgress, {}};

    const Eigen::VectorXd xt = lu.solve(-lp.B);
    const Eigen::VectorXd hwt = inv.cwiseAbs() * lp.E;
    if (!xt.allFinite() || !hwt.allFinite()) return {Kind::NoProgress, {}};
    Eigen::VectorXd lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        const double c = s[i] * xt[i], h = s[i] * hwt[i];
        lo[i] = std::max(-1.0, c - h);
        hi[i] = std::min(1.0, c + h);
        if (lo[i] > hi[i]) return {Kind::Empty, {}};
    }
    return {Kind::Shrunk, Box(std::move(lo), std::move(hi))};
}

Reduction reduce_single_impl(const LinearParts& lp, const Eigen::VectorXd& eps) {
    const int n = static_cast<int>(lp.A.cols());
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -1.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, 1.0);
    for (int i = 0; i < n; ++i) {
        // everything except the constant term
        const double mass = (lp.E[i] - eps[i]) + lp.A.row(i).cwiseAbs().sum();
        for (int j = 0; j < n; ++j) {
            const double a = lp.A(i, j);
            if (a == 0.0) continue;
            const double m = eps[i] + std::max(0.0, mass - std::abs(a));
            double e1 = (-lp.B[i] - m) / a, e2 = (-lp.B[i] + m) / a;
            if (e1 > e2) std::swap(e1, e2);
            lo[j] = std::max(lo[j], e1);
            hi[j] = std::min(hi[j], e2);
            if (lo[j] > hi[j]) return {Reduction::Kind::Empty, {}};
        }
    }
    return {Reduction::Kind::Shrunk, Box(std::move(lo), std::move(hi))};
}

// both reduction methods in one pass; Shrunk with the full box means no shrink
Reduction reducePass(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps,
                     const SolveConfig& cfg) {
    using Kind = Reduction::Kind;
    const LinearParts lp = linear_parts(polys, eps);
    Reduction s = reduce_single_impl(lp, eps);
    if (s.kind == Kind::Empty) return s;
    Reduction f = reduce_full_impl(lp, cfg);
    if (f.kind == Kind::Empty) return f;
    Box out = s.box;
    if (f.kind == Kind::Shrunk) {
        for (int i = 0; i < out.dims(); ++i) {
            out.lower[i] = std::max(out.lower[i], f.box.lower[i]);
            out.upper[i] = std::min(out.upper[i], f.box.upper[i]);
            if (out.lower[i] > out.upper[i]) return {Kind::Empty, {}};
        }
    }
    return {Kind::Shrunk, std::move(out)};
}

// widen near-degenerate coordinates so the rescale maps stay invertible
void inflate_slivers(Box& b) {
    for (int i = 0; i < b.dims(); ++i) {
        if (b.upper[i] - b.lower[i] < 16 * kEps) {
            const double c = 0.5 * (b.lower[i] + b.upper[i]);
            b.lower[i] = std::max(-1.0, c - 8 * kEps);
            b.upper[i] = std::min(1.0, c + 8 * kEps);
        }
    }
}

class Solver {
public:
    Solver(const SolveConfig& cfg, SolveObserver* obs)
        : m_cfg(cfg), m_obs(obs), m_slots(std::max(0, cfg.threads - 1)) {}

    long subdivisions() const { return m_subdivisions.load(); }
    int maxDepthSeen() const { return m_maxDepth.load(); }

    // Finds roots of the system on the local [-1,1]^n frame; records come
    // back in that same frame.
    std::vector<RootRecord> run(std::vector<ChebPoly> polys, Eigen::VectorXd eps, int depth,
                                bool firstSplit) {
        const int n = polys[0].dims();
        noteDepth(depth);
        if (depth > m_cfg.maxDepth)
            return {makeRecord(Eigen::VectorXd::Zero(n), Box::unit(n), kDepthWarning)};

        // tolerance swallows every polynomial: no point is distinguishable
        // from a zero, so report the whole box once instead of recursing
        bool indistinct = true;
        for (int i = 0; i < n && indistinct; ++i)
            indistinct = coeff_bound(polys[i]) <= eps[i];
        if (indistinct)
            return {makeRecord(Eigen::VectorXd::Zero(n), Box::unit(n), kSpuriousCandidate)};

        if (excluded(polys, eps)) return {};

        std::vector<Dd> zoomC(n, Dd(0.0));
        Eigen::VectorXd zoomH = Eigen::VectorXd::Ones(n);
        bool baseCase = false;
        for (;;) {
            Reduction pass = reducePass(polys, eps, m_cfg);
            if (pass.kind == Reduction::Kind::Empty) return {};
            Box red = std::move(pass.box);
            if (red.width().maxCoeff() > m_cfg.reductionProgressFactor * 2.0) {
                baseCase = base_case_check(polys, eps, m_cfg);
                break;
            }
            // box effectively converged: stop once the polynomials live there
            const bool converged = red.halfwidth().maxCoeff() <= 4 * kEps;
            inflate_slivers(red);
            for (int i = 0; i < n; ++i) {
                TransformResult t = rescale(polys[i], red, m_cfg.trimTol);
                polys[i] = std::move(t.poly);
                eps[i] += t.epsAdded;
            }
            for (int i = 0; i < n; ++i) zoomC[i] = zoomC[i] + Dd(zoomH[i]) * Dd(red.center()[i]);
            zoomH = zoomH.cwiseProduct(red.halfwidth());
            if (converged) {
                baseCase = true;
                break;
            }
        }

        if (baseCase) {
            Eigen::VectorXd lo(n), hi(n);
            for (int i = 0; i < n; ++i) {
                lo[i] = (zoomC[i] - Dd(zoomH[i])).to_double();
                hi[i] = (zoomC[i] + Dd(zoomH[i])).to_double();
            }
            Box bbox(std::move(lo), std::move(hi));
            std::vector<RootRecord> out;
            for (FinalRoot& fr : finalPhase(std::move(polys), depth)) {
                Eigen::VectorXd pt(n);
                for (int i = 0; i < n; ++i)
                    pt[i] = (zoomC[i] + Dd(zoomH[i]) * Dd(fr.point[i])).to_double();
                out.push_back(makeRecord(std::move(pt), bbox, fr.flags));
            }
            return out;
        }

        // subdivide the current frame and recurse; children are expanded one
        // dimension at a time so the ones sharing a half reuse its transforms,
        // and a whole group is dropped as soon as one polynomial stays clear
        // of zero on the group's slab
        std::vector<Box> children = subdivide(Box::unit(n), firstSplit, m_cfg);
        ++m_subdivisions;
        noteDepth(depth + 1);
        std::vector<AffineMap1D> loMaps(n), hiMaps(n);
        for (int i = 0; i < n; ++i) {
            const Box& lo = children.front();
            const Box& hi = children.back();
            loMaps[i] = {0.5 * (lo.upper[i] - lo.lower[i]), 0.5 * (lo.upper[i] + lo.lower[i])};
            hiMaps[i] = {0.5 * (hi.upper[i] - hi.lower[i]), 0.5 * (hi.upper[i] + hi.lower[i])};
        }
        struct Pending {
            size_t k;
            std::vector<ChebPoly> polys;
            Eigen::VectorXd eps;
        };
        std::vector<Pending> pend;
        auto expand = [&](auto&& self, const std::vector<ChebPoly>& ps, const Eigen::VectorXd& es,
                          int d, size_t base) -> void {
            const size_t stride = size_t{1} << (n - 1 - d);
            for (int h = 0; h < 2; ++h) {
                std::vector<ChebPoly> sub(n);
                Eigen::VectorXd subEps = es;
                bool dead = false;
                for (int i = 0; i < n; ++i) {
                    TransformResult t = transform_dim(ps[i], d, h ? hiMaps[d] : loMaps[d],
                                                      m_cfg.trimTol);
                    subEps[i] += t.epsAdded;
                    if (constant_term_check(t.poly, subEps[i])) {
                        if (m_obs) m_obs->onExclusion(t.poly, subEps[i], "constant");
                        dead = true;
                        break;
                    }
                    sub[i] = std::move(t.poly);
                }
                if (dead) continue;
                const size_t childBase = base + (h ? stride : 0);
                if (d + 1 == n)
                    pend.push_back({childBase, std::move(sub), std::move(subEps)});
                else
                    self(self, sub, subEps, d + 1, childBase);
            }
        };
        expand(expand, polys, eps, 0, 0);
        const size_t live = pend.size();
        std::vector<std::future<std::vector<RootRecord>>> futs(live);
        std::vector<std::vector<RootRecord>> results(live);
        for (size_t j = 0; j < live; ++j) {
            if (j + 1 < live && acquireSlot()) {
                futs[j] = std::async(
                    std::launch::async,
                    [this, depth](std::vector<ChebPoly> p, Eigen::VectorXd e) {
                        std::vector<RootRecord> r = run(std::move(p), std::move(e), depth + 1, false);
                        releaseSlot();
                        return r;
                    },
                    std::move(pend[j].polys), std::move(pend[j].eps));
            } else {
                results[j] = run(std::move(pend[j].polys), std::move(pend[j].eps), depth + 1, false);
            }
        }
        std::vector<RootRecord> all;
        for (size_t j = 0; j < live; ++j) {
            if (futs[j].valid()) results[j] = futs[j].get();
            for (RootRecord& r : results[j])
                all.push_back(translated(std::move(r), children[pend[j].k]));
        }
        all = merge(std::move(all), polys, eps, depth);

        // translate from the zoomed frame back to the entry frame
        Eigen::VectorXd zc(n);
        for (int i = 0; i < n; ++i) zc[i] = zoomC[i].to_double();
        Box zoomBox(zc - zoomH, zc + zoomH);
        for (RootRecord& r : all) r = translated(std::move(r), zoomBox);
        return all;
    }

    // Zooms in with all tolerances zero until the tracked center freezes.
    // Points are local to the input frame; a spurious flag means the proxy
    // system has no zero here after all.
    std::vector<FinalRoot> finalPhase(std::vector<ChebPoly> polys, int depth,
                                      int splitBudget = kFinalSplitBudget) {
        const int n = polys[0].dims();
        noteDepth(depth);
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
        std::vector<Dd> c(n, Dd(0.0));
        Eigen::VectorXd h = Eigen::VectorXd::Ones(n);
        Eigen::VectorXd cur = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd prev2 = cur;
        for (int iter = 0; iter < kFinalIterationCap; ++iter) {
            for (int i = 0; i < n; ++i)
                if (coeff_bound(polys[i]) == 0.0) return {{cur, kSpuriousCandidate}};
            for (int i = 0; i < n; ++i)
                if (constant_term_check(polys[i], 0.0) || quadratic_check(polys[i], 0.0))
                    return {{cur, kSpuriousCandidate}};
            Reduction pass = reducePass(polys, zero, m_cfg);
            if (pass.kind == Reduction::Kind::Empty) return {{cur, kSpuriousCandidate}};
            Box red = std::move(pass.box);

            if (red.width().maxCoeff() > m_cfg.reductionProgressFactor * 2.0) {
                if (depth >= m_cfg.maxDepth) return {{cur, kDepthWarning}};
                // a frame stalled at rounding scale holds only noise and its
                // children stall the same way; a few splits separate distinct
                // zeros, beyond that give up and let the caller verify
                if (splitBudget <= 0) return {{cur, kSpuriousCandidate}};
                return splitFinal(polys, c, h, cur, depth, splitBudget - 1);
            }

            if (red.halfwidth().maxCoeff() == 0.0) {
                Eigen::VectorXd pt(n);
                for (int i = 0; i < n; ++i)
                    pt[i] = (c[i] + Dd(h[i]) * Dd(red.center()[i])).to_double();
                return {{std::move(pt), 0}};
            }
            inflate_slivers(red);
            for (int i = 0; i < n; ++i) polys[i] = rescale(polys[i], red, m_cfg.trimTol).poly;
            for (int i = 0; i < n; ++i) c[i] = c[i] + Dd(h[i]) * Dd(red.center()[i]);
            h = h.cwiseProduct(red.halfwidth());
            Eigen::VectorXd next(n);
            for (int i = 0; i < n; ++i) next[i] = c[i].to_double();
            const bool settled = (next.array() == cur.array()).all() ||
                                 (iter >= 1 && (next.array() == prev2.array()).all());
            prev2 = cur;
            cur = next;
            if (settled) return {{cur, 0}};
        }
        return {{cur, kDepthWarning}};
    }

    // Regroups touching records, re-solving each group on its hull unless the
    // hull is the whole frame. Records are in the local [-1,1]^n frame of
    // polys.
    std::vector<RootRecord> merge(std::vector<RootRecord> recs, const std::vector<ChebPoly>& polys,
                                  const Eigen::VectorXd& eps, int depth) {
        const size_t m = recs.size();
        if (m >= 2) {
            std::vector<size_t> parent(m);
            std::iota(parent.begin(), parent.end(), size_t{0});
            auto find = [&](size_t a) {
                while (parent[a] != a) a = parent[a] = parent[parent[a]];
                return a;
            };
            for (size_t a = 0; a < m; ++a)
                for (size_t b = a + 1; b < m; ++b)
                    if (touching(recs[a].box, recs[b].box)) parent[find(a)] = find(b);

            std::vector<std::vector<size_t>> groups(m);
            for (size_t a = 0; a < m; ++a) groups[find(a)].push_back(a);

            std::vector<RootRecord> out;
            for (std::vector<size_t>& g : groups) {
                if (g.empty()) continue;
                if (g.size() == 1) {
                    out.push_back(std::move(recs[g[0]]));
                    continue;
                }
                std::sort(g.begin(), g.end(),
                          [&](size_t a, size_t b) { return record_less(recs[a], recs[b]); });
                Box hull = recs[g[0]].box;
                for (size_t idx : g) {
                    hull.lower = hull.lower.cwiseMin(recs[idx].box.lower);
                    hull.upper = hull.upper.cwiseMax(recs[idx].box.upper);
                }
                if (coversFrame(hull) || depth >= m_cfg.maxDepth) {
                    // nothing smaller to re-solve on: keep one, flag the rest
                    bool first = true;
                    for (size_t idx : g) {
                        if (!first) recs[idx].flags |= kPossibleDuplicate;
                        if (depth >= m_cfg.maxDepth && !coversFrame(hull))
                            recs[idx].flags |= kDepthWarning;
                        first = false;
                        out.push_back(std::move(recs[idx]));
                    }
                    continue;
                }
                hull.lower = hull.lower.cwiseMax(-1.0);
                hull.upper = hull.upper.cwiseMin(1.0);
                inflate_slivers(hull);
                const int n = static_cast<int>(polys.size());
                std::vector<ChebPoly> sub(n);
                Eigen::VectorXd subEps = eps;
                for (int i = 0; i < n; ++i) {
                    TransformResult t = rescale(polys[i], hull, m_cfg.trimTol);
                    sub[i] = std::move(t.poly);
                    subEps[i] += t.epsAdded;
                }
                for (RootRecord& r : run(std::move(sub), std::move(subEps), depth + 1, true))
                    out.push_back(translated(std::move(r), hull));
            }
            recs = std::move(out);
        }
        std::sort(recs.begin(), recs.end(), record_less);
        return recs;
    }

private:
    static constexpr int kFinalIterationCap = 256;
    static constexpr int kFinalSplitBudget = 4;

    static RootRecord makeRecord(Eigen::VectorXd pt, Box box, unsigned flags) {
        RootRecord r;
        r.point = std::move(pt);
        r.box = std::move(box);
        r.flags = flags;
        return r;
    }

    static bool touching(const Box& a, const Box& b) {
        for (int i = 0; i < a.dims(); ++i)
            if (a.lower[i] > ulp_up(b.upper[i]) || b.lower[i] > ulp_up(a.upper[i])) return false;
        return true;
    }

    static bool coversFrame(const Box& hull) {
        for (int i = 0; i < hull.dims(); ++i)
            if (hull.lower[i] > std::nextafter(-1.0, 1.0) ||
                hull.upper[i] < std::nextafter(1.0, -1.0))
                return false;
        return true;
    }

    // descend into 2^n halves during the final zoom; several surviving points
    // signal a possible multiple zero
    std::vector<FinalRoot> splitFinal(const std::vector<ChebPoly>& polys, const std::vector<Dd>& c,
                                      const Eigen::VectorXd& h, const Eigen::VectorXd& cur,
                                      int depth, int splitBudget) {
        const int n = polys[0].dims();
        std::vector<FinalRoot> pts;
        for (const Box& ch : subdivide(Box::unit(n), false, m_cfg)) {
            std::vector<ChebPoly> sub(n);
            for (int i = 0; i < n; ++i) sub[i] = rescale(polys[i], ch, m_cfg.trimTol).poly;
            for (FinalRoot& fr : finalPhase(std::move(sub), depth + 1, splitBudget)) {
                if (fr.flags & kSpuriousCandidate) continue;
                Eigen::VectorXd local = ch.center() + ch.halfwidth().cwiseProduct(fr.point);
                Eigen::VectorXd out(n);
                for (int i = 0; i < n; ++i) out[i] = (c[i] + Dd(h[i]) * Dd(local[i])).to_double();
                pts.push_back({std::move(out), fr.flags});
            }
        }
        if (pts.empty()) return {{cur, kSpuriousCandidate}};
        if (pts.size() > 1)
            for (FinalRoot& fr : pts) fr.flags |= kPossibleDuplicate;
        return pts;
    }

    bool excluded(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps) {
        for (size_t i = 0; i < polys.size(); ++i)
            if (constant_term_check(polys[i], eps[i])) {
                if (m_obs) m_obs->onExclusion(polys[i], eps[i], "constant");
                return true;
            }
        for (size_t i = 0; i < polys.size(); ++i)
            if (quadratic_check(polys[i], eps[i])) {
                if (m_obs) m_obs->onExclusion(polys[i], eps[i], "quadratic");
                return true;
            }
        return false;
    }

    void noteDepth(int d) {
        int seen = m_maxDepth.load();
        while (d > seen && !m_maxDepth.compare_exchange_weak(seen, d)) {
        }
    }

    bool acquireSlot() {
        int v = m_slots.load();
        while (v > 0)
            if (m_slots.compare_exchange_weak(v, v - 1)) return true;
        return false;
    }
    void releaseSlot() { ++m_slots; }

    SolveConfig m_cfg;
    SolveObserver* m_obs;
    std::atomic<int> m_slots;
    std::atomic<long> m_subdivisions{0};
    std::atomic<int> m_maxDepth{0};
};

}  // namespace

std::vector<std::string> flag_names(unsigned flags) {
    std::vector<std::string> out;
    if (flags & kSpuriousCandidate) out.push_back("SPURIOUS_CANDIDATE");
    if (flags & kPossibleDuplicate) out.push_back("POSSIBLE_DUPLICATE");
    if (flags & kDepthWarning) out.push_back("DEPTH_WARNING");
    return out;
}

bool constant_term_check(const ChebPoly& p, double eps) {
    if (!std::isfinite(eps) || eps < 0.0) throw InputError("constant_term_check: bad tolerance");
    const double a0 = p.coeffs()[0];
    const double rest = std::max(0.0, p.coeffs().cwiseAbs().sum() - std::abs(a0));
    return std::abs(a0) > rest + eps;
}

bool quadratic_check(const ChebPoly& p, double eps) {
    if (!std::isfinite(eps) || eps < 0.0) throw InputError("quadratic_check: bad tolerance");
    const int n = p.dims();
    // terms of order <= 2 sit at fixed flat offsets; the tail is whatever
    // mass remains, clamped against rounding in the subtraction
    std::vector<Eigen::Index> stride(n, 1);
    for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * p.extent(d + 1);
    const double a0 = p.coeffs()[0];
    double listed = std::abs(a0), crossMass = 0.0;
    Eigen::VectorXd lin = Eigen::VectorXd::Zero(n), quad = Eigen::VectorXd::Zero(n);
    for (int d = 0; d < n; ++d) {
        if (p.extent(d) > 1) {
            lin[d] = p.coeffs()[stride[d]];
            listed += std::abs(lin[d]);
        }
        if (p.extent(d) > 2) {
            quad[d] = p.coeffs()[2 * stride[d]];
            listed += std::abs(quad[d]);
        }
        for (int e = d + 1; e < n; ++e)
            if (p.extent(d) > 1 && p.extent(e) > 1)
                crossMass += std::abs(p.coeffs()[stride[d] + stride[e]]);
    }
    const double tailMass = std::max(0.0, p.coeffs().cwiseAbs().sum() - listed - crossMass);

    // exact range of the separable part; cross terms enter by magnitude only
    double lo = a0, hi = a0;
    for (int d = 0; d < n; ++d) {
        const double b = lin[d], q = quad[d];
        double gmin = std::min(b + q, -b + q), gmax = std::max(b + q, -b + q);
        if (q != 0.0) {
            const double t = -b / (4 * q);
            if (std::abs(t) <= 1.0) {
                const double gv = b * t + q * (2 * t * t - 1);
                gmin = std::min(gmin, gv);
                gmax = std::max(gmax, gv);
            }
        }
        lo += gmin;
        hi += gmax;
    }
    lo -= crossMass;
    hi += crossMass;
    const double bound = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
    return bound > tailMass + eps;
}

Reduction reduce_single(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps) {
    check_system(polys, eps);
    return reduce_single_impl(linear_parts(polys, eps), eps);
}

Reduction reduce_full(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps,
                      const SolveConfig& cfg) {
    check_system(polys, eps);
    return reduce_full_impl(linear_parts(polys, eps), cfg);
}

bool base_case_check(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps,
                     const SolveConfig& cfg) {
    check_system(polys, eps);
    LinearParts lp = linear_parts(polys, eps);
    lp.E = eps;  // pretend the higher-order terms vanish
    const Reduction r = reduce_full_impl(lp, cfg);
    // a singular or infeasible linear part means the blocker is polynomial
    // structure, which subdivision improves; only a genuine eps-limited
    // stall is a base case
    if (r.kind != Reduction::Kind::Shrunk) return false;
    const Eigen::VectorXd hw = r.box.halfwidth();
    for (int i = 0; i < hw.size(); ++i)
        if (hw[i] <= cfg.baseCaseShrinkCap) return false;
    return true;
}

std::vector<Box> subdivide(const Box& box, bool isFirst, const SolveConfig& cfg) {
    box.validate();
    const int n = box.dims();
    if (n > 24) throw InputError("subdivide: dimension too large");
    const double f = isFirst ? 0.5 + cfg.firstSplitOffset : 0.5;
    Eigen::VectorXd cut(n);
    for (int i = 0; i < n; ++i) cut[i] = box.lower[i] + f * (box.upper[i] - box.lower[i]);
    std::vector<Box> out;
    out.reserve(size_t{1} << n);
    for (size_t c = 0; c < (size_t{1} << n); ++c) {
        Eigen::VectorXd lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            const bool high = (c >> (n - 1 - i)) & 1;
            lo[i] = high ? cut[i] : box.lower[i];
            hi[i] = high ? box.upper[i] : cut[i];
        }
        out.emplace_back(std::move(lo), std::move(hi));
    }
    return out;
}

std::vector<FinalRoot> solve_final_root(const std::vector<ChebPoly>& polys, const Box& box,
                                        const SolveConfig& cfg) {
    check_system(polys, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(polys.size())));
    box.validate();
    Solver solver(cfg, nullptr);
    std::vector<FinalRoot> out = solver.finalPhase(polys, 0);
    const Eigen::VectorXd c = box.center(), h = box.halfwidth();
    for (FinalRoot& fr : out) fr.point = c + h.cwiseProduct(fr.point);
    return out;
}

std::vector<RootRecord> merge_intervals(std::vector<RootRecord> records,
                                        const std::vector<ChebPoly>& polys,
                                        const Eigen::VectorXd& eps, const Box& box,
                                        const SolveConfig& cfg) {
    check_system(polys, eps);
    box.validate();
    const Eigen::VectorXd c = box.center(), h = box.halfwidth();
    for (RootRecord& r : records) {
        r.point = (r.point - c).cwiseQuotient(h);
        r.box = Box((r.box.lower - c).cwiseQuotient(h), (r.box.upper - c).cwiseQuotient(h));
    }
    Solver solver(cfg, nullptr);
    std::vector<RootRecord> out = solver.merge(std::move(records), polys, eps, 0);
    for (RootRecord& r : out) r = translated(std::move(r), box);
    return out;
}

std::vector<RootRecord> cheb_solve(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps,
                                   const Box& box, const SolveConfig& cfg, SolveStats* stats,
                                   SolveObserver* observer) {
    check_system(polys, eps);
    box.validate();
    if (box.dims() != static_cast<int>(polys.size()))
        throw InputError("cheb_solve: box dimension must match the system");
    const auto t0 = std::chrono::steady_clock::now();
    Solver solver(cfg, observer);
    std::vector<RootRecord> out = solver.run(polys, eps, 0, true);
    for (RootRecord& r : out) r = translated(std::move(r), box);
    std::sort(out.begin(), out.end(), record_less);
    if (stats) {
        stats->subdivisions = solver.subdivisions();
        stats->maxDepth = solver.maxDepthSeen();
        stats->wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return out;
}

}  // namespace chebsolve
