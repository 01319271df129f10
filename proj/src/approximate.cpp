#include "chebsolve/approximate.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

namespace chebsolve {

Eigen::VectorXd chebyshev_points(int d) {
    if (d < 0) throw InputError("chebyshev_points: degree must be nonnegative");
    Eigen::VectorXd pts(d + 1);
    if (d == 0) {
        pts[0] = 1.0;
        return pts;
    }
    for (int j = 0; 2 * j < d; ++j) {
        double x = std::cos((j * std::numbers::pi) / d);
        pts[j] = x;
        pts[d - j] = -x;
    }
    if (d % 2 == 0) pts[d / 2] = 0.0;
    return pts;
}

namespace {

// DCT-I along every dimension in place: grid values at Chebyshev extrema ->
// interpolation coefficients. Uses the even extension of each pencil and a
// real FFT; first and last coefficients pick up the 1/(2d) weight, interior
// ones 1/d.
class CosineTransformer {
public:
    void run(Eigen::VectorXd& data, const std::vector<int>& extents) {
        Eigen::Index inner = 1;
        for (int dim = static_cast<int>(extents.size()) - 1; dim >= 0; --dim) {
            const Eigen::Index m = extents[dim];
            const Eigen::Index outer = data.size() / (m * inner);
            if (m > 1) transformDim(data, outer, m, inner);
            inner *= m;
        }
    }

private:
    void transformDim(Eigen::VectorXd& data, Eigen::Index outer, Eigen::Index m,
                      Eigen::Index inner) {
        const Eigen::Index d = m - 1;
        m_ext.resize(2 * d);
        for (Eigen::Index o = 0; o < outer; ++o) {
            for (Eigen::Index l = 0; l < inner; ++l) {
                double* pencil = data.data() + (o * m) * inner + l;
                for (Eigen::Index j = 0; j <= d; ++j) m_ext[j] = pencil[j * inner];
                for (Eigen::Index j = 1; j < d; ++j) m_ext[2 * d - j] = m_ext[j];
                m_fft.fwd(m_spec, m_ext);
                pencil[0] = m_spec[0].real() / (2 * d);
                for (Eigen::Index k = 1; k < d; ++k) pencil[k * inner] = m_spec[k].real() / d;
                pencil[d * inner] = m_spec[d].real() / (2 * d);
            }
        }
    }

    Eigen::FFT<double> m_fft;
    std::vector<double> m_ext;
    std::vector<std::complex<double>> m_spec;
};

// Shared state for one approximation task: the function, its box, the value
// cache keyed on the grid point in [-1,1]^n coordinates, and the running
// evaluation statistics. Grid nodes shared between a degree-d and a
// degree-2d grid are bitwise equal, so the cache absorbs them.
class Approximator {
public:
    Approximator(const TargetFunction& f, const Box& box, const ApproxConfig& cfg)
        : m_f(f), m_box(box), m_cfg(cfg), m_center(box.center()), m_half(box.halfwidth()) {
        if (f.arity != box.dims())
            throw InputError("approximate: function arity does not match box dimension");
        if (!f.eval) throw InputError("approximate: function is empty");
    }

    long evals() const { return m_evals; }

    ChebPoly interpolateAt(const std::vector<int>& degrees) {
        const int n = m_box.dims();
        std::vector<Eigen::VectorXd> grids(n);
        std::vector<int> extents(n);
        Eigen::Index total = 1;
        for (int i = 0; i < n; ++i) {
            grids[i] = chebyshev_points(degrees[i]);
            extents[i] = degrees[i] + 1;
            total *= extents[i];
        }
        Eigen::VectorXd values(total);
        Eigen::VectorXd local(n), mapped(n);
        std::vector<int> j(n, 0);
        std::string key(static_cast<size_t>(n) * sizeof(double), '\0');
        for (Eigen::Index idx = 0; idx < total; ++idx) {
            for (int i = 0; i < n; ++i) local[i] = grids[i][j[i]];
            std::memcpy(key.data(), local.data(), key.size());
            auto it = m_cache.find(key);
            double v;
            if (it != m_cache.end()) {
                v = it->second;
            } else {
                for (int i = 0; i < n; ++i) mapped[i] = m_center[i] + m_half[i] * local[i];
                v = m_f.eval(mapped);
                ++m_evals;
                if (!std::isfinite(v))
                    throw EvaluationError("approximate: non-finite function value", mapped);
                m_cache.emplace(key, v);
            }
            values[idx] = v;
            const double a = std::abs(v);
            if (a > m_maxAbs) m_maxAbs = a;
            for (int i = n - 1; i >= 0; --i) {
                if (++j[i] < extents[i]) break;
                j[i] = 0;
            }
        }
        m_dct.run(values, extents);
        return ChebPoly(degrees, std::move(values));
    }

    // largest |coefficient| in each slice along dim
    static Eigen::VectorXd sliceProfile(const ChebPoly& p, int dim) {
        Eigen::VectorXd prof = Eigen::VectorXd::Zero(p.extent(dim));
        Eigen::Index inner = 1, outer = 1;
        for (int i = dim + 1; i < p.dims(); ++i) inner *= p.extent(i);
        for (int i = 0; i < dim; ++i) outer *= p.extent(i);
        const Eigen::Index m = p.extent(dim);
        const double* c = p.coeffs().data();
        for (Eigen::Index o = 0; o < outer; ++o)
            for (Eigen::Index k = 0; k < m; ++k)
                for (Eigen::Index l = 0; l < inner; ++l) {
                    const double a = std::abs(c[(o * m + k) * inner + l]);
                    if (a > prof[k]) prof[k] = a;
                }
        return prof;
    }

    std::vector<int> findDegrees() {
        const int n = m_box.dims();
        std::vector<int> result(n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> degs(n, 5);
            int d = 8;
            for (;;) {
                if (d > m_cfg.maxDegree)
                    throw NonConvergenceError(
                        "find_degrees: coefficients did not converge below the degree cap; "
                        "consider splitting the interval");
                degs[i] = d;
                ChebPoly p = interpolateAt(degs);
                const double tol = tolerance();
                Eigen::VectorXd prof = sliceProfile(p, i);
                bool tailSmall = true;
                for (int k = std::max(0, d - 4); k <= d; ++k) tailSmall = tailSmall && prof[k] <= tol;
                if (!tailSmall) {
                    d *= 2;
                    continue;
                }
                // confirm against a doubled-degree interpolant before trusting
                // the plateau; disagreement means the tail only looked small
                degs[i] = 2 * d + 1;
                ChebPoly q = interpolateAt(degs);
                if (coefficientGap(p, q, i) >= tolerance()) {
                    d *= 2;
                    continue;
                }
                Eigen::VectorXd prof2 = sliceProfile(q, i);
                // floor at the rounding noise of the values themselves: the
                // top quarter can come out anomalously quiet for tiny grids
                double plateau = std::numeric_limits<double>::epsilon() * m_maxAbs;
                for (int k = (3 * d + 1) / 2; k <= 2 * d + 1; ++k)
                    plateau = std::max(plateau, prof2[k]);
                plateau *= 2.0;
                int di = 0;
                for (int k = 2 * d + 1; k >= 0; --k)
                    if (prof2[k] > plateau) {
                        di = k;
                        break;
                    }
                result[i] = di;
                break;
            }
        }
        return result;
    }

    double tolerance() const { return m_cfg.tol > 0 ? m_cfg.tol : 1e-10 * m_maxAbs; }

private:
    // mean absolute coefficient difference, p zero-padded along dim to match q
    static double coefficientGap(const ChebPoly& p, const ChebPoly& q, int dim) {
        Eigen::Index inner = 1, outer = 1;
        for (int i = dim + 1; i < q.dims(); ++i) inner *= q.extent(i);
        for (int i = 0; i < dim; ++i) outer *= q.extent(i);
        const Eigen::Index mp = p.extent(dim), mq = q.extent(dim);
        double sum = 0.0;
        for (Eigen::Index o = 0; o < outer; ++o)
            for (Eigen::Index k = 0; k < mq; ++k)
                for (Eigen::Index l = 0; l < inner; ++l) {
                    const double b = q.coeffs()[(o * mq + k) * inner + l];
                    const double a = k < mp ? p.coeffs()[(o * mp + k) * inner + l] : 0.0;
                    sum += std::abs(a - b);
                }
        return sum / static_cast<double>(q.size());
    }

    const TargetFunction& m_f;
    const Box& m_box;
    ApproxConfig m_cfg;
    Eigen::VectorXd m_center, m_half;
    std::unordered_map<std::string, double> m_cache;
    CosineTransformer m_dct;
    long m_evals = 0;
    double m_maxAbs = 0.0;
};

}  // namespace

ChebPoly interpolate(const TargetFunction& f, const std::vector<int>& degrees, const Box& box) {
    box.validate();
    if (static_cast<int>(degrees.size()) != box.dims())
        throw InputError("interpolate: one degree per dimension required");
    Approximator ctx(f, box, {});
    return ctx.interpolateAt(degrees);
}

std::vector<int> find_degrees(const TargetFunction& f, const Box& box, const ApproxConfig& cfg) {
    box.validate();
    Approximator ctx(f, box, cfg);
    return ctx.findDegrees();
}

double error_bound(const ChebPoly& p, double rhoMargin) {
    double eps = 0.0;
    int degreeSum = 0;
    for (int dim = 0; dim < p.dims(); ++dim) {
        const int d = p.degree(dim);
        degreeSum += d;
        if (d == 0) continue;
        Eigen::VectorXd prof = Approximator::sliceProfile(p, dim);
        const double ad = prof[d];
        if (ad == 0.0) continue;
        int m = 0;
        for (int k = 1; k <= d; ++k)
            if (prof[k] > prof[m]) m = k;
        if (m == d)
            throw UnreliableBoundError("error_bound: no coefficient decay in a dimension");
        const double rho = std::pow(prof[m] / ad, 1.0 / (d - m));
        if (rho <= 1.0 + rhoMargin)
            throw UnreliableBoundError("error_bound: coefficient decay too weak to certify");
        eps += ad / (rho - 1.0);
    }
    // the decay tail alone undercuts the observable error: interpolation and
    // Clenshaw evaluation each contribute rounding at the coefficient-mass
    // scale, so charge for them or dense sampling can exceed the bound
    eps += std::numeric_limits<double>::epsilon() * coeff_bound(p) * (2.0 + degreeSum);
    return eps;
}

ApproxResult approximate(const TargetFunction& f, const Box& box, const ApproxConfig& cfg) {
    box.validate();
    Approximator ctx(f, box, cfg);
    std::vector<int> degrees = ctx.findDegrees();
    // pad past the located cutoff: the bound needs visible decay beyond the
    // last kept coefficient, and exactly polynomial functions have none at
    // the cutoff itself; trim removes the padding again and charges it
    for (int& d : degrees) d += 4;
    ChebPoly p = ctx.interpolateAt(degrees);
    ApproxResult res;
    res.eps = error_bound(p, cfg.rhoMargin);
    TrimResult<double> t = trim(p, std::numeric_limits<double>::epsilon() * coeff_bound(p));
    res.poly = std::move(t.poly);
    res.eps += t.removed;
    res.evals = ctx.evals();
    return res;
}

}  // namespace chebsolve
