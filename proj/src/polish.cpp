#include "chebsolve/polish.hpp"

#include <cmath>

namespace chebsolve {

namespace {

Dd clenshaw_dd(const Dd* a, Eigen::Index n, Dd x) {
    Dd b1, b2;
    const Dd twoX = Dd(2.0) * x;
    for (Eigen::Index k = n - 1; k >= 1; --k) {
        const Dd b = a[k] + twoX * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return a[0] + x * b1 - b2;
}

Dd clenshaw_mixed(const double* a, Eigen::Index n, Dd x) {
    Dd b1, b2;
    const Dd twoX = Dd(2.0) * x;
    for (Eigen::Index k = n - 1; k >= 1; --k) {
        const Dd b = Dd(a[k]) + twoX * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return Dd(a[0]) + x * b1 - b2;
}

}  // namespace

Dd evaluate_dd(const ChebPoly& p, const std::vector<Dd>& x) {
    if (static_cast<int>(x.size()) != p.dims())
        throw InputError("evaluate_dd: point dimension mismatch");
    // the first contraction reads the double coefficients in place; only the
    // shrunken remainder needs double-double storage
    const Eigen::Index mLast = p.extent(p.dims() - 1);
    Eigen::Index rows = p.size() / mLast;
    std::vector<Dd> buf(rows);
    for (Eigen::Index r = 0; r < rows; ++r)
        buf[r] = clenshaw_mixed(p.coeffs().data() + r * mLast, mLast, x[p.dims() - 1]);
    std::vector<Dd> next;
    for (int dim = p.dims() - 2; dim >= 0; --dim) {
        const Eigen::Index m = p.extent(dim);
        rows /= m;
        next.resize(rows);
        for (Eigen::Index r = 0; r < rows; ++r) next[r] = clenshaw_dd(&buf[r * m], m, x[dim]);
        buf.swap(next);
    }
    return buf[0];
}

RootPolisher::RootPolisher(std::vector<ChebPoly> polys) : m_polys(std::move(polys)) {
    const int n = static_cast<int>(m_polys.size());
    if (n == 0) throw InputError("RootPolisher: empty system");
    for (const ChebPoly& p : m_polys)
        if (p.dims() != n) throw InputError("RootPolisher: need n polynomials in n dimensions");
    m_jac.resize(n);
    for (int i = 0; i < n; ++i) {
        m_jac[i].reserve(n);
        for (int j = 0; j < n; ++j) m_jac[i].push_back(derivative(m_polys[i], j));
    }
}

std::vector<Dd> RootPolisher::polish(const Eigen::VectorXd& x0, int maxIter) const {
    const int n = static_cast<int>(m_polys.size());
    if (x0.size() != n) throw InputError("RootPolisher: seed dimension mismatch");

    std::vector<Dd> x(n);
    for (int i = 0; i < n; ++i) x[i] = Dd(x0[i]);
    for (int iter = 0; iter < maxIter; ++iter) {
        Eigen::VectorXd f(n), xd(n);
        for (int i = 0; i < n; ++i) xd[i] = x[i].to_double();
        for (int i = 0; i < n; ++i) f[i] = evaluate_dd(m_polys[i], x).to_double();
        Eigen::MatrixXd J(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) J(i, j) = evaluate(m_jac[i][j], xd);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible()) break;
        const Eigen::VectorXd dx = lu.solve(f);
        if (!dx.allFinite()) break;
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] -= Dd(dx[i]);
            worst = std::max(worst, std::abs(dx[i]) / std::max(1.0, std::abs(x[i].hi)));
        }
        if (worst < 1e-28) break;
    }
    return x;
}

std::vector<Dd> polish_root(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& x0,
                            int maxIter) {
    return RootPolisher(polys).polish(x0, maxIter);
}

}  // namespace chebsolve
