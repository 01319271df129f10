#include "chebsolve/transform.hpp"

#include <cmath>
#include <memory>
#include <mutex>

namespace chebsolve {

namespace {

// largest index per dimension still carrying an entry above tol, scanned from
// the top slice down so the common no-trim case touches one slice per
// dimension
std::vector<int> kept_degrees(const Eigen::VectorXd& c, const std::vector<int>& deg, double tol) {
    const int n = static_cast<int>(deg.size());
    std::vector<int> kept(n, 0);
    Eigen::Index inner = 1;
    for (int d = n - 1; d >= 0; --d) {
        const Eigen::Index m = deg[d] + 1;
        const Eigen::Index outer = c.size() / (m * inner);
        for (Eigen::Index j = m - 1; j > 0; --j) {
            double mx = 0.0;
            for (Eigen::Index o = 0; o < outer; ++o)
                mx = std::max(mx, c.segment((o * m + j) * inner, inner).cwiseAbs().maxCoeff());
            if (mx > tol) {
                kept[d] = static_cast<int>(j);
                break;
            }
        }
        inner *= m;
    }
    return kept;
}

// copies the kept low-order corner; runs along the last dimension stay
// contiguous
Eigen::VectorXd corner_copy(const Eigen::VectorXd& c, const std::vector<int>& deg,
                            const std::vector<int>& kept) {
    const int n = static_cast<int>(deg.size());
    const Eigen::Index run = kept[n - 1] + 1;
    Eigen::Index total = 1;
    for (int d = 0; d < n; ++d) total *= kept[d] + 1;
    Eigen::VectorXd out(total);
    std::vector<Eigen::Index> stride(n, 1);
    for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * (deg[d + 1] + 1);
    std::vector<int> idx(n, 0);
    Eigen::Index dst = 0, src = 0;
    for (;;) {
        out.segment(dst, run) = c.segment(src, run);
        dst += run;
        int d = n - 2;
        for (; d >= 0; --d) {
            src += stride[d];
            if (++idx[d] <= kept[d]) break;
            src -= stride[d] * idx[d];
            idx[d] = 0;
        }
        if (d < 0) break;
    }
    return out;
}

// columns 0..d of the basis-change matrix; the upper triangle above the
// diagonal in each column is zero
void fill_columns(Eigen::MatrixXd& C, double alpha, double beta, int d) {
    C(0, 0) = 1.0;
    if (d < 1) return;
    C(0, 1) = beta;
    C(1, 1) = alpha;
    std::vector<double> prev{1.0}, cur{beta, alpha};
    prev.reserve(d + 2);
    cur.reserve(d + 2);
    for (int col = 2; col <= d; ++col) {
        next_transform_column(alpha, beta, prev, cur);
        for (int r = 0; r <= col; ++r) C(r, col) = cur[r];
    }
}

// the subdivision tree rescales with the two halving maps almost exclusively,
// so their matrices are shared and grown on demand
std::shared_ptr<const Eigen::MatrixXd> half_map_matrix(double beta, Eigen::Index m) {
    static std::mutex mu;
    static std::shared_ptr<const Eigen::MatrixXd> slots[2];
    std::lock_guard<std::mutex> g(mu);
    std::shared_ptr<const Eigen::MatrixXd>& slot = slots[beta < 0 ? 0 : 1];
    if (!slot || slot->rows() < m) {
        const Eigen::Index grown = std::max<Eigen::Index>(m, slot ? 2 * slot->rows() : 64);
        auto fresh = std::make_shared<Eigen::MatrixXd>(Eigen::MatrixXd::Zero(grown, grown));
        fill_columns(*fresh, 0.5, beta, static_cast<int>(grown) - 1);
        slot = std::move(fresh);
    }
    return slot;
}

}  // namespace

TransformResult transform_dim(const ChebPoly& p, int dim, const AffineMap1D& map,
                              double trimTol) {
    if (dim < 0 || dim >= p.dims()) throw InputError("transform_dim: dimension out of range");
    map.validate();
    if (map.alpha == 1.0 && map.beta == 0.0) return {p, 0.0};

    const int d = p.degree(dim);
    const double maxCoeff = p.size() ? p.coeffs().cwiseAbs().maxCoeff() : 0.0;
    if (trimTol < 0)
        trimTol = std::numeric_limits<double>::epsilon() * p.coeffs().cwiseAbs().sum();

    Eigen::Index inner = 1, outer = 1;
    for (int i = dim + 1; i < p.dims(); ++i) inner *= p.extent(i);
    for (int i = 0; i < dim; ++i) outer *= p.extent(i);
    const Eigen::Index m = d + 1;

    std::shared_ptr<const Eigen::MatrixXd> shared;
    Eigen::MatrixXd local;
    if (map.alpha == 0.5 && std::abs(map.beta) == 0.5) {
        shared = half_map_matrix(map.beta, m);
    } else {
        local = Eigen::MatrixXd::Zero(m, m);
        fill_columns(local, map.alpha, map.beta, d);
    }
    const Eigen::MatrixXd& Cfull = shared ? *shared : local;
    const auto C = Cfull.topLeftCorner(m, m);

    Eigen::VectorXd out(p.size());
    const double* in = p.coeffs().data();
    if (inner == 1) {
        if (m <= 64) {
            // transposed copy so each output entry is one contiguous dot over
            // the nonzero tail of the corresponding matrix row
            Eigen::MatrixXd Ct = C.transpose();
            for (Eigen::Index o = 0; o < outer; ++o) {
                const double* x = in + o * m;
                double* y = out.data() + o * m;
                for (Eigen::Index r = 0; r < m; ++r)
                    y[r] = Eigen::Map<const Eigen::VectorXd>(Ct.data() + r * m + r, m - r)
                               .dot(Eigen::Map<const Eigen::VectorXd>(x + r, m - r));
            }
        } else {
            Eigen::Map<const Eigen::MatrixXd> src(in, m, outer);
            Eigen::Map<Eigen::MatrixXd> dst(out.data(), m, outer);
            dst.noalias() = C * src;
        }
    } else {
        using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        for (Eigen::Index o = 0; o < outer; ++o) {
            Eigen::Map<const RowMat> src(in + o * m * inner, m, inner);
            Eigen::Map<RowMat> dst(out.data() + o * m * inner, m, inner);
            if (m <= 64) {
                // row r of the upper-triangular matrix only touches sources
                // from r upward; rows are contiguous, so these are plain axpys
                for (Eigen::Index r = 0; r < m; ++r) {
                    auto drow = dst.row(r);
                    drow = C(r, r) * src.row(r);
                    for (Eigen::Index j = r + 1; j < m; ++j) drow += C(r, j) * src.row(j);
                }
            } else {
                dst.noalias() = C * src;
            }
        }
    }

    TransformResult res;
    res.epsAdded = kTransformRoundoff * maxCoeff * d;
    std::vector<int> kept = kept_degrees(out, p.degrees(), trimTol);
    if (kept == p.degrees()) {
        res.poly = ChebPoly(p.degrees(), std::move(out));
        return res;
    }
    Eigen::VectorXd corner = corner_copy(out, p.degrees(), kept);
    res.epsAdded += out.cwiseAbs().sum() - corner.cwiseAbs().sum();
    res.poly = ChebPoly(std::move(kept), std::move(corner));
    return res;
}

TransformResult rescale(const ChebPoly& p, const Box& sub, double trimTol) {
    if (sub.dims() != p.dims()) throw InputError("rescale: box dimension mismatch");
    TransformResult acc{p, 0.0};
    for (int dim = 0; dim < p.dims(); ++dim) {
        AffineMap1D map{0.5 * (sub.upper[dim] - sub.lower[dim]),
                        0.5 * (sub.upper[dim] + sub.lower[dim])};
        if (map.alpha == 1.0 && map.beta == 0.0) continue;
        TransformResult step = transform_dim(acc.poly, dim, map, trimTol);
        acc.poly = std::move(step.poly);
        acc.epsAdded += step.epsAdded;
    }
    return acc;
}

int degree_after(const AffineMap1D& map, int n, double tol) {
    map.validate();
    if (n < 0) throw InputError("degree_after: degree must be nonnegative");
    if (!(tol > 0)) throw InputError("degree_after: tolerance must be positive");
    std::vector<double> prev, cur{1.0};
    if (n >= 1) {
        prev = {1.0};
        cur = {map.beta, map.alpha};
    }
    for (int col = 2; col <= n; ++col) next_transform_column(map.alpha, map.beta, prev, cur);
    for (int i = static_cast<int>(cur.size()) - 1; i >= 0; --i)
        if (std::abs(cur[i]) > tol) return i;
    return 0;
}

}  // namespace chebsolve
