#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>
#include <vector>

#include "chebsolve/errors.hpp"

namespace chebsolve {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense tensor of Chebyshev coefficients a_k for sum_k a_k T_k1(x1)...T_kn(xn)
/// on [-1,1]^n. Storage is row-major with the last dimension contiguous, so a
/// 1-D pencil along the final coordinate is a plain array slice.
template <typename Scalar>
class ChebTensor {
public:
    using CoeffVector = VectorX<Scalar>;

    ChebTensor() = default;

    ChebTensor(std::vector<int> degrees, CoeffVector coeffs)
        : m_degrees(std::move(degrees)), m_coeffs(std::move(coeffs)) {
        Eigen::Index expect = 1;
        for (int d : m_degrees) {
            if (d < 0) throw InputError("ChebTensor: negative degree");
            expect *= d + 1;
        }
        if (m_degrees.empty() || expect != m_coeffs.size())
            throw InputError("ChebTensor: coefficient count does not match degrees");
    }

    static ChebTensor zeros(const std::vector<int>& degrees) {
        Eigen::Index sz = 1;
        for (int d : degrees) sz *= d + 1;
        return ChebTensor(degrees, CoeffVector::Zero(sz));
    }

    static ChebTensor constant(int dims, Scalar value) {
        ChebTensor t = zeros(std::vector<int>(dims, 0));
        t.m_coeffs[0] = value;
        return t;
    }

    int dims() const { return static_cast<int>(m_degrees.size()); }
    const std::vector<int>& degrees() const { return m_degrees; }
    int degree(int dim) const { return m_degrees[dim]; }
    int extent(int dim) const { return m_degrees[dim] + 1; }
    Eigen::Index size() const { return m_coeffs.size(); }

    const CoeffVector& coeffs() const { return m_coeffs; }
    CoeffVector& coeffs() { return m_coeffs; }

    /// Flat offset of a multi-index, last dimension fastest.
    Eigen::Index flat(const std::vector<int>& k) const {
        Eigen::Index idx = 0;
        for (int d = 0; d < dims(); ++d) idx = idx * extent(d) + k[d];
        return idx;
    }

    Scalar coeff(const std::vector<int>& k) const { return m_coeffs[flat(k)]; }
    Scalar& coeff(const std::vector<int>& k) { return m_coeffs[flat(k)]; }

private:
    std::vector<int> m_degrees;
    CoeffVector m_coeffs;
};

using ChebPoly = ChebTensor<double>;

/// Clenshaw recurrence for sum_{k<n} a[k] T_k(x); stable for |x| <= 1.
template <typename Scalar>
Scalar clenshaw(const Scalar* a, Eigen::Index n, Scalar x) {
    Scalar b1{}, b2{};
    for (Eigen::Index k = n - 1; k >= 1; --k) {
        Scalar b = a[k] + Scalar(2) * x * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return a[0] + x * b1 - b2;
}

template <typename Scalar>
Scalar evaluate(const ChebTensor<Scalar>& p, const VectorX<Scalar>& x) {
    if (x.size() != p.dims()) throw InputError("evaluate: point dimension mismatch");
    std::vector<Scalar> buf(p.coeffs().data(), p.coeffs().data() + p.size());
    std::vector<Scalar> next;
    Eigen::Index rows = p.size();
    for (int dim = p.dims() - 1; dim >= 0; --dim) {
        const Eigen::Index m = p.extent(dim);
        rows /= m;
        next.resize(rows);
        for (Eigen::Index r = 0; r < rows; ++r) next[r] = clenshaw(&buf[r * m], m, x[dim]);
        buf.swap(next);
    }
    return buf[0];
}

/// Evaluates p on the tensor-product grid pts[0] x ... x pts[n-1]. The result
/// is a flat row-major tensor of shape (|pts[0]|, ..., |pts[n-1]|), last
/// dimension fastest, matching the coefficient layout. Contracting one
/// dimension at a time keeps the cost at one Clenshaw pass per dimension
/// instead of one full evaluation per grid point.
template <typename Scalar>
VectorX<Scalar> evaluate_grid(const ChebTensor<Scalar>& p,
                              const std::vector<VectorX<Scalar>>& pts) {
    const int n = p.dims();
    if (static_cast<int>(pts.size()) != n)
        throw InputError("evaluate_grid: need one point set per dimension");
    using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    VectorX<Scalar> buf = p.coeffs();
    VectorX<Scalar> out;
    Eigen::Index inner = 1;  // trailing block already converted to grid values
    Eigen::Index lead = p.size();  // product of extents not yet contracted
    ArrayX b, b1, b2;
    for (int dim = n - 1; dim >= 0; --dim) {
        const Eigen::Index m = p.extent(dim);
        const Eigen::Index g = pts[dim].size();
        const Eigen::Index outer = lead / m;
        out.resize(outer * g * inner);
        b.resize(inner);
        b1.resize(inner);
        b2.resize(inner);
        for (Eigen::Index o = 0; o < outer; ++o) {
            const Scalar* base = buf.data() + o * m * inner;
            for (Eigen::Index j = 0; j < g; ++j) {
                const Scalar x = pts[dim][j];
                b1.setZero();
                b2.setZero();
                for (Eigen::Index k = m - 1; k >= 1; --k) {
                    Eigen::Map<const ArrayX> row(base + k * inner, inner);
                    b = row + Scalar(2) * x * b1 - b2;
                    b2.swap(b1);
                    b1.swap(b);
                }
                Eigen::Map<const ArrayX> row0(base, inner);
                Eigen::Map<ArrayX>(out.data() + (o * g + j) * inner, inner) =
                    row0 + x * b1 - b2;
            }
        }
        buf.swap(out);
        lead = outer;
        inner *= g;
    }
    return buf;
}

/// sum_k |a_k|, an upper bound for |p| on [-1,1]^n.
/// Partial derivative along one dimension via the backward coefficient
/// recurrence b_k = b_{k+2} + 2(k+1) a_{k+1}, with the k = 0 entry halved.
template <typename Scalar>
ChebTensor<Scalar> derivative(const ChebTensor<Scalar>& p, int dim) {
    if (dim < 0 || dim >= p.dims()) throw InputError("derivative: dimension out of range");
    const int d = p.degree(dim);
    std::vector<int> deg = p.degrees();
    deg[dim] = std::max(0, d - 1);
    ChebTensor<Scalar> out = ChebTensor<Scalar>::zeros(deg);
    if (d == 0) return out;

    Eigen::Index inner = 1;
    for (int t = dim + 1; t < p.dims(); ++t) inner *= p.extent(t);
    const Eigen::Index outer = p.size() / (inner * (d + 1));
    for (Eigen::Index o = 0; o < outer; ++o)
        for (Eigen::Index i = 0; i < inner; ++i) {
            const Scalar* a = p.coeffs().data() + o * (d + 1) * inner + i;
            Scalar* b = out.coeffs().data() + o * d * inner + i;
            Scalar b1{}, b2{};
            for (int k = d - 1; k >= 0; --k) {
                const Scalar cur = b2 + Scalar(2 * (k + 1)) * a[(k + 1) * inner];
                b[k * inner] = cur;
                b2 = b1;
                b1 = cur;
            }
            b[0] *= Scalar(0.5);
        }
    return out;
}

template <typename Scalar>
Scalar coeff_bound(const ChebTensor<Scalar>& p) {
    Scalar s{};
    for (Eigen::Index i = 0; i < p.size(); ++i) s += std::abs(p.coeffs()[i]);
    return s;
}

template <typename Scalar>
struct TrimResult {
    ChebTensor<Scalar> poly;
    Scalar removed;  // == coeff_bound(original) - coeff_bound(poly)
};

/// Drops trailing coefficient slices whose entries are all <= tol in
/// magnitude. Keeps at least the constant term. The removed mass is reported
/// exactly as the difference of the two coefficient bounds so that callers can
/// charge it against an error budget without re-deriving it.
template <typename Scalar>
TrimResult<Scalar> trim(const ChebTensor<Scalar>& p, Scalar tol) {
    const int n = p.dims();
    std::vector<int> newdeg(n, 0);
    std::vector<int> k(n, 0);
    // one sweep: track the largest index per dimension carrying mass above tol
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (std::abs(p.coeffs()[i]) > tol)
            for (int d = 0; d < n; ++d)
                if (k[d] > newdeg[d]) newdeg[d] = k[d];
        for (int d = n - 1; d >= 0; --d) {
            if (++k[d] < p.extent(d)) break;
            k[d] = 0;
        }
    }
    bool same = true;
    for (int d = 0; d < n; ++d) same = same && newdeg[d] == p.degree(d);
    if (same) return {p, Scalar(0)};

    ChebTensor<Scalar> out = ChebTensor<Scalar>::zeros(newdeg);
    std::fill(k.begin(), k.end(), 0);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out.coeffs()[i] = p.coeff(k);
        for (int d = n - 1; d >= 0; --d) {
            if (++k[d] <= newdeg[d]) break;
            k[d] = 0;
        }
    }
    return {out, coeff_bound(p) - coeff_bound(out)};
}

/// Axis-aligned box. Degenerate coordinates (lower == upper) are legal as
/// outputs representing converged points; validate() enforces the strict form
/// required of user-supplied domains.
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    Box() = default;
    Box(Eigen::VectorXd lo, Eigen::VectorXd up) : lower(std::move(lo)), upper(std::move(up)) {}

    static Box unit(int n) {
        return Box(Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0));
    }

    int dims() const { return static_cast<int>(lower.size()); }
    Eigen::VectorXd center() const { return 0.5 * (lower + upper); }
    Eigen::VectorXd halfwidth() const { return 0.5 * (upper - lower); }
    Eigen::VectorXd width() const { return upper - lower; }

    bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
        for (int i = 0; i < dims(); ++i)
            if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
        return true;
    }

    void validate() const {
        if (lower.size() != upper.size() || lower.size() == 0)
            throw InputError("Box: bounds must be nonempty and of equal dimension");
        for (int i = 0; i < dims(); ++i) {
            if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
                throw InputError("Box: bounds must be finite");
            if (!(lower[i] < upper[i]))
                throw InputError("Box: lower bound must be strictly below upper bound");
        }
    }
};

/// Linear skeleton of a polynomial system: p_i(x) ~ B_i + sum_j A_ij x_j with
/// everything of total degree >= 2 folded, together with the proxy error, into
/// the half-width E_i of the residual band.
struct LinearParts {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::VectorXd E;
};

inline LinearParts linear_parts(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps) {
    const int rows = static_cast<int>(polys.size());
    if (rows == 0 || eps.size() != rows)
        throw InputError("linear_parts: need one eps per polynomial");
    const int n = polys[0].dims();
    LinearParts lp;
    lp.A = Eigen::MatrixXd::Zero(rows, n);
    lp.B = Eigen::VectorXd::Zero(rows);
    lp.E = Eigen::VectorXd::Zero(rows);
    for (int i = 0; i < rows; ++i) {
        const ChebPoly& p = polys[i];
        if (p.dims() != n) throw InputError("linear_parts: mixed dimensions");
        // the affine coefficients sit at fixed flat offsets; the tail is the
        // remaining mass, clamped against rounding in the subtraction
        lp.B[i] = p.coeffs()[0];
        double affine = std::abs(lp.B[i]);
        Eigen::Index stride = 1;
        for (int d = n - 1; d >= 0; --d) {
            if (p.extent(d) > 1) {
                lp.A(i, d) = p.coeffs()[stride];
                affine += std::abs(lp.A(i, d));
            }
            stride *= p.extent(d);
        }
        lp.E[i] = eps[i] + std::max(0.0, p.coeffs().cwiseAbs().sum() - affine);
    }
    return lp;
}

}  // namespace chebsolve
