#pragma once

#include <limits>
#include <vector>

#include "chebsolve/chebpoly.hpp"

namespace chebsolve {

/// Change of variables x -> alpha*x + beta in one coordinate. With
/// |alpha| + |beta| <= 1 the image of [-1,1] stays inside [-1,1], which is the
/// regime where the basis-change entries stay bounded by 2.
struct AffineMap1D {
    double alpha = 1.0;
    double beta = 0.0;

    void validate() const {
        if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha == 0.0)
            throw InputError("AffineMap1D: alpha must be finite and nonzero");
        // tiny slack: subinterval endpoints computed in floating point can
        // overshoot |alpha| + |beta| = 1 by a few ulps
        if (std::abs(alpha) + std::abs(beta) > 1.0 + 16 * std::numeric_limits<double>::epsilon())
            throw InputError("AffineMap1D: image of [-1,1] must stay inside [-1,1]");
    }
};

/// Roundoff cushion charged per 1-D transform pass, as eps * N * D with
/// N the largest input coefficient magnitude and D the transformed degree.
inline constexpr double kTransformRoundoff = 8 * std::numeric_limits<double>::epsilon();

/// Advances the rolling two-column state of the basis-change matrix
/// C_{i,m} defined by T_m(alpha*x + beta) = sum_i C_{i,m} T_i(x).
/// prev holds column m-1 (rows 0..m-1), cur holds column m (rows 0..m);
/// on return cur holds column m+1 and prev the old cur. Column 0 is [1]
/// and column 1 is [beta, alpha]; entries above the diagonal are zero and
/// never stored.
template <typename Scalar>
void next_transform_column(Scalar alpha, Scalar beta, std::vector<Scalar>& prev,
                           std::vector<Scalar>& cur) {
    const int m = static_cast<int>(cur.size()) - 1;
    const int np = static_cast<int>(prev.size());
    // the retiring column's buffer becomes the new column; prev[i] is read
    // before the slot is overwritten, and only at the same index
    prev.resize(m + 2);
    for (int i = 0; i <= m + 1; ++i) {
        Scalar v = Scalar(2) * beta * (i <= m ? cur[i] : Scalar(0));
        if (i < np) v -= prev[i];
        Scalar neighbors = (i + 1 <= m) ? cur[i + 1] : Scalar(0);
        if (i == 1)
            neighbors += Scalar(2) * cur[0];
        else if (i >= 2)
            neighbors += cur[i - 1];
        prev[i] = v + alpha * neighbors;
    }
    prev.swap(cur);
}

struct TransformResult {
    ChebPoly poly;
    double epsAdded = 0.0;  // transform roundoff charge plus trimmed mass
};

/// Re-expresses p under x_dim -> alpha*x_dim + beta, i.e. returns q with
/// q(x) = p(..., alpha*x_dim + beta, ...) on [-1,1]^n. Trailing slices that
/// fall below trimTol afterwards are trimmed; the roundoff charge and the
/// trimmed mass are both reported in epsAdded. trimTol < 0 selects the
/// default machine-epsilon * coeff_bound policy.
TransformResult transform_dim(const ChebPoly& p, int dim, const AffineMap1D& map,
                              double trimTol = -1.0);

/// Re-expresses p on the subbox (alpha_i = halfwidth, beta_i = center per
/// coordinate), applying the per-dimension maps in dimension order.
TransformResult rescale(const ChebPoly& p, const Box& sub, double trimTol = -1.0);

/// Numerical degree of T_n(alpha*x + beta): the largest row index of column n
/// with magnitude above tol.
int degree_after(const AffineMap1D& map, int n, double tol);

}  // namespace chebsolve
