#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chebsolve/chebpoly.hpp>
#include <chebsolve/dd.hpp>
#include <chebsolve/transform.hpp>

#include <random>
#include <vector>

using namespace chebsolve;

namespace {

// Reference basis-change matrix computed densely in double-double arithmetic.
// Same recurrence, independent code path: full matrix, no rolling state.
std::vector<std::vector<Dd>> reference_matrix(double alpha, double beta, int cols) {
    std::vector<std::vector<Dd>> C(cols + 1);
    const Dd a(alpha), b(beta);
    C[0] = {Dd(1.0)};
    if (cols >= 1) C[1] = {b, a};
    for (int k = 1; k < cols; ++k) {
        const auto& cur = C[k];
        const auto& prev = C[k - 1];
        auto at = [](const std::vector<Dd>& v, int i) {
            return (i >= 0 && i < static_cast<int>(v.size())) ? v[i] : Dd(0.0);
        };
        std::vector<Dd> next(k + 2);
        for (int i = 0; i <= k + 1; ++i) {
            Dd eta = i == 1 ? Dd(2.0) : Dd(1.0);
            Dd down = i >= 1 ? eta * at(cur, i - 1) : Dd(0.0);
            next[i] = Dd(2.0) * b * at(cur, i) - at(prev, i) + a * (at(cur, i + 1) + down);
        }
        C[k + 1] = std::move(next);
    }
    return C;
}

std::vector<std::vector<double>> library_columns(double alpha, double beta, int cols) {
    std::vector<std::vector<double>> out;
    std::vector<double> prev, cur{1.0};
    out.push_back(cur);
    if (cols >= 1) {
        prev = {1.0};
        cur = {beta, alpha};
        out.push_back(cur);
    }
    for (int k = 2; k <= cols; ++k) {
        next_transform_column(alpha, beta, prev, cur);
        out.push_back(cur);
    }
    return out;
}

ChebPoly random_poly(const std::vector<int>& degrees, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ChebPoly p = ChebPoly::zeros(degrees);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.coeffs()[i] = u(rng);
    return p;
}

}  // namespace

TEST_CASE("first columns of the basis-change matrix") {
    auto cols = library_columns(0.3, -0.4, 2);
    CHECK(cols[0] == std::vector<double>{1.0});
    CHECK(cols[1] == std::vector<double>{-0.4, 0.3});
    // T_2(ax+b) = (a^2 + 2b^2 - 1) T_0 + 4ab T_1 + a^2 T_2
    CHECK(cols[2][0] == doctest::Approx(0.09 + 0.32 - 1).epsilon(1e-15));
    CHECK(cols[2][1] == doctest::Approx(4 * 0.3 * -0.4).epsilon(1e-15));
    CHECK(cols[2][2] == doctest::Approx(0.09).epsilon(1e-15));
}

TEST_CASE("identity map is a no-op") {
    ChebPoly p = random_poly({6, 4}, 1);
    TransformResult r = transform_dim(p, 0, {1.0, 0.0});
    CHECK(r.epsAdded == 0.0);
    CHECK(r.poly.coeffs() == p.coeffs());
}

TEST_CASE("transform_dim computes the substituted polynomial") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<std::vector<int>> shapes{{9}, {5, 8}, {4, 3, 4}};
    for (unsigned s = 0; s < shapes.size(); ++s) {
        ChebPoly p = random_poly(shapes[s], 40 + s);
        for (int dim = 0; dim < p.dims(); ++dim) {
            const double alpha = 0.2 + 0.5 * std::abs(u(rng));
            const double beta = (1 - alpha) * u(rng);
            TransformResult r = transform_dim(p, dim, {alpha, beta}, 0.0);
            for (int trial = 0; trial < 30; ++trial) {
                Eigen::VectorXd x(p.dims());
                for (int i = 0; i < p.dims(); ++i) x[i] = u(rng);
                Eigen::VectorXd y = x;
                y[dim] = alpha * x[dim] + beta;
                CHECK(evaluate(r.poly, x) ==
                      doctest::Approx(evaluate(p, y)).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("rescale composes per-dimension maps in order") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ChebPoly p = random_poly({7, 6}, 77);
    Box sub(Eigen::Vector2d(-0.25, 0.1), Eigen::Vector2d(0.75, 0.55));
    TransformResult r = rescale(p, sub, 0.0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd x(2);
        x << u(rng), u(rng);
        Eigen::VectorXd y = sub.center() + sub.halfwidth().cwiseProduct(x);
        CHECK(evaluate(r.poly, x) == doctest::Approx(evaluate(p, y)).epsilon(1e-11));
    }
}

TEST_CASE("transform charges trimmed tail mass to the error budget") {
    // a steep subinterval shrinks the numerical degree; the discarded slices
    // must be paid for in epsAdded
    ChebPoly p = ChebPoly::zeros({60});
    p.coeff({60}) = 1.0;
    TransformResult r = transform_dim(p, 0, {0.05, 0.0});
    CHECK(r.poly.degree(0) < 40);
    CHECK(r.epsAdded > 0.0);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        Eigen::VectorXd x(1);
        x << u(rng);
        Eigen::VectorXd y(1);
        y << 0.05 * x[0];
        CHECK(std::abs(evaluate(r.poly, x) - evaluate(p, y)) <= r.epsAdded + 1e-13);
    }
}

TEST_CASE("entries stay bounded on contraction maps") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = 0.05 + 0.9 * u(rng);
        const double betaMax = 1.0 - alpha;
        const double beta = betaMax * (2 * u(rng) - 1);
        auto cols = library_columns(alpha, beta, 80);
        for (const auto& col : cols) {
            CHECK(std::abs(col[0]) <= 1.0 + 1e-12);
            for (double v : col) CHECK(std::abs(v) <= 2.0 + 1e-12);
        }
    }
}

TEST_CASE("column sums follow the scalar two-term recurrence") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = 0.05 + 0.9 * u(rng);
        const double beta = (1.0 - alpha) * (2 * u(rng) - 1);
        auto cols = library_columns(alpha, beta, 90);
        std::vector<double> M(cols.size());
        for (size_t k = 0; k < cols.size(); ++k) {
            M[k] = 0;
            for (double v : cols[k]) M[k] += v;
        }
        for (size_t k = 1; k + 1 < M.size(); ++k) {
            const double want = 2 * (alpha + beta) * M[k] - M[k - 1];
            CHECK(M[k + 1] == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("double columns track the double-double reference") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const double alpha = 0.05 + 0.9 * u(rng);
        const double beta = (1.0 - alpha) * (2 * u(rng) - 1);
        auto got = library_columns(alpha, beta, 100);
        auto want = reference_matrix(alpha, beta, 100);
        for (size_t k = 0; k < got.size(); ++k)
            for (size_t i = 0; i < got[k].size(); ++i) {
                const double err = abs(Dd(got[k][i]) - want[k][i]).to_double();
                worst = std::max(worst, err);
            }
    }
    CHECK(worst <= 5e-15);
}

TEST_CASE("halving map is computed exactly deep into the matrix") {
    // every entry equals the correctly rounded true value until column 57,
    // where the recurrence first drifts off by one ulp
    auto got = library_columns(0.5, 0.5, 70);
    auto want = reference_matrix(0.5, 0.5, 70);
    int firstInexact = -1;
    for (size_t k = 0; k < got.size() && firstInexact < 0; ++k)
        for (size_t i = 0; i < got[k].size(); ++i)
            if (got[k][i] != want[k][i].to_double()) {
                firstInexact = static_cast<int>(k);
                break;
            }
    CHECK(firstInexact == 57);
}

TEST_CASE("degree_after identity and contraction") {
    CHECK(degree_after({1.0, 0.0}, 40, 1e-16) == 40);
    const double eps = std::numeric_limits<double>::epsilon();
    const int d = degree_after({0.5, 0.0}, 600, eps);
    CHECK(d < 600);
    CHECK(d >= 300);  // numerical degree cannot drop below alpha * n
}

TEST_CASE("invalid maps are rejected") {
    CHECK_THROWS_AS((AffineMap1D{0.0, 0.5}.validate()), InputError);
    CHECK_THROWS_AS((AffineMap1D{0.8, 0.5}.validate()), InputError);
    ChebPoly p = random_poly({3}, 9);
    CHECK_THROWS_AS(transform_dim(p, 1, {0.5, 0.0}), InputError);
    CHECK_THROWS_AS(degree_after({0.5, 0.0}, -1, 1e-16), InputError);
    CHECK_THROWS_AS(degree_after({0.5, 0.0}, 5, 0.0), InputError);
}
