#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chebsolve/approximate.hpp>
#include <chebsolve/chebpoly.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace chebsolve;

namespace {

TargetFunction fn1(double (*f)(double)) {
    return {1, [f](const Eigen::VectorXd& x) { return f(x[0]); }};
}

// Independent oracle for 1-D Chebyshev coefficients: Gauss-Chebyshev
// quadrature at roots nodes, a_k ~ (2/M) sum f(cos theta_j) cos(k theta_j).
// Different nodes and no FFT, so it shares nothing with the library path.
double quadrature_coeff(double (*f)(double), int k, int M = 4000) {
    double sum = 0.0;
    for (int j = 0; j < M; ++j) {
        const double theta = (j + 0.5) * std::numbers::pi / M;
        sum += f(std::cos(theta)) * std::cos(k * theta);
    }
    return (k == 0 ? 1.0 : 2.0) * sum / M;
}

}  // namespace

TEST_CASE("chebyshev_points endpoints, symmetry, exact middle zero") {
    Eigen::VectorXd p2 = chebyshev_points(2);
    CHECK(p2[0] == 1.0);
    CHECK(p2[1] == 0.0);
    CHECK(p2[2] == -1.0);

    Eigen::VectorXd p4 = chebyshev_points(4);
    CHECK(p4[0] == 1.0);
    CHECK(p4[4] == -1.0);
    CHECK(p4[2] == 0.0);
    CHECK(p4[1] == -p4[3]);

    Eigen::VectorXd p0 = chebyshev_points(0);
    REQUIRE(p0.size() == 1);
    CHECK(p0[0] == 1.0);

    // against an extended-precision cosine
    for (int d : {3, 4, 7, 16}) {
        Eigen::VectorXd pts = chebyshev_points(d);
        for (int j = 0; j <= d; ++j) {
            const long double want =
                std::cos(j * std::numbers::pi_v<long double> / d);
            CHECK(std::abs(static_cast<long double>(pts[j]) - want) <=
                  std::numeric_limits<double>::epsilon());
        }
    }
}

TEST_CASE("doubling the grid keeps shared nodes bitwise identical") {
    for (int d : {5, 8, 12}) {
        Eigen::VectorXd coarse = chebyshev_points(d);
        Eigen::VectorXd fine = chebyshev_points(2 * d);
        for (int j = 0; j <= d; ++j) CHECK(fine[2 * j] == coarse[j]);
    }
}

TEST_CASE("interpolation reproduces polynomials exactly") {
    TargetFunction cube{1, [](const Eigen::VectorXd& x) { return x[0] * x[0] * x[0]; }};
    ChebPoly p = interpolate(cube, {8}, Box::unit(1));
    // x^3 = (3 T_1 + T_3) / 4
    CHECK(p.coeff({1}) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p.coeff({3}) == doctest::Approx(0.25).epsilon(1e-14));
    for (int k : {0, 2, 4, 5, 6, 7, 8}) CHECK(std::abs(p.coeff({k})) < 1e-14);

    TargetFunction xy{2, [](const Eigen::VectorXd& x) { return x[0] * x[1]; }};
    ChebPoly q = interpolate(xy, {3, 3}, Box::unit(2));
    CHECK(q.coeff({1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
    double off = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (i != q.flat({1, 1})) off = std::max(off, std::abs(q.coeffs()[i]));
    CHECK(off < 1e-15);
}

TEST_CASE("interpolation coefficients match quadrature") {
    ChebPoly p = interpolate(fn1(std::exp), {20}, Box::unit(1));
    for (int k = 0; k <= 16; ++k)
        CHECK(p.coeff({k}) == doctest::Approx(quadrature_coeff(std::exp, k)).epsilon(1e-13));

    ChebPoly s = interpolate(fn1(std::sin), {20}, Box::unit(1));
    for (int k = 1; k <= 16; k += 2)
        CHECK(s.coeff({k}) == doctest::Approx(quadrature_coeff(std::sin, k)).epsilon(1e-13));
}

TEST_CASE("even functions produce no odd coefficients") {
    ChebPoly p = interpolate(fn1(std::cos), {16}, Box::unit(1));
    for (int k = 1; k <= 15; k += 2) CHECK(std::abs(p.coeff({k})) <= 1e-15);
}

TEST_CASE("interpolation on a mapped box") {
    // f(x) = x^2 on [1,3]; proxy lives on [-1,1] via x = 2 + t
    TargetFunction sq{1, [](const Eigen::VectorXd& x) { return x[0] * x[0]; }};
    Box box(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 3.0));
    ChebPoly p = interpolate(sq, {4}, box);
    for (double t : {-1.0, -0.3, 0.2, 0.9}) {
        Eigen::VectorXd tt(1);
        tt << t;
        const double x = 2.0 + t;
        CHECK(evaluate(p, tt) == doctest::Approx(x * x).epsilon(1e-14));
    }
}

TEST_CASE("find_degrees identifies exact polynomial degree") {
    TargetFunction cube{1, [](const Eigen::VectorXd& x) { return x[0] * x[0] * x[0]; }};
    CHECK(find_degrees(cube, Box::unit(1)) == std::vector<int>{3});

    TargetFunction mixed{2, [](const Eigen::VectorXd& x) {
        return x[0] * x[0] * x[0] * x[1] + 2.0;
    }};
    CHECK(find_degrees(mixed, Box::unit(2)) == std::vector<int>{3, 1});
}

TEST_CASE("find_degrees on constants returns zero") {
    TargetFunction c{2, [](const Eigen::VectorXd&) { return 7.0; }};
    CHECK(find_degrees(c, Box::unit(2)) == std::vector<int>{0, 0});
}

TEST_CASE("find_degrees scales with the interval for entire functions") {
    std::vector<int> narrow = find_degrees(fn1(std::sin), Box::unit(1));
    Box wide(Eigen::VectorXd::Constant(1, -20.0), Eigen::VectorXd::Constant(1, 20.0));
    std::vector<int> broad = find_degrees(fn1(std::sin), wide);
    CHECK(narrow[0] >= 9);
    CHECK(narrow[0] <= 25);
    CHECK(broad[0] > 2 * narrow[0]);
    CHECK(broad[0] <= 80);
}

TEST_CASE("find_degrees throws past the cap for near-singular functions") {
    TargetFunction nasty{1, [](const Eigen::VectorXd& x) { return 1.0 / (x[0] - (1.0 + 1e-9)); }};
    ApproxConfig cfg;
    cfg.maxDegree = 1 << 12;  // keep the test quick; the growth pattern is identical
    CHECK_THROWS_AS(find_degrees(nasty, Box::unit(1), cfg), NonConvergenceError);
}

TEST_CASE("non-finite values surface the offending point") {
    TargetFunction inv{1, [](const Eigen::VectorXd& x) { return 1.0 / x[0]; }};
    try {
        interpolate(inv, {4}, Box::unit(1));  // even-degree grid hits exact zero
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.point()[0] == 0.0);
    }
}

TEST_CASE("error_bound certifies the sampled approximation error") {
    using UnaryFn = double (*)(double);
    for (UnaryFn f : {static_cast<UnaryFn>(std::exp), static_cast<UnaryFn>(std::sin)}) {
        ApproxResult r = approximate(fn1(f), Box::unit(1));
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            Eigen::VectorXd x(1);
            x << -1.0 + 2.0 * i / 2000.0;
            worst = std::max(worst, std::abs(f(x[0]) - evaluate(r.poly, x)));
        }
        CHECK(worst <= r.eps);
        CHECK(r.eps < 1e-12);  // entire functions at these degrees are near machine precision
    }
}

TEST_CASE("error_bound in two dimensions") {
    TargetFunction f{2, [](const Eigen::VectorXd& x) {
        return std::sin(3 * x[0]) * std::exp(x[1]);
    }};
    ApproxResult r = approximate(f, Box::unit(2));
    std::mt19937 rng(44);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 4000; ++t) {
        Eigen::VectorXd x(2);
        x << u(rng), u(rng);
        worst = std::max(worst, std::abs(f.eval(x) - evaluate(r.poly, x)));
    }
    CHECK(worst <= r.eps);
    CHECK(r.eps < 1e-11);
}

TEST_CASE("error_bound arithmetic on synthetic decay") {
    // geometric decay 2^-k: the profile ratio gives rho = 2, tail = a_d
    ChebPoly g = ChebPoly::zeros({10});
    for (int k = 0; k <= 10; ++k) g.coeffs()[k] = std::pow(2.0, -k);
    CHECK(error_bound(g) == doctest::Approx(std::pow(2.0, -10)).epsilon(1e-9));

    ChebPoly h = ChebPoly::zeros({3});
    h.coeffs() << 1.0, 0.1, 0.01, 0.001;
    CHECK(error_bound(h) == doctest::Approx(0.001 / 9.0).epsilon(1e-9));
}

TEST_CASE("error_bound rejects flat coefficient profiles") {
    ChebPoly flat = ChebPoly::zeros({6});
    flat.coeffs().setConstant(0.5);
    CHECK_THROWS_AS(error_bound(flat), UnreliableBoundError);

    ChebPoly rising = ChebPoly::zeros({4});
    rising.coeffs() << 0.1, 0.2, 0.3, 0.4, 0.5;
    CHECK_THROWS_AS(error_bound(rising), UnreliableBoundError);
}

TEST_CASE("approximate on constants is exact") {
    TargetFunction c{1, [](const Eigen::VectorXd&) { return 7.0; }};
    ApproxResult r = approximate(c, Box::unit(1));
    CHECK(r.poly.degrees() == std::vector<int>{0});
    CHECK(r.poly.coeff({0}) == 7.0);
    CHECK(r.eps <= 1e-14);
}

TEST_CASE("grid values are reused across the degree search") {
    long calls = 0;
    TargetFunction f{1, [&calls](const Eigen::VectorXd& x) {
        ++calls;
        return std::sin(2 * x[0]);
    }};
    Box box(Eigen::VectorXd::Constant(1, -2.0), Eigen::VectorXd::Constant(1, 2.0));
    ApproxResult r = approximate(f, box);
    CHECK(r.evals == calls);
    // the doubling ladder shares every second node; a cache-free run would
    // spend noticeably more
    CHECK(calls < 135);
    CHECK(r.eps < 1e-11);
}
