#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chebsolve/chebpoly.hpp>
#include <chebsolve/polish.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace chebsolve;

namespace {

ChebPoly poly1(std::vector<double> c) {
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    return ChebPoly({static_cast<int>(c.size()) - 1}, v);
}

ChebPoly basis1(int k) {
    std::vector<double> c(k + 1, 0.0);
    c[k] = 1.0;
    return poly1(std::move(c));
}

}  // namespace

TEST_CASE("derivative of low-degree series") {
    ChebPoly d2 = derivative(basis1(2), 0);
    REQUIRE(d2.degrees() == std::vector<int>{1});
    CHECK(d2.coeffs()[0] == 0.0);
    CHECK(d2.coeffs()[1] == 4.0);

    ChebPoly d3 = derivative(basis1(3), 0);
    REQUIRE(d3.degrees() == std::vector<int>{2});
    CHECK(d3.coeffs()[0] == 3.0);
    CHECK(d3.coeffs()[1] == 0.0);
    CHECK(d3.coeffs()[2] == 6.0);

    ChebPoly dc = derivative(ChebPoly::constant(1, 7.0), 0);
    CHECK(dc.degrees() == std::vector<int>{0});
    CHECK(dc.coeffs()[0] == 0.0);
}

TEST_CASE("partial derivative in two dimensions") {
    ChebPoly p = ChebPoly::zeros({2, 1});
    p.coeff({2, 1}) = 1.0;  // T_2(x) T_1(y)
    ChebPoly dx = derivative(p, 0);
    REQUIRE(dx.degrees() == (std::vector<int>{1, 1}));
    CHECK(dx.coeff({1, 1}) == 4.0);
    CHECK(dx.coeff({0, 0}) == 0.0);
    ChebPoly dy = derivative(p, 1);
    REQUIRE(dy.degrees() == (std::vector<int>{2, 0}));
    CHECK(dy.coeff({2, 0}) == 1.0);

    CHECK_THROWS_AS(derivative(p, 2), InputError);
}

TEST_CASE("derivative agrees with finite differences") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> dist(0.0, 1.0);
    ChebPoly p = ChebPoly::zeros({4, 3});
    for (Eigen::Index i = 0; i < p.size(); ++i) p.coeffs()[i] = dist(rng);
    std::uniform_real_distribution<double> pt(-0.9, 0.9);
    for (int dim = 0; dim < 2; ++dim) {
        ChebPoly dp = derivative(p, dim);
        for (int t = 0; t < 20; ++t) {
            Eigen::VectorXd x(2);
            x << pt(rng), pt(rng);
            Eigen::VectorXd a = x, b = x;
            const double h = 1e-6;
            a[dim] += h;
            b[dim] -= h;
            const double fd = (evaluate(p, a) - evaluate(p, b)) / (2 * h);
            CHECK(evaluate(dp, x) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("double-double evaluation matches and extends plain evaluation") {
    std::mt19937_64 rng(123);
    std::normal_distribution<double> dist(0.0, 1.0);
    ChebPoly p = ChebPoly::zeros({5, 4});
    for (Eigen::Index i = 0; i < p.size(); ++i) p.coeffs()[i] = dist(rng);
    std::uniform_real_distribution<double> pt(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x(2);
        x << pt(rng), pt(rng);
        const Dd v = evaluate_dd(p, {Dd(x[0]), Dd(x[1])});
        CHECK(std::abs(v.to_double() - evaluate(p, x)) < 1e-13 * coeff_bound(p));
    }
    // at a root known beyond double precision the residual drops far below
    // one double rounding
    const Dd root = sqrt(Dd(0.5));
    const Dd r = evaluate_dd(basis1(2), {root});
    CHECK(abs(r).to_double() < 1e-30);
}

TEST_CASE("polishing a quadratic root to double-double accuracy") {
    auto x = polish_root({basis1(2)}, Eigen::VectorXd::Constant(1, 0.71));
    REQUIRE(x.size() == 1);
    const Dd err = x[0] * x[0] - Dd(0.5);
    CHECK(abs(err).to_double() < 1e-30);
}

TEST_CASE("polishing a two-dimensional linear system") {
    ChebPoly p1 = ChebPoly::zeros({1, 0});
    p1.coeff({0, 0}) = -0.3;
    p1.coeff({1, 0}) = 1.0;
    ChebPoly p2 = ChebPoly::zeros({0, 1});
    p2.coeff({0, 0}) = 0.4;
    p2.coeff({0, 1}) = 1.0;
    Eigen::VectorXd seed(2);
    seed << 0.31, -0.41;
    auto x = polish_root({p1, p2}, seed);
    CHECK(abs(x[0] - Dd(0.3)).to_double() < 1e-30);
    CHECK(abs(x[1] - Dd(-0.4)).to_double() < 1e-30);
}

TEST_CASE("singular Jacobian stops cleanly") {
    // x^2 written as (T_0 + T_2)/2 has a double root at 0
    auto x = polish_root({poly1({0.5, 0.0, 0.5})}, Eigen::VectorXd::Constant(1, 0.1), 200);
    REQUIRE(x.size() == 1);
    CHECK(std::isfinite(x[0].to_double()));
    CHECK(std::abs(x[0].to_double()) < 0.1);  // made progress toward 0, did not blow up
}

TEST_CASE("polishing roots of a high-degree basis polynomial") {
    const int d = 100;
    for (int k : {0, 17, 50, 99}) {
        const double seed = std::cos((k + 0.5) * M_PI / d);
        auto x = polish_root({basis1(d)}, Eigen::VectorXd::Constant(1, seed));
        const Dd r = evaluate_dd(basis1(d), x);
        CHECK(abs(r).to_double() < 1e-26);
        CHECK(std::abs(x[0].to_double() - seed) < 1e-14);  // the seed was already close
    }
}

TEST_CASE("polish input validation") {
    CHECK_THROWS_AS(polish_root({}, Eigen::VectorXd()), InputError);
    CHECK_THROWS_AS(polish_root({basis1(2)}, Eigen::VectorXd::Zero(2)), InputError);
}
