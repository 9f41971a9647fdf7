#include "sqthermal/quasi_newton.hpp"

#include <Eigen/Cholesky>
#include <doctest.h>

#include <cmath>

using namespace sqt;
using Eigen::VectorXd;

TEST_CASE("bfgs minimizes a quadratic") {
    Eigen::MatrixXd h(3, 3);
    h << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
    VectorXd b(3);
    b << 1, -2, 0.5;
    auto f = [&](const VectorXd& x, VectorXd& g) {
        g = h * x - b;
        return 0.5 * x.dot(h * x) - b.dot(x);
    };
    const auto res = minimize_bfgs(f, VectorXd::Zero(3));
    CHECK(res.converged);
    CHECK((res.x - h.ldlt().solve(b)).norm() < 1e-9);
    CHECK(res.gradient_norm < 1e-10);
}

TEST_CASE("bfgs minimizes the Rosenbrock function") {
    auto f = [](const VectorXd& x, VectorXd& g) {
        const double a = 1 - x[0];
        const double b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2 * a - 400 * x[0] * b;
        g[1] = 200 * b;
        return a * a + 100 * b * b;
    };
    VectorXd x0(2);
    x0 << -1.2, 1.0;
    const auto res = minimize_bfgs(f, x0);
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(res.iterations < 200);
}

TEST_CASE("bfgs backs off from infinite values") {
    // Barrier outside x > 0; the minimum sits at x = 1.
    auto f = [](const VectorXd& x, VectorXd& g) {
        g.resize(1);
        if (x[0] <= 0) {
            g[0] = 0;
            return HUGE_VAL;
        }
        g[0] = 1 - 1 / x[0];
        return x[0] - std::log(x[0]);
    };
    VectorXd x0(1);
    x0 << 20.0;
    const auto res = minimize_bfgs(f, x0);
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bfgs reports non-convergence at the iteration cap") {
    auto f = [](const VectorXd& x, VectorXd& g) {
        const double a = 1 - x[0];
        const double b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2 * a - 400 * x[0] * b;
        g[1] = 200 * b;
        return a * a + 100 * b * b;
    };
    VectorXd x0(2);
    x0 << -1.2, 1.0;
    QuasiNewtonOptions opts;
    opts.max_iterations = 3;
    const auto res = minimize_bfgs(f, x0, opts);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 3);
}
