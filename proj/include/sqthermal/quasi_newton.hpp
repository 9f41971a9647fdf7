#pragma once

#include <Eigen/Core>

#include <functional>

namespace sqt {

/// Objective evaluating f(x) and writing ∇f(x) into the second argument.
/// May return +inf (or NaN) outside its domain; the line search backs off.
using GradientObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct QuasiNewtonOptions {
    int max_iterations = 500;
    /// Stop once |Δf| falls below this and the gradient test holds too.
    double f_tolerance = 1e-12;
    double g_tolerance = 1e-10;
};

struct QuasiNewtonResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Dense BFGS with a backtracking Armijo line search. Meant for a handful of
/// variables; the inverse Hessian is stored explicitly.
QuasiNewtonResult minimize_bfgs(const GradientObjective& objective, Eigen::VectorXd x0,
                                const QuasiNewtonOptions& options = {});

}  // namespace sqt
