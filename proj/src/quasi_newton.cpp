#include "sqthermal/quasi_newton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqt {

QuasiNewtonResult minimize_bfgs(const GradientObjective& objective, Eigen::VectorXd x0,
                                const QuasiNewtonOptions& options) {
    const Eigen::Index dim = x0.size();
    QuasiNewtonResult out;
    out.x = std::move(x0);

    Eigen::VectorXd grad(dim);
    out.value = objective(out.x, grad);
    if (!std::isfinite(out.value)) {
        throw std::domain_error("minimize_bfgs: objective not finite at the starting point");
    }
    out.gradient_norm = grad.norm();
    if (out.gradient_norm == 0.0) {
        out.converged = true;
        return out;
    }

    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd trial(dim);
    Eigen::VectorXd trial_grad(dim);
    double last_change = std::numeric_limits<double>::infinity();

    constexpr double kArmijo = 1e-4;
    constexpr int kMaxBacktracks = 60;
    constexpr double kNoise = 8.0 * std::numeric_limits<double>::epsilon();

    for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
        if (out.gradient_norm < options.g_tolerance && last_change < options.f_tolerance) {
            out.converged = true;
            return out;
        }

        Eigen::VectorXd direction = -inv_hessian * grad;
        double slope = grad.dot(direction);
        if (!(slope < 0.0)) {
            inv_hessian.setIdentity();
            direction = -grad;
            slope = -grad.squaredNorm();
        }

        double step = 1.0;
        double trial_value = 0.0;
        bool accepted = false;
        for (int k = 0; k < kMaxBacktracks; ++k) {
            trial = out.x + step * direction;
            trial_value = objective(trial, trial_grad);
            if (!std::isfinite(trial_value)) {
                step *= 0.5;
                continue;
            }
            if (trial_value <= out.value + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            // Near the optimum the decrease drops below rounding of f; fall
            // back to requiring a smaller gradient at an unchanged value.
            const double noise = kNoise * std::max(1.0, std::abs(out.value));
            if (trial_value <= out.value + noise && trial_grad.norm() < out.gradient_norm) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No representable descent left; stationary to working precision
            // only if the gradient test already holds.
            out.converged = out.gradient_norm < options.g_tolerance;
            return out;
        }

        const Eigen::VectorXd s = trial - out.x;
        const Eigen::VectorXd y = trial_grad - grad;
        last_change = std::abs(out.value - trial_value);
        out.x = trial;
        out.value = trial_value;
        grad = trial_grad;
        out.gradient_norm = grad.norm();

        const double sy = s.dot(y);
        if (sy > 1e-300) {
            if (out.iterations == 0) {
                inv_hessian *= sy / y.squaredNorm();
            }
            const double rho = 1.0 / sy;
            const Eigen::VectorXd hy = inv_hessian * y;
            inv_hessian += (rho * rho * y.dot(hy) + rho) * (s * s.transpose())
                           - rho * (hy * s.transpose() + s * hy.transpose());
        }
    }
    out.converged = out.gradient_norm < options.g_tolerance && last_change < options.f_tolerance;
    return out;
}

}  // namespace sqt
