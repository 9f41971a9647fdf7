#include "sqthermal/reoe_bound.hpp"

#include "sqthermal/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace sqt {
namespace {

constexpr double kLogFloor = 1e-300;

// c·log v with 0·(−∞) read as 0.
double weighted_log(double coefficient, double v) {
    if (coefficient == 0.0) {
        return 0.0;
    }
    return coefficient * std::log(std::max(v, kLogFloor));
}

struct EdgeCoefficients {
    double c_a;
    double c_b;
    double d_c;  // dc_A/dr̃ = dc_B/dr̃
};

EdgeCoefficients coefficients(const StateParams& state, double r_tilde) {
    const double delta = state.r() - r_tilde;
    const double ch = std::cosh(delta);
    const double sh = std::sinh(delta);
    const double na = state.n_a();
    const double nb = state.n_b();
    return {na * ch * ch + (nb + 1.0) * sh * sh, nb * ch * ch + (na + 1.0) * sh * sh,
            -(na + nb + 1.0) * std::sinh(2.0 * delta)};
}

void require_open_interval(const char* field, double v) {
    if (!(v > 0.0 && v < 1.0)) {
        throw std::domain_error(std::string(field) + " must lie strictly inside (0, 1)");
    }
}

// −ln tanh r̃, without cancellation for large r̃.
double neg_log_tanh(double r_tilde) {
    if (r_tilde < 0.5) {
        return -std::log(std::tanh(r_tilde));
    }
    return -std::log1p(-2.0 / (std::exp(2.0 * r_tilde) + 1.0));
}

// Edge objective Tr ρ log ρ̃ (nats) in optimizer coordinates x = (p, q):
// r̃ = eᵖ, t = L·tanh q with L = −ln tanh r̃, so |t| < L keeps ṽ in (0, 1).
class EdgeObjective {
public:
    explicit EdgeObjective(const StateParams& state) : state_(state) {}

    struct Point {
        double r_tilde;
        double t;
        double log_va;
        double log_vb;
    };

    Point decode(const Eigen::VectorXd& x) const {
        const double r_tilde = std::exp(x[0]);
        const double width = neg_log_tanh(r_tilde);
        const double th = std::tanh(x[1]);
        return {r_tilde, width * th, -width * (1.0 - th), -width * (1.0 + th)};
    }

    // Returns −G and its gradient, for minimization.
    double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || x[0] > 6.0) {
            return std::numeric_limits<double>::infinity();
        }
        const Point p = decode(x);
        const double width = -0.5 * (p.log_va + p.log_vb);
        if (!(width > 0.0) || !(p.r_tilde > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        const double va = std::exp(p.log_va);
        const double vb = std::exp(p.log_vb);
        const double one_minus_va = -std::expm1(p.log_va);
        const double one_minus_vb = -std::expm1(p.log_vb);
        const auto c = coefficients(state_, p.r_tilde);

        const double value = std::log(one_minus_va) + std::log(one_minus_vb)
                             + (c.c_a == 0.0 ? 0.0 : c.c_a * p.log_va)
                             + (c.c_b == 0.0 ? 0.0 : c.c_b * p.log_vb);

        const double tau = std::tanh(p.r_tilde);
        const double sech2 = 1.0 / (std::cosh(p.r_tilde) * std::cosh(p.r_tilde));
        const double g_t = -va / one_minus_va + vb / one_minus_vb + c.c_a - c.c_b;
        const double g_r = -sech2 / tau * (va / one_minus_va + vb / one_minus_vb)
                           + c.d_c * (p.log_va + p.log_vb) + (c.c_a + c.c_b) * sech2 / tau;
        const double th = std::tanh(x[1]);
        const double d_width = -2.0 / std::sinh(2.0 * p.r_tilde);

        grad.resize(2);
        grad[0] = -p.r_tilde * (g_r + g_t * th * d_width);
        grad[1] = -g_t * width * (1.0 - th * th);
        return -value;
    }

    Eigen::VectorXd encode(double r_tilde, double t) const {
        const double width = neg_log_tanh(r_tilde);
        const double ratio = std::clamp(t / width, -0.9, 0.9);
        Eigen::VectorXd x(2);
        x << std::log(r_tilde), std::atanh(ratio);
        return x;
    }

private:
    StateParams state_;
};

struct Candidate {
    QuasiNewtonResult run;
    double objective;  // nats
    double r_tilde;
    double t;
};

EurResult short_circuit(const StateParams& state, LogBase base) {
    EurResult out;
    out.argmax = project_to_edge(state);
    out.value = 0.0;
    out.objective_at_argmax = -state_entropy(state, base);
    out.diagnostics.converged = true;
    out.diagnostics.separable_short_circuit = true;
    return out;
}

}  // namespace

SeparableEdgePoint make_edge_point(double v_a_tilde, double v_b_tilde) {
    if (!(v_a_tilde > 0.0 && v_a_tilde < 1.0)) {
        throw ValidationError("v_a_tilde", "must lie strictly inside (0, 1)");
    }
    if (!(v_b_tilde > 0.0 && v_b_tilde < 1.0)) {
        throw ValidationError("v_b_tilde", "must lie strictly inside (0, 1)");
    }
    return {v_a_tilde, v_b_tilde};
}

SeparableEdgePoint edge_point_from_angles(double r_tilde, double t) {
    if (!(r_tilde > 0.0) || !std::isfinite(r_tilde)) {
        throw ValidationError("r_tilde", "must be positive and finite");
    }
    const double width = neg_log_tanh(r_tilde);
    if (!(std::abs(t) < width)) {
        throw ValidationError("t", "must satisfy |t| < -ln tanh r_tilde");
    }
    return make_edge_point(std::exp(-width + t), std::exp(-width - t));
}

SeparableEdgePoint project_to_edge(const StateParams& state) {
    return {state.v_a(), state.v_b()};
}

double cross_entropy_unconstrained(const StateParams& state, double r_tilde, double v_a_tilde,
                                   double v_b_tilde, LogBase base) {
    require_open_interval("v_a_tilde", v_a_tilde);
    require_open_interval("v_b_tilde", v_b_tilde);
    const auto c = coefficients(state, r_tilde);
    const double nats = std::log1p(-v_a_tilde) + std::log1p(-v_b_tilde)
                        + weighted_log(c.c_a, v_a_tilde) + weighted_log(c.c_b, v_b_tilde);
    return from_nats(nats, base);
}

Eigen::Vector3d cross_entropy_gradient(const StateParams& state, double r_tilde,
                                       double v_a_tilde, double v_b_tilde, LogBase base) {
    const auto c = coefficients(state, r_tilde);
    const double log_sum = std::log(std::max(v_a_tilde, kLogFloor))
                           + std::log(std::max(v_b_tilde, kLogFloor));
    Eigen::Vector3d grad;
    grad << c.d_c * log_sum, -1.0 / (1.0 - v_a_tilde) + c.c_a / v_a_tilde,
        -1.0 / (1.0 - v_b_tilde) + c.c_b / v_b_tilde;
    return grad / log_scale(base);
}

double cross_entropy_term(const StateParams& state, const SeparableEdgePoint& edge,
                          LogBase base) {
    require_open_interval("v_a_tilde", edge.v_a_tilde());
    require_open_interval("v_b_tilde", edge.v_b_tilde());
    return cross_entropy_unconstrained(state, edge.r_tilde(), edge.v_a_tilde(), edge.v_b_tilde(),
                                       base);
}

double relative_entropy_to(const StateParams& state, const SeparableEdgePoint& edge,
                           LogBase base) {
    return -state_entropy(state, base) - cross_entropy_term(state, edge, base);
}

EurResult optimize_eur_best_effort(const StateParams& state, const EurOptions& options) {
    if (!is_entangled(state)) {
        return short_circuit(state, options.base);
    }

    const EdgeObjective objective(state);
    const double r = state.r();
    const double r0 = state.r0();
    const double floor = 1e-3 * r;
    const std::array r_starts{std::max(r0, floor), std::max(0.5 * r0, floor),
                              0.5 * (r0 + r), r};
    const bool both_noisy = state.v_a() > 0.0 && state.v_b() > 0.0;
    const std::array t_starts{0.0, both_noisy ? 0.5 * std::log(state.v_a() / state.v_b()) : 0.0};

    std::vector<Candidate> candidates;
    candidates.reserve(r_starts.size() * t_starts.size());
    for (double r_start : r_starts) {
        for (double t_start : t_starts) {
            auto run = minimize_bfgs(objective, objective.encode(r_start, t_start),
                                     options.quasi_newton);
            const auto p = objective.decode(run.x);
            candidates.push_back({run, -run.value, p.r_tilde, p.t});
        }
    }

    double best_objective = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        best_objective = std::max(best_objective, c.objective);
    }
    // Canonical representative: among near-ties pick the smallest |t|,
    // then the earliest start.
    const Candidate* chosen = nullptr;
    for (const auto& c : candidates) {
        if (c.objective >= best_objective - 1e-12
            && (chosen == nullptr || std::abs(c.t) < std::abs(chosen->t))) {
            chosen = &c;
        }
    }

    EurResult out;
    const auto p = objective.decode(chosen->run.x);
    out.argmax = make_edge_point(std::exp(p.log_va), std::exp(p.log_vb));
    out.objective_at_argmax = from_nats(chosen->objective, options.base);
    out.value = std::max(0.0, -state_entropy(state, options.base) - out.objective_at_argmax);
    out.diagnostics.restarts = static_cast<int>(candidates.size());
    for (const auto& c : candidates) {
        out.diagnostics.iterations += c.run.iterations;
    }
    out.diagnostics.converged = chosen->run.converged;
    out.diagnostics.gradient_norm = chosen->run.gradient_norm;
    return out;
}

EurResult optimize_eur(const StateParams& state, const EurOptions& options) {
    EurResult out = optimize_eur_best_effort(state, options);
    if (!out.diagnostics.converged) {
        throw EurNotConverged(std::move(out));
    }
    return out;
}

double stationary_point_check(const StateParams& state, LogBase base) {
    const bool interior = state.lambda() > 0.0 && state.v_a() > 0.0 && state.v_b() > 0.0;
    if (!interior) {
        throw std::domain_error("stationary_point_check: lambda, v_a, v_b must lie inside (0, 1)");
    }
    return cross_entropy_gradient(state, state.r(), state.v_a(), state.v_b(), base).norm();
}

}  // namespace sqt
