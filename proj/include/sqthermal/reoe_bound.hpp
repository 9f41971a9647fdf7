#pragma once

#include "sqthermal/log_base.hpp"
#include "sqthermal/quasi_newton.hpp"
#include "sqthermal/state.hpp"

#include <Eigen/Core>

#include <stdexcept>

namespace sqt {

/// A separable squeezed thermal state on the edge tanh r̃ = √(ṽ_A ṽ_B).
class SeparableEdgePoint {
public:
    double v_a_tilde() const noexcept { return v_a_; }
    double v_b_tilde() const noexcept { return v_b_; }
    double r_tilde() const { return artanh(lambda_tilde()); }
    double lambda_tilde() const { return std::sqrt(v_a_ * v_b_); }
    /// Log-ratio coordinate t with ṽ_A = tanh r̃ · eᵗ and ṽ_B = tanh r̃ · e⁻ᵗ.
    double t() const { return 0.5 * std::log(v_a_ / v_b_); }

    double n_a_tilde() const noexcept { return v_a_ / (1.0 - v_a_); }
    double n_b_tilde() const noexcept { return v_b_ / (1.0 - v_b_); }

    /// The edge point as an ordinary (separable) state of the family.
    StateParams as_state() const { return make_state(lambda_tilde(), v_a_, v_b_); }

    friend bool operator==(const SeparableEdgePoint&, const SeparableEdgePoint&) = default;

private:
    SeparableEdgePoint(double v_a, double v_b) noexcept : v_a_(v_a), v_b_(v_b) {}

    friend SeparableEdgePoint make_edge_point(double v_a_tilde, double v_b_tilde);
    friend SeparableEdgePoint edge_point_from_angles(double r_tilde, double t);
    friend SeparableEdgePoint project_to_edge(const StateParams& state);

    double v_a_;
    double v_b_;
};

/// Validates ṽ_A, ṽ_B ∈ (0, 1).
SeparableEdgePoint make_edge_point(double v_a_tilde, double v_b_tilde);

/// Edge point with squeezing r̃ > 0 and |t| < −ln tanh r̃.
SeparableEdgePoint edge_point_from_angles(double r_tilde, double t);

/// (v_a, v_b) of the state itself with r̃ pinned to the edge. For a separable
/// state this is a valid separable comparison point; zero thermal parameters
/// are allowed here only.
SeparableEdgePoint project_to_edge(const StateParams& state);

/// Tr ρ log ρ̃ as a function of unconstrained (r̃, ṽ_A, ṽ_B):
///   log(1−ṽ_A) + log(1−ṽ_B) + c_A log ṽ_A + c_B log ṽ_B,
///   c_A = N_A cosh²(r−r̃) + (N_B+1) sinh²(r−r̃), c_B likewise with A ↔ B.
double cross_entropy_unconstrained(const StateParams& state, double r_tilde, double v_a_tilde,
                                   double v_b_tilde, LogBase base = LogBase::two);

/// Analytic gradient of cross_entropy_unconstrained in (r̃, ṽ_A, ṽ_B).
Eigen::Vector3d cross_entropy_gradient(const StateParams& state, double r_tilde,
                                       double v_a_tilde, double v_b_tilde,
                                       LogBase base = LogBase::two);

/// Tr ρ log ρ̃ for an edge state. Throws std::domain_error unless ṽ_A, ṽ_B ∈ (0, 1).
double cross_entropy_term(const StateParams& state, const SeparableEdgePoint& edge,
                          LogBase base = LogBase::two);

/// S(ρ ‖ ρ̃) = −S(ρ) − Tr ρ log ρ̃.
double relative_entropy_to(const StateParams& state, const SeparableEdgePoint& edge,
                           LogBase base = LogBase::two);

struct EurOptions {
    QuasiNewtonOptions quasi_newton{};
    LogBase base = LogBase::two;
};

struct EurDiagnostics {
    int restarts = 0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
    bool separable_short_circuit = false;
};

struct EurResult {
    double value = 0.0;
    SeparableEdgePoint argmax = make_edge_point(0.5, 0.5);
    double objective_at_argmax = 0.0;
    EurDiagnostics diagnostics;
};

/// Every restart failed its convergence test. The best point found is still a
/// valid upper bound and is carried along.
class EurNotConverged : public std::runtime_error {
public:
    explicit EurNotConverged(EurResult best)
        : std::runtime_error("optimize_eur: no restart met the convergence criteria"),
          best_(std::move(best)) {}

    const EurResult& best() const noexcept { return best_; }

private:
    EurResult best_;
};

/// Upper bound on the relative entropy of entanglement: the minimum of
/// S(ρ ‖ ρ̃) over separable squeezed thermal states on the separability edge.
///
/// Multi-start BFGS in (log r̃, artanh-scaled t) with the edge constraint
/// eliminated exactly. Deterministic: fixed starts, fixed reduction order.
/// Throws EurNotConverged if no start converges.
EurResult optimize_eur(const StateParams& state, const EurOptions& options = {});

/// Like optimize_eur but returns the best-so-far result instead of throwing.
EurResult optimize_eur_best_effort(const StateParams& state, const EurOptions& options = {});

/// Norm of the unconstrained gradient of Tr ρ log ρ̃ at (r̃, ṽ_A, ṽ_B) = (r, v_a, v_b).
/// Requires λ, v_a, v_b all strictly inside (0, 1); throws std::domain_error otherwise.
double stationary_point_check(const StateParams& state, LogBase base = LogBase::two);

}  // namespace sqt
