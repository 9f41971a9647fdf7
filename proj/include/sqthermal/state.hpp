#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace sqt {

/// Raised when a state or edge parameter falls outside its allowed range.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Largest admissible squeeze strength; closer to 1 the artanh loses all precision.
inline constexpr double kMaxLambda = 1.0 - 1e-12;

/// Inverse hyperbolic tangent written as ½·log1p(2x/(1−x)), accurate as x → 1.
double artanh(double x);

/// A squeezed non-symmetric thermal state S₂(r)·(ρ_th(v_a) ⊗ ρ_th(v_b))·S₂†(r).
///
/// Stored canonically as (λ, v_a, v_b) with λ = tanh r; the physical view
/// (r, N_A, N_B) and the noise squeezing r₀ = artanh √(v_a v_b) are derived.
class StateParams {
public:
    double lambda() const noexcept { return lambda_; }
    double v_a() const noexcept { return v_a_; }
    double v_b() const noexcept { return v_b_; }

    double r() const { return artanh(lambda_); }
    double n_a() const noexcept { return v_a_ / (1.0 - v_a_); }
    double n_b() const noexcept { return v_b_ / (1.0 - v_b_); }
    /// Squeezing carried by the thermal noise, artanh √(v_a·v_b).
    double r0() const { return artanh(noise_lambda()); }
    double noise_lambda() const { return std::sqrt(v_a_ * v_b_); }

    /// Same state with the roles of the two modes exchanged.
    StateParams swapped() const noexcept { return {lambda_, v_b_, v_a_}; }

    friend bool operator==(const StateParams&, const StateParams&) = default;

private:
    StateParams(double lambda, double v_a, double v_b) noexcept
        : lambda_(lambda), v_a_(v_a), v_b_(v_b) {}

    friend StateParams make_state(double lambda, double v_a, double v_b);

    double lambda_;
    double v_a_;
    double v_b_;
};

/// Validates (λ, v_a, v_b); each must lie in [0, 1). Throws ValidationError.
StateParams make_state(double lambda, double v_a, double v_b);

/// Builds the state from squeezing r and mean thermal photon numbers.
StateParams make_state_from_physical(double r, double n_a, double n_b);

/// Correlation matrix of the state in (n, m, k) form.
///
/// Position block [[n, k], [k, m]], momentum block [[n, −k], [−k, m]];
/// vacuum is the identity.
struct TwoModeCovariance {
    double n = 1.0;
    double m = 1.0;
    double k = 0.0;

    Eigen::Matrix2d position() const;
    Eigen::Matrix2d momentum() const;
    /// Full 4×4 matrix in (q_A, q_B, p_A, p_B) ordering.
    Eigen::Matrix4d full() const;
    double block_determinant() const noexcept { return n * m - k * k; }
};

TwoModeCovariance covariance(const StateParams& state);

/// The symplectic matrix S_p that maps the state's correlation matrix to
/// diag(γ_A, γ_B, γ_A, γ_B); used to cross-check covariance().
Eigen::Matrix4d diagonalizing_symplectic(double r);

/// Thermal parameters of the two single-mode reduced states.
struct ReducedOccupations {
    double v_a_rd = 0.0;
    double v_b_rd = 0.0;
    double n_a_rd = 0.0;
    double n_b_rd = 0.0;
};

ReducedOccupations reduced_occupations(const StateParams& state);

/// Strict inseparability test λ > √(v_a·v_b); the boundary is separable.
bool is_entangled(const StateParams& state);

}  // namespace sqt
