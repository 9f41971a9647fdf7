#pragma once

#include "sqthermal/log_base.hpp"
#include "sqthermal/state.hpp"

namespace sqt {

/// g(x) = (x+1) log(x+1) − x log x, the entropy of a thermal mode with mean
/// photon number x. g(0) = 0. Throws std::domain_error for x < 0 or non-finite x.
double bosonic_entropy(double x, LogBase base = LogBase::two);

/// Von Neumann entropy g(N_A) + g(N_B); the squeezing is unitary and drops out.
double state_entropy(const StateParams& state, LogBase base = LogBase::two);

struct GeofResult {
    double value = 0.0;
    /// Squeezing of the least entangled compatible pure state, r − r₀ clamped at 0.
    double r_g = 0.0;
    bool entangled = false;
};

/// Gaussian entanglement of formation g(sinh² r_g), r_g = r − r₀.
GeofResult geof(const StateParams& state, LogBase base = LogBase::two);

/// Solves the x = y = 1 determinant condition
///     (n+m) cosh u − 2k sinh u = nm − k² + 1
/// by bisection for the smaller root u and returns the physical squeezing u/2.
/// The angle of the pure-state correlation block is twice the squeezing
/// parameter (a two-mode squeezed vacuum with squeezing s has entries
/// cosh 2s, sinh 2s). Returns 0 when the smaller root is not positive.
double geof_rg_from_determinant_condition(const TwoModeCovariance& cov);

struct CoherentInfoResult {
    double i_a = 0.0;
    double i_b = 0.0;
    /// S(ρ_A) − S(ρ) and S(ρ_B) − S(ρ) before clipping at zero.
    double raw_a = 0.0;
    double raw_b = 0.0;
};

CoherentInfoResult coherent_information(const StateParams& state, LogBase base = LogBase::two);

}  // namespace sqt
