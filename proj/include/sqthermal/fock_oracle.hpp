#pragma once

#include "sqthermal/log_base.hpp"
#include "sqthermal/reoe_bound.hpp"
#include "sqthermal/state.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sqt::fock {

/// Single-mode operator on photon numbers 0..dim−1.
using SingleModeMatrix = Eigen::MatrixXd;

/// Truncation too coarse for the requested state.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int recommended)
        : std::runtime_error(what), recommended_dim_(recommended) {}

    int recommended_dim() const noexcept { return recommended_dim_; }

private:
    int recommended_dim_;
};

/// Two-mode operator on the truncated basis |i, j⟩, 0 ≤ i, j < dim, that
/// conserves the photon-number difference i − j.
///
/// Held as one dense block per difference d ∈ [−(dim−1), dim−1]; inside a block
/// the basis runs through (i, j) = (i₀ + p, j₀ + p) with i₀ = max(d, 0),
/// j₀ = max(−d, 0). Everything this family needs (thermal products, the
/// two-mode squeezer, their products) has this structure.
class FockMatrix {
public:
    /// Spectral factorization blocks = V·diag(e^{log_values})·Vᵀ, kept when
    /// the eigenvalues are known in closed form and too small to be
    /// recovered by an eigensolver.
    struct Spectrum {
        std::vector<Eigen::MatrixXd> vectors;
        std::vector<Eigen::VectorXd> log_values;  // natural log, may be −inf
    };

    explicit FockMatrix(int dim);

    int dim() const noexcept { return dim_; }
    int block_count() const noexcept { return 2 * dim_ - 1; }

    /// Block for photon-number difference d.
    const Eigen::MatrixXd& block(int d) const { return blocks_.at(index(d)); }
    Eigen::MatrixXd& block(int d) { return blocks_.at(index(d)); }

    /// Photon numbers (i, j) of basis element p inside block d.
    static std::pair<int, int> basis(int d, int p) noexcept {
        return {std::max(d, 0) + p, std::max(-d, 0) + p};
    }

    /// ⟨i_a, i_b| M |j_a, j_b⟩.
    double element(int i_a, int i_b, int j_a, int j_b) const;

    /// Dense dim²×dim² matrix, row index i_a·dim + i_b. Small dims only.
    Eigen::MatrixXd to_dense() const;

    double trace() const;
    bool is_symmetric(double tolerance) const;

    const std::optional<Spectrum>& spectrum() const noexcept { return spectrum_; }
    void set_spectrum(Spectrum spectrum) { spectrum_ = std::move(spectrum); }

private:
    std::size_t index(int d) const;

    int dim_;
    std::vector<Eigen::MatrixXd> blocks_;
    std::optional<Spectrum> spectrum_;
};

/// Scaling and squaring with a Taylor inner step; ~1e-15 relative accuracy.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

/// diag((1−v)·vᵐ), m = 0..dim−1. Throws ValidationError for v ∉ [0, 1) or dim < 1.
SingleModeMatrix thermal_state(double v, int dim);

/// exp(r(A†B† − AB)) on the truncated space, exponentiated block by block.
FockMatrix squeeze_operator(double r, int dim);

/// Tail-mass estimate v_rd,A^dim + v_rd,B^dim: the weight of the exact
/// reduced states beyond the cutoff.
double truncation_tail(const StateParams& state, int dim);

/// Smallest cutoff with tail below `tolerance`, and at least
/// max(30, 8·(1 + max N_rd)).
int recommended_dim(const StateParams& state, double tolerance = 1e-8);

/// S₂(r)·(ρ_th(v_a) ⊗ ρ_th(v_b))·S₂†(r) truncated at `dim`, with its spectral
/// factorization attached. Throws TruncationError if the tail estimate exceeds
/// `tail_tolerance`.
FockMatrix build_state(const StateParams& state, int dim, double tail_tolerance = 1e-8);

/// The separable comparison state of an edge point.
FockMatrix build_edge_state(const SeparableEdgePoint& edge, int dim,
                            double tail_tolerance = 1e-8);

/// Closed-form coherent-state kernel ⟨α_A, α_B| ρ |β_A, β_B⟩.
std::complex<double> coherent_kernel(const StateParams& state, std::complex<double> alpha_a,
                                     std::complex<double> alpha_b, std::complex<double> beta_a,
                                     std::complex<double> beta_b);

/// Truncated coherent-state amplitudes e^{−|α|²/2} αⁿ/√n!, n < dim.
Eigen::VectorXcd coherent_vector(std::complex<double> alpha, int dim);

/// ⟨α_A, α_B| M |β_A, β_B⟩ from the matrix using truncated coherent vectors.
std::complex<double> coherent_matrix_element(const FockMatrix& rho,
                                             std::complex<double> alpha_a,
                                             std::complex<double> alpha_b,
                                             std::complex<double> beta_a,
                                             std::complex<double> beta_b);

enum class Mode { a, b };

/// Reduced state of the kept mode.
SingleModeMatrix partial_trace(const FockMatrix& rho, Mode keep);

/// −Σ p log p over the spectrum; eigenvalues below 1e-14 count as zero.
/// Throws std::invalid_argument for non-symmetric input.
double entropy_numeric(const FockMatrix& rho, LogBase base = LogBase::two);
double entropy_numeric(const SingleModeMatrix& rho, LogBase base = LogBase::two);

/// Tr ρ(log ρ − log σ). Returns +infinity when ρ has weight above 1e-12 on
/// the kernel of σ. log σ comes from σ's attached spectrum when present,
/// otherwise from its eigendecomposition with the 1e-14 clamp.
double relative_entropy_numeric(const FockMatrix& rho, const FockMatrix& sigma,
                                LogBase base = LogBase::two);

// ---------------------------------------------------------------------------
// Pure-state positive-semidefiniteness search for the Gaussian EoF.

struct PsdGrid {
    /// Number of coarse steps in s over [0, r].
    int s_steps = 64;
    /// Points per axis of the coarse (ln x, ln y) grid over [−2, 2]; odd so 1 is on it.
    int xy_points = 41;
    /// Local refinement passes; each shrinks the cell by `refine_factor`.
    int refine_levels = 2;
    int refine_factor = 10;
    double s_tolerance = 1e-12;
};

struct PsdSearchResult {
    double s_star = 0.0;
    /// Step sizes: s scan, then final ln x and ln y cells.
    double s_resolution = 0.0;
    double log_x_resolution = 0.0;
    double log_y_resolution = 0.0;
    double witness_x = 1.0;
    double witness_y = 1.0;
};

/// Minimum eigenvalue allowed on the PSD tests.
inline constexpr double kPsdTolerance = -1e-9;

/// True when γ_q − X(s,x,y) ⪰ 0 and γ_p − X(s,x,y)⁻¹ ⪰ 0, with
/// X = y·[[x cosh 2s, sinh 2s], [sinh 2s, cosh 2s / x]].
bool pure_state_fits(const TwoModeCovariance& cov, double s, double x, double y);

/// Smallest physical squeezing s of a pure Gaussian state X ⊕ X⁻¹ that fits
/// under the covariance, found by grid search plus bisection.
/// Throws std::invalid_argument for separable covariances (feasible at s = 0)
/// and std::logic_error if even s = r with x = y = 1 does not fit.
PsdSearchResult geof_psd_search(const TwoModeCovariance& cov, const PsdGrid& grid = {});

}  // namespace sqt::fock
