#pragma once

#include "sqthermal/log_base.hpp"
#include "sqthermal/reoe_bound.hpp"
#include "sqthermal/state.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sqt {

/// Every quantity computed for one state.
struct MeasureReport {
    double lambda = 0.0;
    double v_a = 0.0;
    double v_b = 0.0;
    double r = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;
    bool separable = true;
    double entropy = 0.0;
    double e_g = 0.0;
    double r_g = 0.0;
    double e_ur = 0.0;
    EurDiagnostics eur_diagnostics;
    double eur_v_a_tilde = 0.0;
    double eur_v_b_tilde = 0.0;
    double i_a = 0.0;
    double i_b = 0.0;
    LogBase log_base = LogBase::two;
};

/// Computes all measures. Optimizer non-convergence is reported through
/// eur_diagnostics.converged rather than thrown. With `include_eur` false the
/// optimizer is skipped and e_ur stays 0.
MeasureReport measure(const StateParams& state, const EurOptions& options = {},
                      bool include_eur = true);

/// JSON object with lower_snake_case keys mirroring MeasureReport.
std::string to_json(const MeasureReport& report);
std::string to_text(const MeasureReport& report);

/// Locale-independent shortest form with 12 significant digits.
std::string format_number(double value);

enum class Spacing { log, linear };

/// A sweep over N_A at fixed λ and fixed ratio N_B/N_A.
struct SweepSpec {
    double lambda = 0.99;
    double ratio = 1.0;
    double n_a_min = 0.01;
    double n_a_max = 100.0;
    int steps = 200;
    Spacing spacing = Spacing::log;
    /// Measure columns to emit, a subset of {entropy, e_g, r_g, e_ur, i_a, i_b}.
    /// Empty means all.
    std::vector<std::string> outputs;
};

/// Throws ValidationError naming the offending field.
void validate(const SweepSpec& spec);

/// Sweeps reconstructing the two figure configurations: λ = 0.99 with
/// N_B/N_A ∈ {0.5, 1, 1.5, 2} (first) or 0.5 (second), N_A log-spaced over
/// [0.01, 100] in 200 steps.
std::vector<SweepSpec> figure_presets(int figure);

std::vector<double> sweep_grid(const SweepSpec& spec);

/// One report per grid point, in ascending N_A. `threads` > 1 splits rows
/// across worker threads; the output order and values do not depend on it.
std::vector<MeasureReport> run_sweep(const SweepSpec& spec, const EurOptions& options = {},
                                     int threads = 1);

inline constexpr const char* kCsvHeader =
    "n_a,n_b,lambda,v_a,v_b,separable,entropy,e_g,r_g,e_ur,i_a,i_b,converged";

void write_csv(std::ostream& out, const SweepSpec& spec,
               const std::vector<MeasureReport>& rows, LogBase base);

// ---------------------------------------------------------------------------
// Fock-space verification of the closed forms.

struct VerifyOptions {
    std::vector<StateParams> states;
    /// Fixed truncation; when unset each state gets max(40, recommended_dim).
    std::optional<int> dim;
    /// Lifts the λ ≤ 0.7, v ≤ 0.5 cap.
    bool slow = false;
    int edge_points = 5;
    std::uint64_t seed = 20240611;
    LogBase base = LogBase::two;
};

/// λ ∈ {0.1, 0.3, 0.5, 0.7} × v_a, v_b ∈ {0, 0.1, 0.3, 0.5}.
std::vector<StateParams> default_verify_grid();

struct CheckSummary {
    std::string name;
    double tolerance = 0.0;
    double max_deviation = 0.0;
    std::optional<StateParams> worst;
    int samples = 0;

    bool passed() const noexcept { return max_deviation <= tolerance; }
};

struct VerifyReport {
    std::vector<CheckSummary> checks;
    /// Set when a state could not be checked at all (e.g. truncation budget).
    std::optional<std::string> failure;
    std::optional<StateParams> failing_state;
    int max_dim_used = 0;

    bool passed() const;
};

/// Throws ValidationError if a state exceeds the oracle cap without `slow`.
VerifyReport run_verification(const VerifyOptions& options);

std::string to_text(const VerifyReport& report);

}  // namespace sqt
