#include "sqthermal/state.hpp"

#include <cmath>
#include <sstream>

namespace sqt {
namespace {

void require_unit_interval(const char* field, double value, double upper = 1.0) {
    if (!std::isfinite(value)) {
        throw ValidationError(field, "must be finite");
    }
    if (value < 0.0 || value >= upper) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "value " << value << " outside [0, 1)";
        throw ValidationError(field, msg.str());
    }
}

void require_nonnegative(const char* field, double value) {
    if (!std::isfinite(value)) {
        throw ValidationError(field, "must be finite");
    }
    if (value < 0.0) {
        throw ValidationError(field, "must be nonnegative");
    }
}

}  // namespace

double artanh(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    return 0.5 * std::log1p(2.0 * x / (1.0 - x));
}

StateParams make_state(double lambda, double v_a, double v_b) {
    require_unit_interval("lambda", lambda, kMaxLambda);
    require_unit_interval("v_a", v_a);
    require_unit_interval("v_b", v_b);
    return StateParams(lambda, v_a, v_b);
}

StateParams make_state_from_physical(double r, double n_a, double n_b) {
    require_nonnegative("r", r);
    require_nonnegative("n_a", n_a);
    require_nonnegative("n_b", n_b);
    const double lambda = std::tanh(r);
    if (lambda >= kMaxLambda) {
        throw ValidationError("r", "squeezing too large to represent (tanh r rounds to 1)");
    }
    return make_state(lambda, n_a / (n_a + 1.0), n_b / (n_b + 1.0));
}

Eigen::Matrix2d TwoModeCovariance::position() const {
    Eigen::Matrix2d out;
    out << n, k, k, m;
    return out;
}

Eigen::Matrix2d TwoModeCovariance::momentum() const {
    Eigen::Matrix2d out;
    out << n, -k, -k, m;
    return out;
}

Eigen::Matrix4d TwoModeCovariance::full() const {
    Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
    out.topLeftCorner<2, 2>() = position();
    out.bottomRightCorner<2, 2>() = momentum();
    return out;
}

TwoModeCovariance covariance(const StateParams& state) {
    // cosh 2r and sinh 2r straight from λ = tanh r.
    const double l2 = state.lambda() * state.lambda();
    const double cosh2r = (1.0 + l2) / (1.0 - l2);
    const double sinh2r = 2.0 * state.lambda() / (1.0 - l2);
    const double total = state.n_a() + state.n_b() + 1.0;
    const double diff = state.n_a() - state.n_b();
    return {total * cosh2r + diff, total * cosh2r - diff, total * sinh2r};
}

Eigen::Matrix4d diagonalizing_symplectic(double r) {
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
    out.topLeftCorner<2, 2>() << c, -s, -s, c;
    out.bottomRightCorner<2, 2>() << c, s, s, c;
    return out;
}

ReducedOccupations reduced_occupations(const StateParams& state) {
    const double l2 = state.lambda() * state.lambda();
    const double va = state.v_a();
    const double vb = state.v_b();

    ReducedOccupations out;
    out.v_a_rd = (va * (1.0 - vb) + l2 * (1.0 - va)) / (1.0 - vb + l2 * vb * (1.0 - va));
    out.v_b_rd = (vb * (1.0 - va) + l2 * (1.0 - vb)) / (1.0 - va + l2 * va * (1.0 - vb));
    // N_rd = N cosh² r + (N' + 1) sinh² r, kept in this form for accuracy near λ → 1.
    out.n_a_rd = (state.n_a() + l2 / (1.0 - vb)) / (1.0 - l2);
    out.n_b_rd = (state.n_b() + l2 / (1.0 - va)) / (1.0 - l2);
    return out;
}

bool is_entangled(const StateParams& state) {
    return state.lambda() > state.noise_lambda();
}

}  // namespace sqt
