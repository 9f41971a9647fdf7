#include "sqthermal/measures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqt {
namespace {

double bosonic_entropy_nats(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    // (x+1) ln(x+1) − x ln x = ln(1+x) + x ln(1 + 1/x)
    return std::log1p(x) + x * std::log1p(1.0 / x);
}

double clip_at_zero(double& raw) {
    if (raw == 0.0) {
        raw = 0.0;  // drop a negative zero
    }
    return raw > 0.0 ? raw : 0.0;
}

}  // namespace

double bosonic_entropy(double x, LogBase base) {
    if (!std::isfinite(x) || x < 0.0) {
        throw std::domain_error("bosonic_entropy: argument must be finite and nonnegative");
    }
    return from_nats(bosonic_entropy_nats(x), base);
}

double state_entropy(const StateParams& state, LogBase base) {
    return bosonic_entropy(state.n_a(), base) + bosonic_entropy(state.n_b(), base);
}

GeofResult geof(const StateParams& state, LogBase base) {
    GeofResult out;
    if (!is_entangled(state)) {
        return out;
    }
    // tanh(r − r₀) = (λ − s)/(1 − λ s) avoids the cancellation in r − r₀,
    // and λ > s guarantees a strictly positive result.
    const double s = state.noise_lambda();
    const double q = (state.lambda() - s) / (1.0 - state.lambda() * s);
    out.entangled = true;
    out.r_g = artanh(q);
    out.value = bosonic_entropy(q * q / (1.0 - q * q), base);
    return out;
}

double geof_rg_from_determinant_condition(const TwoModeCovariance& cov) {
    const double sum = cov.n + cov.m;
    const double rhs = cov.block_determinant() + 1.0;
    auto f = [&](double u) { return sum * std::cosh(u) - 2.0 * cov.k * std::sinh(u) - rhs; };

    // f is convex with its minimum at tanh u* = 2k/(n+m); the smaller root
    // lives on the decreasing branch [0, u*].
    const double ratio = 2.0 * cov.k / sum;
    if (!(ratio > 0.0) || f(0.0) <= 0.0) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = ratio < 1.0 ? artanh(ratio) : 50.0;
    // A minimum within rounding noise of zero is the tangent (pure state)
    // double root; bisection there is only accurate to sqrt(eps).
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (sum + rhs);
    const double f_min = f(hi);
    if (std::abs(f_min) <= noise) {
        return 0.5 * hi;
    }
    if (f_min > 0.0) {
        return 0.0;
    }
    constexpr double kTolerance = 1e-12;
    while (hi - lo > kTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.25 * (lo + hi);
}

CoherentInfoResult coherent_information(const StateParams& state, LogBase base) {
    const auto reduced = reduced_occupations(state);
    const double joint = state_entropy(state, base);

    CoherentInfoResult out;
    out.raw_a = bosonic_entropy(reduced.n_a_rd, base) - joint;
    out.raw_b = bosonic_entropy(reduced.n_b_rd, base) - joint;
    out.i_a = clip_at_zero(out.raw_a);
    out.i_b = clip_at_zero(out.raw_b);
    return out;
}

}  // namespace sqt
