#include "sqthermal/fock_oracle.hpp"
#include "sqthermal/measures.hpp"
#include "sqthermal/reoe_bound.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sqt;
using namespace sqt::fock;
using cd = std::complex<double>;

namespace {

const double kGridLambda[] = {0.1, 0.3, 0.5, 0.7};
const double kGridV[] = {0.0, 0.1, 0.3, 0.5};
constexpr double kNoBudget = 1.0;

double reduced_v(const SingleModeMatrix& rho) { return 1.0 - rho(0, 0); }

}  // namespace

TEST_CASE("thermal state") {
    const auto vac = thermal_state(0.0, 5);
    CHECK(vac(0, 0) == 1.0);
    CHECK(vac.sum() == 1.0);

    const auto th = thermal_state(0.5, 60);
    CHECK(th.trace() == doctest::Approx(1.0 - std::pow(0.5, 60)).epsilon(1e-15));
    CHECK(std::abs(entropy_numeric(th) - 2.0) <= 1e-6);
    CHECK(th(3, 3) == doctest::Approx(0.5 * 0.125).epsilon(1e-15));
    CHECK(th(2, 3) == 0.0);

    CHECK_THROWS_AS(thermal_state(1.0, 5), ValidationError);
    CHECK_THROWS_AS(thermal_state(-0.1, 5), ValidationError);
    CHECK_THROWS_AS(thermal_state(0.5, 0), ValidationError);
}

TEST_CASE("matrix exponential matches Eigen's implementation") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double scale : {0.01, 1.0, 5.0}) {
        Eigen::MatrixXd a(8, 8);
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                a(i, j) = scale * n(rng);
            }
        }
        const Eigen::MatrixXd ref = a.exp();
        CHECK((matrix_exponential(a) - ref).norm() <= 1e-12 * ref.norm());
        const Eigen::MatrixXd skew = a - a.transpose();
        const Eigen::MatrixXd u = matrix_exponential(skew);
        CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-12);
    }
    CHECK(matrix_exponential(Eigen::MatrixXd::Zero(3, 3)) == Eigen::MatrixXd::Identity(3, 3));
}

TEST_CASE("squeeze operator") {
    const auto id = squeeze_operator(0.0, 12);
    CHECK((id.to_dense() - Eigen::MatrixXd::Identity(144, 144)).norm() == 0.0);

    const int dim = 40;
    for (double r : {0.2, 0.6, 1.0}) {
        const auto s = squeeze_operator(r, dim);
        // Vacuum column: Schmidt series on |n, n⟩. The cutoff reflects
        // amplitude near n ≈ dim, so dim 40 is compared on n ≤ dim/2 and the
        // full column at dim 80.
        auto column_error = [r](const FockMatrix& m, int n_max) {
            double worst = 0.0;
            for (int n = 0; n <= n_max; ++n) {
                const double want = std::pow(std::tanh(r), n) / std::cosh(r);
                worst = std::max(worst, std::abs(m.element(n, n, 0, 0) - want));
            }
            return worst;
        };
        CHECK(column_error(s, dim / 2) <= 1e-8);
        CHECK(column_error(squeeze_operator(r, 2 * dim), 2 * dim - 1) <= 1e-8);
        CHECK(s.element(1, 0, 0, 0) == 0.0);

        // Unitarity on states with at most dim/2 photons in each mode.
        double defect = 0.0;
        for (int d = -(dim - 1); d <= dim - 1; ++d) {
            const Eigen::MatrixXd& b = s.block(d);
            const Eigen::MatrixXd g = b.transpose() * b;
            for (int p = 0; p < b.rows(); ++p) {
                const auto [i, j] = FockMatrix::basis(d, p);
                if (i > dim / 2 || j > dim / 2) {
                    continue;
                }
                for (int q = 0; q < b.rows(); ++q) {
                    const auto [k, l] = FockMatrix::basis(d, q);
                    if (k > dim / 2 || l > dim / 2) {
                        continue;
                    }
                    defect = std::max(defect, std::abs(g(p, q) - (p == q ? 1.0 : 0.0)));
                }
            }
        }
        CHECK(defect <= 1e-8);
    }
}

TEST_CASE("block storage agrees with the dense view") {
    const auto rho = build_state(make_state(0.4, 0.2, 0.1), 8, kNoBudget);
    const Eigen::MatrixXd dense = rho.to_dense();
    CHECK(dense.rows() == 64);
    CHECK((dense - dense.transpose()).norm() < 1e-14);
    CHECK(dense.trace() == doctest::Approx(rho.trace()).epsilon(1e-14));
    for (int ia = 0; ia < 8; ++ia) {
        for (int ib = 0; ib < 8; ++ib) {
            for (int ja = 0; ja < 8; ++ja) {
                for (int jb = 0; jb < 8; ++jb) {
                    CHECK(dense(ia * 8 + ib, ja * 8 + jb) == rho.element(ia, ib, ja, jb));
                }
            }
        }
    }
    CHECK(rho.element(1, 0, 0, 0) == 0.0);
    CHECK(rho.is_symmetric(1e-12));
}

TEST_CASE("build_state limits") {
    const int dim = 30;
    const auto prod = build_state(make_state(0, 0.3, 0.2), dim);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double want = 0.7 * std::pow(0.3, i) * 0.8 * std::pow(0.2, j);
            CHECK(prod.element(i, j, i, j) == doctest::Approx(want).epsilon(1e-13));
        }
    }
    CHECK(prod.element(1, 1, 0, 0) == 0.0);

    // Pure state is the projector onto the Schmidt vector.
    const double l = 0.5;
    const auto pure = build_state(make_state(l, 0, 0), dim);
    const double norm = 1.0 - l * l;
    for (int n = 0; n < 6; ++n) {
        for (int m = 0; m < 6; ++m) {
            CHECK(pure.element(n, n, m, m) ==
                  doctest::Approx(norm * std::pow(l, n + m)).epsilon(1e-10).scale(1e-3));
        }
    }
    CHECK(entropy_numeric(pure) < 1e-10);
}

TEST_CASE("partial trace") {
    const auto rho = build_state(make_state(0.6, 0, 0), 60);
    const auto a = partial_trace(rho, Mode::a);
    CHECK(a.trace() == doctest::Approx(rho.trace()).epsilon(1e-14));
    CHECK(reduced_v(a) == doctest::Approx(0.36).epsilon(1e-10));
    for (int n = 0; n < 10; ++n) {
        CHECK(a(n, n) == doctest::Approx(0.64 * std::pow(0.36, n)).epsilon(1e-10));
    }
    CHECK(std::abs(a(0, 1)) < 1e-15);

    // Product state factorizes exactly.
    const auto prod = build_state(make_state(0, 0.3, 0.2), 40);
    const auto b = partial_trace(prod, Mode::b);
    const auto th = thermal_state(0.2, 40);
    CHECK((b / b.trace() - th / th.trace()).norm() < 1e-14);

    const auto s = make_state(0.6, 0.2, 0.1);
    const auto red = reduced_occupations(s);
    const auto full = build_state(s, 40, kNoBudget);
    CHECK(std::abs(reduced_v(partial_trace(full, Mode::a)) - red.v_a_rd) <= 1e-6);
    CHECK(std::abs(reduced_v(partial_trace(full, Mode::b)) - red.v_b_rd) <= 1e-6);
}

TEST_CASE("entropy and reduced states on the oracle grid at dim 40") {
    double worst_entropy = 0.0;
    double worst_v = 0.0;
    for (double l : kGridLambda) {
        for (double va : kGridV) {
            for (double vb : kGridV) {
                const auto s = make_state(l, va, vb);
                const auto rho = build_state(s, 40, kNoBudget);
                const auto red = reduced_occupations(s);
                worst_entropy = std::max(worst_entropy, std::abs(entropy_numeric(rho) - state_entropy(s)));
                worst_v = std::max(worst_v, std::abs(reduced_v(partial_trace(rho, Mode::a)) - red.v_a_rd));
                worst_v = std::max(worst_v, std::abs(reduced_v(partial_trace(rho, Mode::b)) - red.v_b_rd));
            }
        }
    }
    CHECK(worst_entropy <= 1e-6);
    CHECK(worst_v <= 1e-6);
}

TEST_CASE("coherent kernel") {
    const auto s = make_state(0.6, 0.2, 0.1);
    const double c0 = 0.8 * 0.9 * 0.64 / (1 - 0.02 * 0.36);
    CHECK(std::abs(coherent_kernel(s, 0, 0, 0, 0) - c0) < 1e-15);

    // λ = 0 factorizes into thermal kernels (1−v)·exp(−|α|²/2 − |β|²/2 + v ᾱβ).
    const auto prod = make_state(0, 0.3, 0.4);
    const cd aa(0.3, 0.1), ab(-0.2, 0.4), ba(0.5, -0.3), bb(0.1, 0.2);
    auto single = [](double v, cd alpha, cd beta) {
        return (1 - v) * std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + v * std::conj(alpha) * beta);
    };
    CHECK(std::abs(coherent_kernel(prod, aa, ab, ba, bb) - single(0.3, aa, ba) * single(0.4, ab, bb)) < 1e-14);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    double worst = 0.0;
    for (double l : kGridLambda) {
        for (double va : kGridV) {
            for (double vb : kGridV) {
                const auto st = make_state(l, va, vb);
                const auto rho = build_state(st, 40, kNoBudget);
                for (int k = 0; k < 3; ++k) {
                    const cd a1(u(rng), u(rng)), a2(u(rng), u(rng)), b1(u(rng), u(rng)), b2(u(rng), u(rng));
                    worst = std::max(worst, std::abs(coherent_kernel(st, a1, a2, b1, b2)
                                                     - coherent_matrix_element(rho, a1, a2, b1, b2)));
                }
            }
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("relative entropy against the closed form") {
    const auto s = make_state(0.5, 0.3, 0.1);
    const int dim = recommended_dim(s);
    const auto rho = build_state(s, dim);
    CHECK(std::abs(relative_entropy_numeric(rho, rho)) < 1e-10);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.01, 0.5);
    double worst = 0.0;
    for (double l : kGridLambda) {
        for (double va : kGridV) {
            for (double vb : kGridV) {
                const auto st = make_state(l, va, vb);
                for (int k = 0; k < 2; ++k) {
                    const auto e = make_edge_point(u(rng), u(rng));
                    const int d = std::max({40, recommended_dim(st), recommended_dim(e.as_state())});
                    const double numeric = relative_entropy_numeric(build_state(st, d), build_edge_state(e, d));
                    CHECK(numeric >= -1e-9);
                    worst = std::max(worst, std::abs(numeric - relative_entropy_to(st, e)));
                }
            }
        }
    }
    CHECK(worst <= 1e-5);

    // Support mismatch: a pure σ cannot absorb a mixed ρ.
    const auto pure = build_state(make_state(0.5, 0, 0), 40);
    const auto mixed = build_state(make_state(0.5, 0.2, 0.2), 40, kNoBudget);
    CHECK(std::isinf(relative_entropy_numeric(mixed, pure)));
    CHECK(relative_entropy_numeric(pure, mixed) > 0.0);
}

TEST_CASE("truncation budget") {
    const auto s = make_state(0.7, 0, 0);
    CHECK_THROWS_AS(build_state(s, 10), TruncationError);
    try {
        build_state(s, 10);
    } catch (const TruncationError& e) {
        CHECK(e.recommended_dim() > 10);
        CHECK_NOTHROW(build_state(s, e.recommended_dim()));
    }
    CHECK(recommended_dim(make_state(0, 0, 0)) == 30);
    CHECK(truncation_tail(s, 40) == doctest::Approx(2 * std::pow(0.49, 40)).epsilon(1e-12));
}

TEST_CASE("entropy_numeric rejects asymmetric input") {
    SingleModeMatrix m = SingleModeMatrix::Identity(3, 3) / 3.0;
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(entropy_numeric(m), std::invalid_argument);
}
