#include "sqthermal/fock_oracle.hpp"

#include "sqthermal/measures.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace sqt::fock {
namespace {

constexpr double kEigenClamp = 1e-14;
constexpr double kSupportTolerance = 1e-12;

void require_dim(int dim, int minimum) {
    if (dim < minimum) {
        throw ValidationError("dim", "must be at least " + std::to_string(minimum));
    }
}

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
    }
}

// Σ −p ln p over the symmetric matrix's eigenvalues, clamped below kEigenClamp.
double block_entropy_nats(const Eigen::MatrixXd& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    double out = 0.0;
    for (double p : solver.eigenvalues()) {
        if (p > kEigenClamp) {
            out -= p * std::log(p);
        }
    }
    return out;
}

double thermal_log_weight(double v, int photons) {
    if (photons == 0) {
        return std::log1p(-v);
    }
    return std::log1p(-v) + photons * std::log(v);  // −inf when v = 0
}

}  // namespace

FockMatrix::FockMatrix(int dim) : dim_(dim) {
    require_dim(dim, 1);
    blocks_.reserve(static_cast<std::size_t>(block_count()));
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
        const int size = dim - std::abs(d);
        blocks_.emplace_back(Eigen::MatrixXd::Zero(size, size));
    }
}

std::size_t FockMatrix::index(int d) const {
    if (std::abs(d) >= dim_) {
        throw std::out_of_range("FockMatrix: photon-number difference outside the truncation");
    }
    return static_cast<std::size_t>(d + dim_ - 1);
}

double FockMatrix::element(int i_a, int i_b, int j_a, int j_b) const {
    const int d = i_a - i_b;
    if (d != j_a - j_b || std::max({i_a, i_b, j_a, j_b}) >= dim_
        || std::min({i_a, i_b, j_a, j_b}) < 0) {
        return 0.0;
    }
    const int shift = std::max(d, 0);
    return block(d)(i_a - shift, j_a - shift);
}

Eigen::MatrixXd FockMatrix::to_dense() const {
    const Eigen::Index n = static_cast<Eigen::Index>(dim_) * dim_;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int d = -(dim_ - 1); d <= dim_ - 1; ++d) {
        const auto& b = block(d);
        for (Eigen::Index p = 0; p < b.rows(); ++p) {
            const auto [ia, ib] = basis(d, static_cast<int>(p));
            for (Eigen::Index q = 0; q < b.cols(); ++q) {
                const auto [ja, jb] = basis(d, static_cast<int>(q));
                out(ia * dim_ + ib, ja * dim_ + jb) = b(p, q);
            }
        }
    }
    return out;
}

double FockMatrix::trace() const {
    double out = 0.0;
    for (const auto& b : blocks_) {
        out += b.trace();
    }
    return out;
}

bool FockMatrix::is_symmetric(double tolerance) const {
    for (const auto& b : blocks_) {
        if (b.size() > 0 && (b - b.transpose()).cwiseAbs().maxCoeff() > tolerance) {
            return false;
        }
    }
    return true;
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("matrix_exponential: matrix must be square");
    }
    const Eigen::Index n = a.rows();
    if (n == 0) {
        return a;
    }
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);

    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) {
            break;
        }
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

SingleModeMatrix thermal_state(double v, int dim) {
    if (!(v >= 0.0 && v < 1.0)) {
        throw ValidationError("v", "must lie in [0, 1)");
    }
    require_dim(dim, 1);
    Eigen::VectorXd diag(dim);
    double weight = 1.0 - v;
    for (int m = 0; m < dim; ++m) {
        diag[m] = weight;
        weight *= v;
    }
    return diag.asDiagonal();
}

FockMatrix squeeze_operator(double r, int dim) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw ValidationError("r", "must be finite and nonnegative");
    }
    require_dim(dim, 2);
    FockMatrix out(dim);
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
        const int size = dim - std::abs(d);
        Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(size, size);
        // A†B† |i, j⟩ = √((i+1)(j+1)) |i+1, j+1⟩
        for (int p = 0; p + 1 < size; ++p) {
            const auto [i, j] = FockMatrix::basis(d, p);
            const double amplitude = r * std::sqrt(static_cast<double>(i + 1) * (j + 1));
            generator(p + 1, p) = amplitude;
            generator(p, p + 1) = -amplitude;
        }
        out.block(d) = matrix_exponential(generator);
    }
    return out;
}

double truncation_tail(const StateParams& state, int dim) {
    const auto reduced = reduced_occupations(state);
    return std::pow(reduced.v_a_rd, dim) + std::pow(reduced.v_b_rd, dim);
}

int recommended_dim(const StateParams& state, double tolerance) {
    const auto reduced = reduced_occupations(state);
    const double occupation = std::max(reduced.n_a_rd, reduced.n_b_rd);
    int dim = std::max(30, static_cast<int>(std::ceil(8.0 * (1.0 + occupation))));
    const double v = std::max(reduced.v_a_rd, reduced.v_b_rd);
    if (v > 0.0) {
        const double needed = std::log(0.5 * tolerance) / std::log(v);
        dim = std::max(dim, static_cast<int>(std::ceil(needed)));
    }
    return dim;
}

FockMatrix build_state(const StateParams& state, int dim, double tail_tolerance) {
    require_dim(dim, 2);
    const double tail = truncation_tail(state, dim);
    if (tail > tail_tolerance) {
        std::ostringstream msg;
        msg << "build_state: truncation at dim " << dim << " leaves estimated tail mass " << tail
            << " > " << tail_tolerance << " for (lambda, v_a, v_b) = (" << state.lambda() << ", "
            << state.v_a() << ", " << state.v_b() << "); use dim >= "
            << recommended_dim(state, tail_tolerance);
        throw TruncationError(msg.str(), recommended_dim(state, tail_tolerance));
    }

    const FockMatrix squeezer = squeeze_operator(state.r(), dim);
    FockMatrix out(dim);
    FockMatrix::Spectrum spectrum;
    spectrum.vectors.reserve(static_cast<std::size_t>(out.block_count()));
    spectrum.log_values.reserve(static_cast<std::size_t>(out.block_count()));
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
        const int size = dim - std::abs(d);
        Eigen::VectorXd weights(size);
        Eigen::VectorXd logs(size);
        for (int p = 0; p < size; ++p) {
            const auto [i, j] = FockMatrix::basis(d, p);
            logs[p] = thermal_log_weight(state.v_a(), i) + thermal_log_weight(state.v_b(), j);
            weights[p] = std::exp(logs[p]);
        }
        const auto& u = squeezer.block(d);
        out.block(d) = u * weights.asDiagonal() * u.transpose();
        spectrum.vectors.push_back(u);
        spectrum.log_values.push_back(std::move(logs));
    }
    out.set_spectrum(std::move(spectrum));
    return out;
}

FockMatrix build_edge_state(const SeparableEdgePoint& edge, int dim, double tail_tolerance) {
    return build_state(edge.as_state(), dim, tail_tolerance);
}

std::complex<double> coherent_kernel(const StateParams& state, std::complex<double> alpha_a,
                                     std::complex<double> alpha_b, std::complex<double> beta_a,
                                     std::complex<double> beta_b) {
    const double l = state.lambda();
    const double va = state.v_a();
    const double vb = state.v_b();
    const double denom = 1.0 - va * vb * l * l;
    const double c0 = (1.0 - va) * (1.0 - vb) * (1.0 - l * l) / denom;
    const double tau = l * (1.0 - va * vb) / denom;
    const double omega_a = va * (1.0 - l * l) / denom;
    const double omega_b = vb * (1.0 - l * l) / denom;

    const double norms = std::norm(alpha_a) + std::norm(alpha_b) + std::norm(beta_a)
                         + std::norm(beta_b);
    const std::complex<double> exponent =
        -0.5 * norms + tau * (std::conj(alpha_a) * std::conj(alpha_b) + beta_a * beta_b)
        + omega_a * std::conj(alpha_a) * beta_a + omega_b * std::conj(alpha_b) * beta_b;
    return c0 * std::exp(exponent);
}

Eigen::VectorXcd coherent_vector(std::complex<double> alpha, int dim) {
    require_dim(dim, 1);
    Eigen::VectorXcd out(dim);
    out[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) {
        out[n] = out[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    return out;
}

std::complex<double> coherent_matrix_element(const FockMatrix& rho,
                                             std::complex<double> alpha_a,
                                             std::complex<double> alpha_b,
                                             std::complex<double> beta_a,
                                             std::complex<double> beta_b) {
    const int dim = rho.dim();
    const Eigen::VectorXcd aa = coherent_vector(alpha_a, dim);
    const Eigen::VectorXcd ab = coherent_vector(alpha_b, dim);
    const Eigen::VectorXcd ba = coherent_vector(beta_a, dim);
    const Eigen::VectorXcd bb = coherent_vector(beta_b, dim);

    std::complex<double> out = 0.0;
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
        const auto& block = rho.block(d);
        const int size = static_cast<int>(block.rows());
        Eigen::VectorXcd left(size);
        Eigen::VectorXcd right(size);
        for (int p = 0; p < size; ++p) {
            const auto [i, j] = FockMatrix::basis(d, p);
            left[p] = aa[i] * ab[j];
            right[p] = ba[i] * bb[j];
        }
        out += left.dot(block.cast<std::complex<double>>() * right);  // dot conjugates left
    }
    return out;
}

SingleModeMatrix partial_trace(const FockMatrix& rho, Mode keep) {
    const int dim = rho.dim();
    SingleModeMatrix out = SingleModeMatrix::Zero(dim, dim);
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
        const auto& block = rho.block(d);
        for (Eigen::Index p = 0; p < block.rows(); ++p) {
            const auto [ia, ib] = FockMatrix::basis(d, static_cast<int>(p));
            for (Eigen::Index q = 0; q < block.cols(); ++q) {
                const auto [ja, jb] = FockMatrix::basis(d, static_cast<int>(q));
                if (keep == Mode::a && ib == jb) {
                    out(ia, ja) += block(p, q);
                } else if (keep == Mode::b && ia == ja) {
                    out(ib, jb) += block(p, q);
                }
            }
        }
    }
    return out;
}

double entropy_numeric(const FockMatrix& rho, LogBase base) {
    double nats = 0.0;
    for (int d = -(rho.dim() - 1); d <= rho.dim() - 1; ++d) {
        require_symmetric(rho.block(d), "entropy_numeric");
        nats += block_entropy_nats(rho.block(d));
    }
    return from_nats(nats, base);
}

double entropy_numeric(const SingleModeMatrix& rho, LogBase base) {
    require_symmetric(rho, "entropy_numeric");
    return from_nats(block_entropy_nats(rho), base);
}

double relative_entropy_numeric(const FockMatrix& rho, const FockMatrix& sigma, LogBase base) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("relative_entropy_numeric: truncation dims differ");
    }
    const int dim = rho.dim();
    double rho_log_rho = 0.0;
    double rho_log_sigma = 0.0;
    double kernel_weight = 0.0;
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
        const auto& r = rho.block(d);
        const auto& s = sigma.block(d);
        require_symmetric(r, "relative_entropy_numeric");
        require_symmetric(s, "relative_entropy_numeric");
        rho_log_rho -= block_entropy_nats(r);

        Eigen::MatrixXd vectors;
        Eigen::VectorXd logs;
        if (sigma.spectrum()) {
            const auto index = static_cast<std::size_t>(d + dim - 1);
            vectors = sigma.spectrum()->vectors[index];
            logs = sigma.spectrum()->log_values[index];
        } else {
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
            vectors = solver.eigenvectors();
            logs.resize(s.rows());
            for (Eigen::Index k = 0; k < s.rows(); ++k) {
                const double value = solver.eigenvalues()[k];
                logs[k] = value > kEigenClamp ? std::log(value)
                                              : -std::numeric_limits<double>::infinity();
            }
        }
        const Eigen::VectorXd weights = (vectors.transpose() * r * vectors).diagonal();
        for (Eigen::Index k = 0; k < weights.size(); ++k) {
            if (std::isinf(logs[k])) {
                kernel_weight += std::max(weights[k], 0.0);
            } else {
                rho_log_sigma += weights[k] * logs[k];
            }
        }
    }
    if (kernel_weight > kSupportTolerance) {
        return std::numeric_limits<double>::infinity();
    }
    return from_nats(rho_log_rho - rho_log_sigma, base);
}

}  // namespace sqt::fock
