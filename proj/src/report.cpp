#include "sqthermal/report.hpp"

#include "sqthermal/fock_oracle.hpp"
#include "sqthermal/measures.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace sqt {
namespace {

constexpr std::array<const char*, 6> kMeasureColumns{"entropy", "e_g", "r_g",
                                                     "e_ur",    "i_a", "i_b"};

bool wants(const std::vector<std::string>& outputs, const std::string& name) {
    return outputs.empty() || std::find(outputs.begin(), outputs.end(), name) != outputs.end();
}

std::string state_triple(const StateParams& s) {
    return "(" + format_number(s.lambda()) + ", " + format_number(s.v_a()) + ", "
           + format_number(s.v_b()) + ")";
}

void note(CheckSummary& check, double deviation, const StateParams& state) {
    ++check.samples;
    if (!(deviation <= check.max_deviation)) {  // NaN counts as worst
        check.max_deviation = std::isnan(deviation) ? std::numeric_limits<double>::infinity()
                                                    : deviation;
        check.worst = state;
    }
}

CheckSummary make_check(std::string name, double tolerance) {
    CheckSummary out;
    out.name = std::move(name);
    out.tolerance = tolerance;
    return out;
}

}  // namespace

MeasureReport measure(const StateParams& state, const EurOptions& options, bool include_eur) {
    MeasureReport out;
    out.lambda = state.lambda();
    out.v_a = state.v_a();
    out.v_b = state.v_b();
    out.r = state.r();
    out.n_a = state.n_a();
    out.n_b = state.n_b();
    out.log_base = options.base;
    out.separable = !is_entangled(state);
    out.entropy = state_entropy(state, options.base);

    const auto g = geof(state, options.base);
    out.e_g = g.value;
    out.r_g = g.r_g;

    if (include_eur) {
        const auto eur = optimize_eur_best_effort(state, options);
        out.e_ur = eur.value;
        out.eur_diagnostics = eur.diagnostics;
        out.eur_v_a_tilde = eur.argmax.v_a_tilde();
        out.eur_v_b_tilde = eur.argmax.v_b_tilde();
    } else {
        out.eur_diagnostics.converged = true;
    }

    const auto info = coherent_information(state, options.base);
    out.i_a = info.i_a;
    out.i_b = info.i_b;
    return out;
}

std::string to_json(const MeasureReport& report) {
    nlohmann::ordered_json j;
    j["lambda"] = report.lambda;
    j["v_a"] = report.v_a;
    j["v_b"] = report.v_b;
    j["r"] = report.r;
    j["n_a"] = report.n_a;
    j["n_b"] = report.n_b;
    j["separable"] = report.separable;
    j["entropy"] = report.entropy;
    j["e_g"] = report.e_g;
    j["r_g"] = report.r_g;
    j["e_ur"] = report.e_ur;
    j["eur_diagnostics"] = {
        {"restarts", report.eur_diagnostics.restarts},
        {"iterations", report.eur_diagnostics.iterations},
        {"converged", report.eur_diagnostics.converged},
        {"gradient_norm", report.eur_diagnostics.gradient_norm},
        {"separable_short_circuit", report.eur_diagnostics.separable_short_circuit},
        {"v_a_tilde", report.eur_v_a_tilde},
        {"v_b_tilde", report.eur_v_b_tilde},
    };
    j["i_a"] = report.i_a;
    j["i_b"] = report.i_b;
    j["log_base"] = std::string(to_string(report.log_base));
    return j.dump(2);
}

std::string to_text(const MeasureReport& report) {
    std::ostringstream out;
    const char* unit = report.log_base == LogBase::two ? " bits" : " nats";
    out << "state      lambda=" << format_number(report.lambda)
        << " v_a=" << format_number(report.v_a) << " v_b=" << format_number(report.v_b) << '\n'
        << "           r=" << format_number(report.r) << " n_a=" << format_number(report.n_a)
        << " n_b=" << format_number(report.n_b) << '\n'
        << "separable  " << (report.separable ? "yes" : "no") << '\n'
        << "entropy    " << format_number(report.entropy) << unit << '\n'
        << "e_g        " << format_number(report.e_g) << unit
        << "  (r_g=" << format_number(report.r_g) << ")\n"
        << "e_ur       " << format_number(report.e_ur) << unit;
    if (report.eur_diagnostics.separable_short_circuit) {
        out << "  (separable short-circuit)";
    } else {
        out << "  (restarts=" << report.eur_diagnostics.restarts
            << " iterations=" << report.eur_diagnostics.iterations
            << " converged=" << (report.eur_diagnostics.converged ? "true" : "false")
            << " |grad|=" << format_number(report.eur_diagnostics.gradient_norm) << ")";
    }
    out << '\n'
        << "i_a        " << format_number(report.i_a) << unit << '\n'
        << "i_b        " << format_number(report.i_b) << unit << '\n';
    return out.str();
}

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";  // also folds −0
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, 12);
    return std::string(buf.data(), res.ptr);
}

void validate(const SweepSpec& spec) {
    if (!(spec.lambda >= 0.0 && spec.lambda < kMaxLambda)) {
        throw ValidationError("lambda", "must lie in [0, 1)");
    }
    if (!(spec.ratio > 0.0) || !std::isfinite(spec.ratio)) {
        throw ValidationError("ratio", "must be positive");
    }
    if (!(spec.n_a_min >= 0.0) || !std::isfinite(spec.n_a_max)) {
        throw ValidationError("n_a_min", "must be nonnegative and finite");
    }
    if (spec.n_a_min > spec.n_a_max) {
        throw ValidationError("n_a_max", "must not be below n_a_min");
    }
    if (spec.steps < 2) {
        throw ValidationError("steps", "must be at least 2");
    }
    if (spec.spacing == Spacing::log && !(spec.n_a_min > 0.0)) {
        throw ValidationError("n_a_min", "log spacing needs n_a_min > 0");
    }
    for (const auto& name : spec.outputs) {
        if (std::find_if(kMeasureColumns.begin(), kMeasureColumns.end(),
                         [&](const char* c) { return name == c; })
            == kMeasureColumns.end()) {
            throw ValidationError("outputs", "unknown measure '" + name + "'");
        }
    }
}

std::vector<SweepSpec> figure_presets(int figure) {
    SweepSpec base;
    base.lambda = 0.99;
    base.n_a_min = 0.01;
    base.n_a_max = 100.0;
    base.steps = 200;
    base.spacing = Spacing::log;
    if (figure == 1) {
        std::vector<SweepSpec> out;
        for (double ratio : {0.5, 1.0, 1.5, 2.0}) {
            base.ratio = ratio;
            out.push_back(base);
        }
        return out;
    }
    if (figure == 2) {
        base.ratio = 0.5;
        return {base};
    }
    throw ValidationError("fig", "only figures 1 and 2 have presets");
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    validate(spec);
    std::vector<double> out(static_cast<std::size_t>(spec.steps));
    for (int i = 0; i < spec.steps; ++i) {
        const double frac = static_cast<double>(i) / (spec.steps - 1);
        if (spec.spacing == Spacing::log) {
            out[i] = spec.n_a_min * std::pow(spec.n_a_max / spec.n_a_min, frac);
        } else {
            out[i] = spec.n_a_min + frac * (spec.n_a_max - spec.n_a_min);
        }
    }
    out.back() = spec.n_a_max;
    return out;
}

std::vector<MeasureReport> run_sweep(const SweepSpec& spec, const EurOptions& options,
                                     int threads) {
    const auto grid = sweep_grid(spec);
    std::vector<MeasureReport> rows(grid.size());
    auto compute = [&](std::size_t i) {
        const double n_a = grid[i];
        const double n_b = spec.ratio * n_a;
        const auto state = make_state(spec.lambda, n_a / (n_a + 1.0), n_b / (n_b + 1.0));
        rows[i] = measure(state, options, wants(spec.outputs, "e_ur"));
        rows[i].n_a = n_a;
        rows[i].n_b = n_b;
    };

    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            compute(i);
        }
        return rows;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < rows.size(); i += workers) {
                compute(i);
            }
        });
    }
    pool.clear();
    return rows;
}

void write_csv(std::ostream& out, const SweepSpec& spec, const std::vector<MeasureReport>& rows,
               LogBase base) {
    out << "# sqthermal " << SQTHERMAL_VERSION << " log_base=" << to_string(base)
        << " lambda=" << format_number(spec.lambda) << " ratio=" << format_number(spec.ratio)
        << " spacing=" << (spec.spacing == Spacing::log ? "log" : "linear") << '\n';

    out << "n_a,n_b,lambda,v_a,v_b,separable";
    for (const char* column : kMeasureColumns) {
        if (wants(spec.outputs, column)) {
            out << ',' << column;
        }
    }
    out << ",converged\n";

    for (const auto& row : rows) {
        out << format_number(row.n_a) << ',' << format_number(row.n_b) << ','
            << format_number(row.lambda) << ',' << format_number(row.v_a) << ','
            << format_number(row.v_b) << ',' << (row.separable ? "true" : "false");
        const std::array values{row.entropy, row.e_g, row.r_g, row.e_ur, row.i_a, row.i_b};
        for (std::size_t c = 0; c < kMeasureColumns.size(); ++c) {
            if (wants(spec.outputs, kMeasureColumns[c])) {
                out << ',' << format_number(values[c]);
            }
        }
        out << ',' << (row.eur_diagnostics.converged ? "true" : "false") << '\n';
    }
}

std::vector<StateParams> default_verify_grid() {
    std::vector<StateParams> out;
    for (double lambda : {0.1, 0.3, 0.5, 0.7}) {
        for (double va : {0.0, 0.1, 0.3, 0.5}) {
            for (double vb : {0.0, 0.1, 0.3, 0.5}) {
                out.push_back(make_state(lambda, va, vb));
            }
        }
    }
    return out;
}

bool VerifyReport::passed() const {
    return !failure && std::all_of(checks.begin(), checks.end(),
                                   [](const CheckSummary& c) { return c.passed(); });
}

VerifyReport run_verification(const VerifyOptions& options) {
    for (const auto& s : options.states) {
        if (!options.slow && (s.lambda() > 0.7 || s.v_a() > 0.5 || s.v_b() > 0.5)) {
            throw ValidationError("state", state_triple(s)
                                               + " exceeds the oracle cap lambda <= 0.7, v <= 0.5; "
                                                 "pass --slow to lift it");
        }
    }

    VerifyReport report;
    CheckSummary entropy = make_check("joint entropy", 1e-6);
    CheckSummary reduced = make_check("reduced occupations", 1e-6);
    CheckSummary cross = make_check("relative entropy", 1e-5);
    CheckSummary kernel = make_check("coherent kernel", 1e-6);
    CheckSummary psd = make_check("geof psd search", 1e-3);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> edge_dist(0.01, 0.5);
    std::uniform_real_distribution<double> amp_dist(-0.7, 0.7);

    for (const auto& state : options.states) {
        std::vector<SeparableEdgePoint> edges;
        for (int e = 0; e < options.edge_points; ++e) {
            const double a = edge_dist(rng);
            const double b = edge_dist(rng);
            edges.push_back(make_edge_point(a, b));
        }

        int dim = 0;
        if (options.dim) {
            dim = *options.dim;
        } else {
            dim = std::max(40, fock::recommended_dim(state));
            for (const auto& e : edges) {
                dim = std::max(dim, fock::recommended_dim(e.as_state()));
            }
        }
        report.max_dim_used = std::max(report.max_dim_used, dim);

        try {
            const auto rho = fock::build_state(state, dim);

            note(entropy, std::abs(fock::entropy_numeric(rho, options.base)
                                   - state_entropy(state, options.base)),
                 state);

            const auto closed = reduced_occupations(state);
            const double va_rd = 1.0 - fock::partial_trace(rho, fock::Mode::a)(0, 0);
            const double vb_rd = 1.0 - fock::partial_trace(rho, fock::Mode::b)(0, 0);
            note(reduced,
                 std::max(std::abs(va_rd - closed.v_a_rd), std::abs(vb_rd - closed.v_b_rd)),
                 state);

            for (const auto& edge : edges) {
                const auto sigma = fock::build_edge_state(edge, dim);
                const double numeric = fock::relative_entropy_numeric(rho, sigma, options.base);
                note(cross, std::abs(numeric - relative_entropy_to(state, edge, options.base)),
                     state);
            }

            for (int k = 0; k < 3; ++k) {
                const std::complex<double> aa{amp_dist(rng), amp_dist(rng)};
                const std::complex<double> ab{amp_dist(rng), amp_dist(rng)};
                const std::complex<double> ba{amp_dist(rng), amp_dist(rng)};
                const std::complex<double> bb{amp_dist(rng), amp_dist(rng)};
                note(kernel,
                     std::abs(fock::coherent_matrix_element(rho, aa, ab, ba, bb)
                              - fock::coherent_kernel(state, aa, ab, ba, bb)),
                     state);
            }
        } catch (const fock::TruncationError& err) {
            report.failure = err.what();
            report.failing_state = state;
            break;
        }

        if (is_entangled(state)) {
            const auto result = fock::geof_psd_search(covariance(state));
            note(psd, std::abs(result.s_star - geof(state).r_g), state);
        }
    }

    report.checks = {reduced, entropy, cross, psd, kernel};
    return report;
}

std::string to_text(const VerifyReport& report) {
    std::ostringstream out;
    for (const auto& check : report.checks) {
        out << (check.passed() ? "ok   " : "FAIL ") << check.name
            << ": max |delta| = " << format_number(check.max_deviation)
            << " (tolerance " << format_number(check.tolerance) << ", " << check.samples
            << " samples";
        if (check.worst && !check.passed()) {
            out << ", worst at " << state_triple(*check.worst);
        }
        out << ")\n";
    }
    if (report.failure) {
        out << "FAIL " << *report.failure << '\n';
    }
    out << "max truncation dim " << report.max_dim_used << '\n';
    return out.str();
}

}  // namespace sqt
