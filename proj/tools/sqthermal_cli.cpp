// sqthermal: entanglement measures for squeezed non-symmetric thermal states.
//
// Exit codes: 0 success, 1 I/O, 2 usage/validation, 3 partial optimizer
// convergence, 4 verification failure.

#include "sqthermal/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum ExitCode { kOk = 0, kIo = 1, kUsage = 2, kPartial = 3, kVerifyFailed = 4 };

int default_threads() {
    if (const char* env = std::getenv("SQTHERMAL_THREADS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
        }
    }
    return 1;
}

std::filesystem::path with_suffix(const std::filesystem::path& path, const std::string& suffix) {
    auto out = path;
    out.replace_filename(path.stem().string() + suffix + path.extension().string());
    return out;
}

int write_sweep(const sqt::SweepSpec& spec, const std::filesystem::path& path,
                const sqt::EurOptions& options, int threads) {
    const auto rows = sqt::run_sweep(spec, options, threads);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open " << path << " for writing\n";
        return kIo;
    }
    sqt::write_csv(out, spec, rows, options.base);
    out.flush();
    if (!out) {
        std::cerr << "error: failed writing " << path << '\n';
        return kIo;
    }
    for (const auto& row : rows) {
        if (!row.eur_diagnostics.converged) {
            return kPartial;
        }
    }
    return kOk;
}

std::optional<sqt::StateParams> parse_triple(const std::string& text) {
    std::istringstream in(text);
    double l = 0, a = 0, b = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> l >> c1 >> a >> c2 >> b) || c1 != ',' || c2 != ',') {
        return std::nullopt;
    }
    return sqt::make_state(l, a, b);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement measures for two-mode squeezed non-symmetric thermal states"};
    app.require_subcommand(1);

    std::string log_base = "2";
    app.add_option("--log-base", log_base, "Logarithm base for all entropies")
        ->check(CLI::IsMember({"2", "e"}));
    int threads = default_threads();
    app.add_option("--threads", threads, "Worker threads for sweeps (env SQTHERMAL_THREADS)")
        ->check(CLI::PositiveNumber);

    // measure
    auto* measure = app.add_subcommand("measure", "All measures for one state");
    std::optional<double> lambda, va, vb, r, na, nb;
    bool json = false;
    measure->add_option("--lambda", lambda, "tanh of the squeezing, in [0, 1)");
    measure->add_option("--va", va, "Thermal parameter of mode A, in [0, 1)");
    measure->add_option("--vb", vb, "Thermal parameter of mode B, in [0, 1)");
    measure->add_option("--r", r, "Squeezing parameter r >= 0");
    measure->add_option("--na", na, "Mean thermal photons of mode A");
    measure->add_option("--nb", nb, "Mean thermal photons of mode B");
    measure->add_flag("--json", json, "Emit JSON");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "CSV sweep over N_A at fixed lambda and N_B/N_A");
    sqt::SweepSpec spec;
    std::optional<int> figure;
    std::string spacing = "log";
    std::vector<std::string> columns;
    std::string out_path;
    sweep->add_option("--fig", figure, "Figure preset (1 or 2)")->check(CLI::IsMember({1, 2}));
    sweep->add_option("--lambda", spec.lambda, "tanh of the squeezing");
    sweep->add_option("--ratio", spec.ratio, "N_B / N_A");
    sweep->add_option("--na-min", spec.n_a_min, "Smallest N_A");
    sweep->add_option("--na-max", spec.n_a_max, "Largest N_A");
    sweep->add_option("--steps", spec.steps, "Number of rows (>= 2)");
    sweep->add_option("--spacing", spacing, "N_A spacing")->check(CLI::IsMember({"log", "linear"}));
    sweep->add_option("--columns", columns, "Measure columns to emit (default: all)")
        ->delimiter(',');
    sweep->add_option("--out", out_path, "Output CSV path (fig 1 writes one file per ratio)")
        ->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Cross-check closed forms against Fock-space numerics");
    std::vector<std::string> state_args;
    std::optional<int> dim;
    bool slow = false;
    sqt::VerifyOptions verify_options;
    verify->add_option("--state", state_args, "lambda,v_a,v_b (repeatable; default grid otherwise)");
    verify->add_option("--dim", dim, "Fixed photon-number cutoff per mode")->check(CLI::Range(2, 400));
    verify->add_flag("--slow", slow, "Allow states beyond lambda <= 0.7, v <= 0.5");
    verify->add_option("--edge-points", verify_options.edge_points, "Random edge points per state");
    verify->add_option("--seed", verify_options.seed, "Seed for edge points and amplitudes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    sqt::EurOptions options;
    options.base = log_base == "e" ? sqt::LogBase::e : sqt::LogBase::two;

    try {
        if (measure->parsed()) {
            const bool canonical = lambda || va || vb;
            const bool physical = r || na || nb;
            if (canonical == physical) {
                std::cerr << "error: give exactly one of (--lambda --va --vb) or (--r --na --nb)\n"
                          << measure->help();
                return kUsage;
            }
            if ((canonical && !(lambda && va && vb)) || (physical && !(r && na && nb))) {
                std::cerr << "error: incomplete parametrization\n" << measure->help();
                return kUsage;
            }
            const auto state = canonical ? sqt::make_state(*lambda, *va, *vb)
                                         : sqt::make_state_from_physical(*r, *na, *nb);
            const auto report = sqt::measure(state, options);
            std::cout << (json ? sqt::to_json(report) + "\n" : sqt::to_text(report));
            return report.eur_diagnostics.converged ? kOk : kPartial;
        }

        if (sweep->parsed()) {
            spec.spacing = spacing == "log" ? sqt::Spacing::log : sqt::Spacing::linear;
            spec.outputs = columns;
            if (!figure) {
                sqt::validate(spec);
                return write_sweep(spec, out_path, options, threads);
            }
            int worst = kOk;
            const auto presets = sqt::figure_presets(*figure);
            for (auto preset : presets) {
                preset.outputs = columns;
                const auto path = presets.size() == 1
                                      ? std::filesystem::path(out_path)
                                      : with_suffix(out_path, "_ratio" + sqt::format_number(preset.ratio));
                const int code = write_sweep(preset, path, options, threads);
                if (code == kIo) {
                    return kIo;
                }
                worst = std::max(worst, code);
            }
            return worst;
        }

        if (verify->parsed()) {
            for (const auto& text : state_args) {
                const auto state = parse_triple(text);
                if (!state) {
                    std::cerr << "error: --state expects lambda,v_a,v_b, got '" << text << "'\n";
                    return kUsage;
                }
                verify_options.states.push_back(*state);
            }
            if (verify_options.states.empty()) {
                verify_options.states = sqt::default_verify_grid();
            }
            verify_options.dim = dim;
            verify_options.slow = slow;
            verify_options.base = options.base;
            const auto report = sqt::run_verification(verify_options);
            std::cout << sqt::to_text(report);
            return report.passed() ? kOk : kVerifyFailed;
        }
    } catch (const sqt::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}
