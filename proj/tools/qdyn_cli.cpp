// qdyn: command-line driver for reduced and exact two-qubit cavity dynamics.
//
//   qdyn run          single alpha^2 curve
//   qdyn sweep        (alpha^2, t) concurrence surface
//   qdyn oracle-check Fock-cutoff convergence and reduced-vs-exact deviation
//   qdyn events       ESD/ESB/revival detection on an existing CSV
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical abort.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qdyn/concurrence.hpp"
#include "qdyn/events.hpp"
#include "qdyn/oracle.hpp"
#include "qdyn/output.hpp"
#include "qdyn/sweep.hpp"
#include "qdyn/version.hpp"

namespace {

using nlohmann::json;
using namespace qdyn;

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2, kNumericalAbort = 3 };

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Key-value file: one `key = value` (or `key: value`) per line, '#' starts a comment.
// Keys are the long flag names without the leading dashes.
std::vector<std::string> config_file_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto sep = line.find_first_of("=:");
        if (sep == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, sep));
        const std::string value = trim(line.substr(sep + 1));
        while (key.starts_with('-')) key.erase(0, 1);
        if (key.empty() || key == "config") {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": invalid key");
        }
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

// Splices `--config <file>` contents in front of the explicit flags so the explicit
// flags win (options take the last value given).
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> in(argv + 1, argv + argc);
    std::optional<std::string> file;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == "--config" && i + 1 < in.size()) {
            file = in[++i];
        } else if (in[i].starts_with("--config=")) {
            file = in[i].substr(9);
        } else {
            rest.push_back(in[i]);
        }
    }
    if (!file) return in;
    std::vector<std::string> out;
    if (!rest.empty()) out.push_back(rest.front());  // subcommand
    const auto from_file = config_file_args(*file);
    out.insert(out.end(), from_file.begin(), from_file.end());
    out.insert(out.end(), rest.begin() + (rest.empty() ? 0 : 1), rest.end());
    return out;
}

// Consumed by expand_config before parsing; registered only so it appears in --help.
std::string& config_path_placeholder() {
    static std::string path;
    return path;
}

void add_run_options(CLI::App& cmd, RunConfig& c, bool sweep) {
    const std::map<std::string, Engine> engines{{"reduced", Engine::Reduced}, {"oracle", Engine::Oracle}};
    const std::map<std::string, Family> families{{"phi", Family::Phi}, {"psi", Family::Psi}};
    cmd.add_option("--engine", c.engine, "reduced | oracle")
        ->transform(CLI::CheckedTransformer(engines, CLI::ignore_case).description(""))
        ->type_name("ENGINE");
    cmd.add_option("--family", c.family, "phi | psi")
        ->transform(CLI::CheckedTransformer(families, CLI::ignore_case).description(""))
        ->type_name("FAMILY");
    cmd.add_option("--omega-over-lambda", c.omega_over_lambda, "cavity frequency / lambda");
    cmd.add_option("--omega0-over-lambda", c.omega0_over_lambda,
                   "atomic frequency / lambda (default: resonant with the cavity)");
    cmd.add_option("--gamma-over-lambda", c.gamma_over_lambda, "atomic decay / lambda");
    cmd.add_option("--alpha-sq", c.alpha_sq, "initial alpha^2 for a single run");
    if (sweep) {
        cmd.add_option("--alpha-sq-count", c.alpha_sq_count, "alpha^2 grid points on [0, 1]");
    }
    cmd.add_option("--beta-phase", c.beta_phase, "phase of beta in [0, 2 pi)");
    cmd.add_option("--t-max-lambda", c.t_max_lambda, "final lambda t");
    cmd.add_option("--dt-lambda", c.dt_lambda, "RK4 step in units of 1/lambda");
    cmd.add_option("--sample-every", c.sample_every, "steps between samples");
    cmd.add_option("--n-max", c.n_max, "photon cutoff (oracle engine)");
    cmd.add_flag("--renormalize-trace", c.renormalize_trace,
                 "divide snapshots by their trace before computing concurrence");
    cmd.add_option("--event-threshold", c.event_threshold, "concurrence threshold for events");
    cmd.add_option("--hold-window", c.hold_window, "lambda t a death must persist");
    cmd.add_option("--time-axis-scale", c.time_axis_scale, "multiplier for the output time column");
    cmd.add_option("-o,--output-path", c.output_path, "output stem (writes .csv and .json)");
    cmd.add_option("--config", config_path_placeholder(), "key = value file; explicit flags override it");
}

void log_summary(const ConcurrenceSurface& surface) {
    double drift = 0.0;
    for (const auto& d : surface.diagnostics) drift = std::max(drift, d.max_trace_drift);
    std::clog << "max |Tr rho - 1| = " << format_double(drift) << '\n';
}

int do_surface(const RunConfig& config) {
    const ConcurrenceSurface surface = run(config);
    const auto reports = detect_all_events(surface, config.event_options());
    log_summary(surface);
    if (config.output_path.empty()) {
        write_csv(std::cout, surface, config.time_axis_scale);
        std::clog << summary_json(config, surface, reports).dump(2) << '\n';
    } else {
        try {
            const auto paths = emit(surface, reports, config, config.output_path);
            std::clog << "wrote " << paths.csv << " and " << paths.json << '\n';
        } catch (const std::runtime_error& e) {
            throw IoError(e.what());
        }
    }
    return kOk;
}

int do_oracle_check(const RunConfig& base, double tol) {
    base.validate();
    if (base.t_max_lambda <= 0.0) throw ConfigError("oracle-check needs t-max-lambda > 0");
    const ModelParams params = base.model_params();
    const InitialState state = InitialState::from_alpha_sq(base.family, base.alpha_sq, base.beta_phase);
    const TimeGrid grid(0.0, base.t_max_lambda, base.dt_lambda);
    const OracleConfig oc{params, base.n_max, grid, base.sample_every};

    const CutoffConvergence conv = oracle_converged(state, oc, tol);

    RunConfig reduced_cfg = base;
    reduced_cfg.engine = Engine::Reduced;
    RunConfig oracle_cfg = base;
    oracle_cfg.engine = Engine::Oracle;
    const auto reduced = run(reduced_cfg);
    const auto exact = run(oracle_cfg);
    const double deviation = (reduced.concurrence - exact.concurrence).cwiseAbs().maxCoeff();
    const EventOptions opts = base.event_options();

    json out{
        {"version", version_string},
        {"config", to_json(base)},
        {"cutoff",
         {{"n_max", conv.n_max_used},
          {"compared_with", conv.n_max_used + 2},
          {"max_concurrence_shift", conv.max_concurrence_shift},
          {"tolerance", tol},
          {"converged", conv.converged}}},
        {"reduced_vs_oracle_max_deviation", deviation},
        {"reduced", {{"events", to_json(detect_events(reduced.time_values, reduced.curve(0), opts))},
                     {"diagnostics", to_json(reduced.diagnostics.front())}}},
        {"oracle", {{"events", to_json(detect_events(exact.time_values, exact.curve(0), opts))},
                    {"diagnostics", to_json(exact.diagnostics.front())}}},
    };
    if (base.output_path.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        std::ofstream f(base.output_path);
        if (!(f << out.dump(2) << '\n')) throw IoError("cannot write " + base.output_path);
    }
    return kOk;
}

int do_events(const std::string& input, const EventOptions& opts, const std::string& output) {
    std::ifstream in(input);
    if (!in) throw IoError("cannot read " + input);
    CsvCurves curves;
    try {
        curves = read_csv(in);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    json out = json::array();
    for (std::size_t i = 0; i < curves.alpha_sq_values.size(); ++i) {
        json entry = to_json(detect_events(curves.times[i], curves.concurrence[i], opts));
        entry["alpha_sq"] = curves.alpha_sq_values[i];
        out.push_back(std::move(entry));
    }
    if (output.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        std::ofstream f(output);
        if (!(f << out.dump(2) << '\n')) throw IoError("cannot write " + output);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement dynamics of two decaying qubits in a cavity beyond the RWA", "qdyn"};
    app.set_version_flag("--version", std::string(version_string));
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunConfig run_cfg;
    RunConfig sweep_cfg;
    sweep_cfg.alpha_sq_count = 41;
    sweep_cfg.output_path = "qdyn_sweep";
    RunConfig check_cfg;
    check_cfg.t_max_lambda = 5.0;
    double check_tol = 1e-4;
    std::string events_input, events_output;
    EventOptions events_opts;

    auto* run_cmd = app.add_subcommand("run", "integrate a single alpha^2 curve");
    add_run_options(*run_cmd, run_cfg, false);
    auto* sweep_cmd = app.add_subcommand("sweep", "integrate an (alpha^2, t) surface");
    add_run_options(*sweep_cmd, sweep_cfg, true);
    auto* check_cmd = app.add_subcommand("oracle-check", "validate against the exact cavity model");
    add_run_options(*check_cmd, check_cfg, false);
    check_cmd->add_option("--tol", check_tol, "allowed concurrence shift for n-max vs n-max+2");
    auto* events_cmd = app.add_subcommand("events", "detect ESD/ESB/revivals in a surface CSV");
    events_cmd->add_option("--input", events_input, "CSV written by run or sweep")->required();
    events_cmd->add_option("--event-threshold", events_opts.threshold, "concurrence threshold");
    events_cmd->add_option("--hold-window", events_opts.hold_window, "lambda t a death must persist");
    events_cmd->add_option("-o,--output-path", events_output, "JSON output (default: stdout)");
    events_cmd->add_option("--config", config_path_placeholder(),
                           "key = value file; explicit flags override it");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (*run_cmd) {
            run_cfg.alpha_sq_count = 0;
            return do_surface(run_cfg);
        }
        if (*sweep_cmd) return do_surface(sweep_cfg);
        if (*check_cmd) return do_oracle_check(check_cfg, check_tol);
        if (*events_cmd) return do_events(events_input, events_opts, events_output);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const RunAbort& e) {
        std::cerr << e.what() << '\n';
        return kNumericalAbort;
    } catch (const NumericalAbort& e) {
        std::cerr << e.what() << '\n';
        return kNumericalAbort;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
