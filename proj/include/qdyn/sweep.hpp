// sweep.hpp: run configuration and (alpha^2, t) concurrence surfaces for both engines.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdyn/events.hpp"
#include "qdyn/model.hpp"

namespace qdyn {

enum class Engine { Reduced, Oracle };

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure during a run, tagged with the grid point (CLI exit code 3).
class RunAbort : public std::runtime_error {
public:
    RunAbort(const std::string& what, double alpha_sq, double time);

    double alpha_sq() const noexcept { return alpha_sq_; }
    double time() const noexcept { return time_; }

private:
    double alpha_sq_;
    double time_;
};

/// All frequencies and times are in units of the coupling lambda (lambda = 1 internally).
struct RunConfig {
    Engine engine = Engine::Reduced;
    Family family = Family::Phi;
    double omega_over_lambda = 1.0;
    // Resonance (omega0 = omega) unless set explicitly.
    std::optional<double> omega0_over_lambda;
    double gamma_over_lambda = 0.1;
    double alpha_sq = 0.5;
    // > 0 selects a sweep over alpha^2 = k/(count-1), k = 0..count-1.
    int alpha_sq_count = 0;
    double beta_phase = 0.0;
    double t_max_lambda = 10.0;
    double dt_lambda = 1e-3;
    std::int64_t sample_every = 10;
    int n_max = 8;
    bool renormalize_trace = false;
    double event_threshold = 1e-4;
    double hold_window = 0.5;
    // Output-only rescaling of the time column (e.g. sqrt(6)); the model always uses lambda t.
    double time_axis_scale = 1.0;
    std::string output_path;

    bool operator==(const RunConfig&) const = default;

    void validate() const;
    ModelParams model_params() const;
    std::vector<double> alpha_sq_values() const;
    EventOptions event_options() const { return {event_threshold, hold_window}; }
};

struct CurveDiagnostics {
    double alpha_sq{};
    double final_trace{};
    double max_trace_drift{};        // max |Tr rho - 1| over samples
    double max_hermiticity_defect{};
    double min_eigenvalue{};         // minimum over samples
    std::size_t general_fallbacks{}; // samples where the X form was not applicable
    // Oracle engine only: joint-space conservation.
    std::optional<double> joint_trace_drift;
    std::optional<double> joint_hermiticity_defect;
};

struct ConcurrenceSurface {
    std::vector<double> alpha_sq_values;
    std::vector<double> time_values;   // lambda t
    Eigen::MatrixXd concurrence;       // rows: alpha^2, cols: time
    Eigen::MatrixXd trace_re;
    Eigen::MatrixXd min_eigenvalue;
    std::vector<CurveDiagnostics> diagnostics;

    std::vector<double> curve(std::size_t alpha_index) const;
};

/// Integrates every alpha^2 of the configuration on a worker pool. Result assembly does
/// not depend on completion order.
ConcurrenceSurface run(const RunConfig& config);

std::vector<EventReport> detect_all_events(const ConcurrenceSurface& surface,
                                           const EventOptions& options);

/// Worker-pool width: QDYN_WORKERS if set to a positive integer, else hardware concurrency.
unsigned worker_count();

/// Max |C(a, t) - C(1 - a, t)| over mirrored alpha^2 grid pairs.
double mirror_asymmetry(const ConcurrenceSurface& surface);

}  // namespace qdyn
