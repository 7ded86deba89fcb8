#include "qdyn/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qdyn/concurrence.hpp"
#include "qdyn/integrator.hpp"
#include "qdyn/oracle.hpp"

namespace qdyn {

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

struct Curve {
    std::vector<double> times;
    std::vector<double> concurrence;
    std::vector<double> trace_re;
    std::vector<double> min_eigenvalue;
    CurveDiagnostics diagnostics;
};

Trajectory initial_only(const DensityMatrix& rho0) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);
    traj.diagnostics.push_back(rho0.diagnostics());
    return traj;
}

Curve evaluate_curve(const RunConfig& config, double alpha_sq) {
    const ModelParams params = config.model_params();
    const InitialState state = InitialState::from_alpha_sq(config.family, alpha_sq, config.beta_phase);
    const DensityMatrix rho0 = initial_density(state);

    Curve curve;
    curve.diagnostics.alpha_sq = alpha_sq;
    Trajectory traj;
    try {
        if (config.t_max_lambda == 0.0) {
            traj = initial_only(rho0);
        } else {
            const TimeGrid grid(0.0, config.t_max_lambda, config.dt_lambda);
            if (config.engine == Engine::Reduced) {
                traj = integrate(
                    [&params](const ComplexMatrix& rho, double t) { return reduced_rhs(rho, t, params); },
                    rho0, grid, config.sample_every);
            } else {
                OracleConfig oc{params, config.n_max, grid, config.sample_every};
                OracleRun run = oracle_evolve(rho0, oc);
                curve.diagnostics.joint_trace_drift = run.max_joint_trace_drift;
                curve.diagnostics.joint_hermiticity_defect = run.max_joint_hermiticity_defect;
                traj = std::move(run.reduced);
            }
        }
    } catch (const NumericalAbort& e) {
        throw RunAbort(e.what(), alpha_sq, e.time());
    }

    auto& d = curve.diagnostics;
    d.min_eigenvalue = traj.diagnostics.front().min_eigenvalue;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& diag = traj.diagnostics[i];
        const double tr = diag.trace.real();
        d.max_trace_drift = std::max(d.max_trace_drift, std::abs(diag.trace - 1.0));
        d.max_hermiticity_defect = std::max(d.max_hermiticity_defect, diag.hermiticity_defect);
        d.min_eigenvalue = std::min(d.min_eigenvalue, diag.min_eigenvalue);

        ComplexMatrix rho = traj.states[i].matrix();
        if (config.renormalize_trace) rho /= diag.trace;
        double c = 0.0;
        try {
            try {
                c = concurrence_x(rho).value;
            } catch (const XStructureError& e) {
                if (d.general_fallbacks == 0) {
                    std::clog << "warning: alpha^2=" << alpha_sq << " t=" << traj.times[i] << ": "
                              << e.what() << "; using the general concurrence\n";
                }
                ++d.general_fallbacks;
                c = concurrence_general(rho).value;
            }
        } catch (const InvalidStateError& e) {
            throw RunAbort(e.what(), alpha_sq, traj.times[i]);
        }
        curve.times.push_back(traj.times[i]);
        curve.concurrence.push_back(c);
        curve.trace_re.push_back(tr);
        curve.min_eigenvalue.push_back(diag.min_eigenvalue);
    }
    d.final_trace = curve.trace_re.back();
    return curve;
}

}  // namespace

RunAbort::RunAbort(const std::string& what, double alpha_sq, double time)
    : std::runtime_error([&] {
          std::ostringstream s;
          s << "numerical abort at alpha^2=" << alpha_sq << ", lambda t=" << time << ": " << what;
          return s.str();
      }()),
      alpha_sq_(alpha_sq),
      time_(time) {}

void RunConfig::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    check(finite(omega_over_lambda) && omega_over_lambda > 0.0, "omega-over-lambda must be > 0");
    check(!omega0_over_lambda || (finite(*omega0_over_lambda) && *omega0_over_lambda > 0.0),
          "omega0-over-lambda must be > 0");
    check(finite(gamma_over_lambda) && gamma_over_lambda >= 0.0, "gamma-over-lambda must be >= 0");
    check(finite(alpha_sq) && alpha_sq >= 0.0 && alpha_sq <= 1.0, "alpha-sq must lie in [0, 1]");
    check(alpha_sq_count >= 0 && alpha_sq_count != 1 && alpha_sq_count <= 100000,
          "alpha-sq-count must be 0 (single run) or >= 2");
    check(finite(beta_phase) && beta_phase >= 0.0 && beta_phase < 2.0 * std::numbers::pi,
          "beta-phase must lie in [0, 2 pi)");
    check(finite(t_max_lambda) && t_max_lambda >= 0.0, "t-max must be >= 0");
    check(finite(dt_lambda) && dt_lambda > 0.0, "dt must be > 0");
    check(sample_every >= 1, "sample-every must be >= 1");
    check(n_max >= 1 && n_max <= 200, "n-max must lie in [1, 200]");
    check(finite(event_threshold) && event_threshold >= 0.0, "event-threshold must be >= 0");
    check(finite(hold_window) && hold_window >= 0.0, "hold-window must be >= 0");
    check(finite(time_axis_scale) && time_axis_scale > 0.0, "time-axis-scale must be > 0");
    if (t_max_lambda > 0.0) {
        try {
            TimeGrid(0.0, t_max_lambda, dt_lambda);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("time grid: ") + e.what());
        }
    }
}

ModelParams RunConfig::model_params() const {
    return ModelParams(omega0_over_lambda.value_or(omega_over_lambda), omega_over_lambda, 1.0,
                       gamma_over_lambda);
}

std::vector<double> RunConfig::alpha_sq_values() const {
    if (alpha_sq_count == 0) return {alpha_sq};
    std::vector<double> out(static_cast<std::size_t>(alpha_sq_count));
    const double last = static_cast<double>(alpha_sq_count - 1);
    for (int k = 0; k < alpha_sq_count; ++k) out[static_cast<std::size_t>(k)] = k / last;
    return out;
}

std::vector<double> ConcurrenceSurface::curve(std::size_t alpha_index) const {
    const auto row = concurrence.row(static_cast<Index>(alpha_index));
    return std::vector<double>(row.begin(), row.end());
}

unsigned worker_count() {
    if (const char* env = std::getenv("QDYN_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ConcurrenceSurface run(const RunConfig& config) {
    config.validate();
    const std::vector<double> alphas = config.alpha_sq_values();
    std::vector<Curve> curves(alphas.size());
    std::vector<std::exception_ptr> errors(alphas.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < alphas.size(); i = next++) {
            try {
                curves[i] = evaluate_curve(config, alphas[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned width = std::min<unsigned>(worker_count(), static_cast<unsigned>(alphas.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < width; ++w) pool.emplace_back(worker);
        worker();
    }
    // Report the failure of the lowest alpha^2 so the error does not depend on scheduling.
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ConcurrenceSurface s;
    s.alpha_sq_values = alphas;
    s.time_values = curves.front().times;
    const auto rows = static_cast<Index>(alphas.size());
    const auto cols = static_cast<Index>(s.time_values.size());
    s.concurrence.resize(rows, cols);
    s.trace_re.resize(rows, cols);
    s.min_eigenvalue.resize(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const Curve& c = curves[static_cast<std::size_t>(r)];
        for (Index k = 0; k < cols; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            s.concurrence(r, k) = c.concurrence[kk];
            s.trace_re(r, k) = c.trace_re[kk];
            s.min_eigenvalue(r, k) = c.min_eigenvalue[kk];
        }
        s.diagnostics.push_back(c.diagnostics);
    }
    return s;
}

std::vector<EventReport> detect_all_events(const ConcurrenceSurface& surface,
                                           const EventOptions& options) {
    std::vector<EventReport> out;
    out.reserve(surface.alpha_sq_values.size());
    for (std::size_t i = 0; i < surface.alpha_sq_values.size(); ++i) {
        const auto c = surface.curve(i);
        out.push_back(detect_events(surface.time_values, c, options));
    }
    return out;
}

double mirror_asymmetry(const ConcurrenceSurface& surface) {
    const auto n = static_cast<Index>(surface.alpha_sq_values.size());
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
        const Index j = n - 1 - i;
        if (std::abs(surface.alpha_sq_values[static_cast<std::size_t>(i)] +
                     surface.alpha_sq_values[static_cast<std::size_t>(j)] - 1.0) > 1e-12) {
            throw std::invalid_argument("mirror_asymmetry: alpha^2 grid is not mirror-symmetric");
        }
        worst = std::max(worst, (surface.concurrence.row(i) - surface.concurrence.row(j))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    return worst;
}

}  // namespace qdyn
