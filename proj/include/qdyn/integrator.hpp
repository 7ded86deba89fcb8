// integrator.hpp: fixed-step classic RK4 propagation of matrix-valued states.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdyn/core.hpp"

namespace qdyn {

/// Raised when the state acquires NaN/Inf entries.
class NumericalAbort : public std::runtime_error {
public:
    NumericalAbort(const std::string& what, double time)
        : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Uniform time grid in units of 1/lambda. The number of steps must be integral
/// (to a relative 1e-9); times are generated as t_start + k*dt, never accumulated.
class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, double dt) : t_start_(t_start), t_end_(t_end), dt_(dt) {
        if (!(std::isfinite(t_start) && std::isfinite(t_end) && std::isfinite(dt))) {
            throw std::invalid_argument("TimeGrid: non-finite bounds");
        }
        if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
        if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be > 0");
        const double span = (t_end - t_start) / dt;
        if (span > 1e8) throw std::invalid_argument("TimeGrid: more than 1e8 steps");
        steps_ = static_cast<std::int64_t>(std::llround(span));
        if (steps_ < 1 || std::abs(static_cast<double>(steps_) - span) > 1e-9 * std::max(1.0, span)) {
            throw std::invalid_argument("TimeGrid: (t_end - t_start) must be a multiple of dt");
        }
    }

    double t_start() const noexcept { return t_start_; }
    double t_end() const noexcept { return t_end_; }
    double dt() const noexcept { return dt_; }
    std::int64_t steps() const noexcept { return steps_; }
    double time_at(std::int64_t k) const noexcept { return t_start_ + static_cast<double>(k) * dt_; }

    TimeGrid halved() const { return TimeGrid(t_start_, t_end_, 0.5 * dt_); }

private:
    double t_start_;
    double t_end_;
    double dt_;
    std::int64_t steps_{};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<Diagnostics<double>> diagnostics;

    std::size_t size() const noexcept { return times.size(); }
};

namespace detail {

template <typename Rhs, typename Mat>
Mat rk4_step(Rhs& rhs, const Mat& y, double t, double dt) {
    const double h2 = 0.5 * dt;
    const Mat k1 = rhs(y, t);
    const Mat k2 = rhs(Mat(y + h2 * k1), t + h2);
    const Mat k3 = rhs(Mat(y + h2 * k2), t + h2);
    const Mat k4 = rhs(Mat(y + dt * k3), t + dt);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Integrates dy/dt = rhs(y, t) with classic RK4 and calls on_sample(t, y) at t_start,
/// every `sample_every` steps, and at the final time. The state is never modified
/// between steps (no symmetrization or renormalization).
template <typename Rhs, typename Visitor, typename Mat>
void propagate(Rhs&& rhs, Mat y, const TimeGrid& grid, std::int64_t sample_every,
               Visitor&& on_sample) {
    if (sample_every < 1) throw std::invalid_argument("propagate: sample_every must be >= 1");
    if (!y.allFinite()) throw NumericalAbort("non-finite initial state", grid.t_start());
    on_sample(grid.t_start(), std::as_const(y));
    const std::int64_t n = grid.steps();
    for (std::int64_t k = 0; k < n; ++k) {
        const double t = grid.time_at(k);
        y = detail::rk4_step(rhs, y, t, grid.dt());
        const double t_next = grid.time_at(k + 1);
        if (!y.allFinite()) throw NumericalAbort("non-finite state", t_next);
        if ((k + 1) % sample_every == 0 || k + 1 == n) {
            on_sample(t_next, std::as_const(y));
        }
    }
}

/// Integrates a density matrix and records snapshots with diagnostics.
template <typename Rhs>
Trajectory integrate(Rhs&& rhs, const DensityMatrix& rho0, const TimeGrid& grid,
                     std::int64_t sample_every) {
    Trajectory traj;
    const auto expected = static_cast<std::size_t>(grid.steps() / sample_every + 2);
    traj.times.reserve(expected);
    traj.states.reserve(expected);
    traj.diagnostics.reserve(expected);
    propagate(std::forward<Rhs>(rhs), rho0.matrix(), grid, sample_every,
              [&](double t, const ComplexMatrix& y) {
                  traj.times.push_back(t);
                  traj.states.push_back(DensityMatrix::evolved(y, rho0.label()));
                  traj.diagnostics.push_back(diagnose(y));
              });
    return traj;
}

struct ConvergenceResult {
    std::vector<double> times;
    std::vector<double> value_dt;
    std::vector<double> value_dt_half;
    double delta{};  // max |value_dt - value_dt_half| over shared sample times
};

/// Runs at dt and dt/2 (sampling the same physical times) and compares an observable.
template <typename Rhs, typename Observable>
ConvergenceResult convergence_check(Rhs&& rhs, const DensityMatrix& rho0, const TimeGrid& grid,
                                    std::int64_t sample_every, Observable&& observable) {
    ConvergenceResult out;
    propagate(rhs, rho0.matrix(), grid, sample_every, [&](double t, const ComplexMatrix& y) {
        out.times.push_back(t);
        out.value_dt.push_back(observable(DensityMatrix::evolved(y)));
    });
    propagate(rhs, rho0.matrix(), grid.halved(), 2 * sample_every,
              [&](double, const ComplexMatrix& y) {
                  out.value_dt_half.push_back(observable(DensityMatrix::evolved(y)));
              });
    for (std::size_t i = 0; i < out.value_dt.size(); ++i) {
        out.delta = std::max(out.delta, std::abs(out.value_dt[i] - out.value_dt_half[i]));
    }
    return out;
}

}  // namespace qdyn
