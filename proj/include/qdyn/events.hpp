// events.hpp: entanglement sudden death / birth / revival detection on concurrence curves.

#pragma once

#include <optional>
#include <span>
#include <vector>

namespace qdyn {

struct Revival {
    double start{};
    double peak_time{};
    double peak_value{};
    double end{};  // last sample above threshold
};

struct EventReport {
    std::optional<double> death_time;
    std::optional<double> birth_time;
    std::vector<Revival> revivals;
    double terminal_value{};  // mean over the last 5% of samples
    double peak_time{};       // global maximum of the curve
    double peak_value{};
};

struct EventOptions {
    double threshold = 1e-4;
    double hold_window = 0.5;  // in units of 1/lambda
};

/// Death: first downward crossing of the threshold that stays below for hold_window (or
/// until the curve ends). Birth: first upward crossing when the curve starts at or below
/// threshold. Revivals: maximal above-threshold intervals after the death.
/// Requires a uniform, strictly increasing time grid.
EventReport detect_events(std::span<const double> times, std::span<const double> curve,
                          const EventOptions& options = {});

}  // namespace qdyn
