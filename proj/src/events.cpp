#include "qdyn/events.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdyn {

namespace {

void check_grid(std::span<const double> times, std::span<const double> curve) {
    if (times.size() != curve.size()) {
        throw std::invalid_argument("detect_events: times and curve differ in length");
    }
    if (times.empty()) throw std::invalid_argument("detect_events: empty curve");
    if (times.size() < 3) return;
    const double step = times[1] - times[0];
    if (!(step > 0.0)) throw std::invalid_argument("detect_events: times must increase");
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double d = times[i] - times[i - 1];
        // The last step may be shorter when the horizon is not a multiple of the sampling.
        const bool last = i + 1 == times.size();
        if (!(d > 0.0) || (!last && std::abs(d - step) > 1e-6 * step)) {
            throw std::invalid_argument("detect_events: time grid is not uniform");
        }
    }
}

}  // namespace

EventReport detect_events(std::span<const double> times, std::span<const double> curve,
                          const EventOptions& options) {
    check_grid(times, curve);
    const double thr = options.threshold;
    const std::size_t n = curve.size();
    const double slack = 1e-9 * std::max(1.0, std::abs(times.back()));
    EventReport report;

    const auto peak = std::max_element(curve.begin(), curve.end());
    report.peak_value = *peak;
    report.peak_time = times[static_cast<std::size_t>(peak - curve.begin())];

    auto held_below = [&](std::size_t i) {
        for (std::size_t j = i; j < n && times[j] <= times[i] + options.hold_window + slack; ++j) {
            if (curve[j] > thr) return false;
        }
        return true;
    };

    std::optional<std::size_t> death_index;
    for (std::size_t i = 1; i < n; ++i) {
        if (curve[i - 1] > thr && curve[i] <= thr && held_below(i)) {
            death_index = i;
            break;
        }
    }
    if (death_index) report.death_time = times[*death_index];

    if (curve[0] <= thr) {
        for (std::size_t i = 1; i < n; ++i) {
            if (curve[i] > thr) {
                report.birth_time = times[i];
                break;
            }
        }
    }

    if (death_index) {
        std::size_t i = *death_index;
        while (i < n) {
            if (curve[i] <= thr) {
                ++i;
                continue;
            }
            Revival r{times[i], times[i], curve[i], times[i]};
            while (i < n && curve[i] > thr) {
                if (curve[i] > r.peak_value) {
                    r.peak_value = curve[i];
                    r.peak_time = times[i];
                }
                r.end = times[i];
                ++i;
            }
            report.revivals.push_back(r);
        }
    }

    const std::size_t tail = std::max<std::size_t>(1, (n + 19) / 20);
    report.terminal_value =
        std::accumulate(curve.end() - static_cast<std::ptrdiff_t>(tail), curve.end(), 0.0) /
        static_cast<double>(tail);
    return report;
}

}  // namespace qdyn
