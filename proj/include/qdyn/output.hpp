// output.hpp: CSV surfaces and JSON run summaries.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdyn/events.hpp"
#include "qdyn/sweep.hpp"

namespace qdyn {

/// 17 significant digits, '.' decimal separator, independent of the global locale.
std::string format_double(double x);

inline const char* csv_header() {
    return "alpha_sq,lambda_t,concurrence,trace_re,trace_drift,min_eigenvalue";
}

/// One row per (alpha^2, t). trace_drift is Tr(rho) - 1. The time column is multiplied
/// by time_axis_scale.
void write_csv(std::ostream& os, const ConcurrenceSurface& surface, double time_axis_scale = 1.0);

/// Reads a file produced by write_csv back into per-alpha^2 curves (time column as written).
struct CsvCurves {
    std::vector<double> alpha_sq_values;
    std::vector<std::vector<double>> times;
    std::vector<std::vector<double>> concurrence;
};
CsvCurves read_csv(std::istream& is);

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EventReport& report);
nlohmann::json to_json(const CurveDiagnostics& diagnostics);

nlohmann::json summary_json(const RunConfig& config, const ConcurrenceSurface& surface,
                            const std::vector<EventReport>& reports);

struct EmittedPaths {
    std::string csv;
    std::string json;
};

/// Output stem handling: "out" and "out.csv" both yield out.csv + out.json.
EmittedPaths output_paths(const std::string& path);

/// Writes <stem>.csv and <stem>.json. Throws std::runtime_error on I/O failure.
EmittedPaths emit(const ConcurrenceSurface& surface, const std::vector<EventReport>& reports,
                  const RunConfig& config, const std::string& path);

}  // namespace qdyn
