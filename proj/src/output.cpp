#include "qdyn/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "qdyn/version.hpp"

namespace qdyn {

namespace {

using nlohmann::json;

const char* engine_name(Engine e) { return e == Engine::Reduced ? "reduced" : "oracle"; }
const char* family_name(Family f) { return f == Family::Phi ? "phi" : "psi"; }

Engine parse_engine(const std::string& s) {
    if (s == "reduced") return Engine::Reduced;
    if (s == "oracle") return Engine::Oracle;
    throw ConfigError("unknown engine '" + s + "'");
}

Family parse_family(const std::string& s) {
    if (s == "phi") return Family::Phi;
    if (s == "psi") return Family::Psi;
    throw ConfigError("unknown family '" + s + "'");
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double parse_double(std::string_view field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error("read_csv: bad number '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const ConcurrenceSurface& surface, double time_axis_scale) {
    os << csv_header() << '\n';
    for (std::size_t r = 0; r < surface.alpha_sq_values.size(); ++r) {
        const auto ri = static_cast<Index>(r);
        const std::string a = format_double(surface.alpha_sq_values[r]);
        for (std::size_t k = 0; k < surface.time_values.size(); ++k) {
            const auto ki = static_cast<Index>(k);
            const double tr = surface.trace_re(ri, ki);
            os << a << ',' << format_double(surface.time_values[k] * time_axis_scale) << ','
               << format_double(surface.concurrence(ri, ki)) << ',' << format_double(tr) << ','
               << format_double(tr - 1.0) << ',' << format_double(surface.min_eigenvalue(ri, ki))
               << '\n';
        }
    }
}

CsvCurves read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty input");
    if (line != csv_header()) throw std::runtime_error("read_csv: unexpected header");
    CsvCurves out;
    std::map<double, std::size_t> slot;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
            fields.push_back(rest.substr(0, pos));
            rest.remove_prefix(pos + 1);
        }
        fields.push_back(rest);
        if (fields.size() != 6) throw std::runtime_error("read_csv: expected 6 columns");
        const double a = parse_double(fields[0]);
        auto [it, inserted] = slot.try_emplace(a, out.alpha_sq_values.size());
        if (inserted) {
            out.alpha_sq_values.push_back(a);
            out.times.emplace_back();
            out.concurrence.emplace_back();
        }
        out.times[it->second].push_back(parse_double(fields[1]));
        out.concurrence[it->second].push_back(parse_double(fields[2]));
    }
    return out;
}

json to_json(const RunConfig& c) {
    return json{
        {"engine", engine_name(c.engine)},
        {"family", family_name(c.family)},
        {"omega_over_lambda", c.omega_over_lambda},
        {"omega0_over_lambda", optional_number(c.omega0_over_lambda)},
        {"gamma_over_lambda", c.gamma_over_lambda},
        {"alpha_sq", c.alpha_sq},
        {"alpha_sq_count", c.alpha_sq_count},
        {"beta_phase", c.beta_phase},
        {"t_max_lambda", c.t_max_lambda},
        {"dt_lambda", c.dt_lambda},
        {"sample_every", c.sample_every},
        {"n_max", c.n_max},
        {"renormalize_trace", c.renormalize_trace},
        {"event_threshold", c.event_threshold},
        {"hold_window", c.hold_window},
        {"time_axis_scale", c.time_axis_scale},
        {"output_path", c.output_path},
    };
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    try {
        c.engine = parse_engine(j.at("engine").get<std::string>());
        c.family = parse_family(j.at("family").get<std::string>());
        c.omega_over_lambda = j.at("omega_over_lambda").get<double>();
        const auto& w0 = j.at("omega0_over_lambda");
        if (!w0.is_null()) c.omega0_over_lambda = w0.get<double>();
        c.gamma_over_lambda = j.at("gamma_over_lambda").get<double>();
        c.alpha_sq = j.at("alpha_sq").get<double>();
        c.alpha_sq_count = j.at("alpha_sq_count").get<int>();
        c.beta_phase = j.at("beta_phase").get<double>();
        c.t_max_lambda = j.at("t_max_lambda").get<double>();
        c.dt_lambda = j.at("dt_lambda").get<double>();
        c.sample_every = j.at("sample_every").get<std::int64_t>();
        c.n_max = j.at("n_max").get<int>();
        c.renormalize_trace = j.at("renormalize_trace").get<bool>();
        c.event_threshold = j.at("event_threshold").get<double>();
        c.hold_window = j.at("hold_window").get<double>();
        c.time_axis_scale = j.at("time_axis_scale").get<double>();
        c.output_path = j.at("output_path").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config JSON: ") + e.what());
    }
    return c;
}

json to_json(const EventReport& r) {
    json revivals = json::array();
    for (const auto& v : r.revivals) {
        revivals.push_back({{"start", v.start},
                            {"peak_time", v.peak_time},
                            {"peak_value", v.peak_value},
                            {"end", v.end}});
    }
    return json{{"death_time", optional_number(r.death_time)},
                {"birth_time", optional_number(r.birth_time)},
                {"revivals", std::move(revivals)},
                {"terminal_value", r.terminal_value},
                {"peak_time", r.peak_time},
                {"peak_value", r.peak_value}};
}

json to_json(const CurveDiagnostics& d) {
    json j{{"alpha_sq", d.alpha_sq},
           {"final_trace", d.final_trace},
           {"max_trace_drift", d.max_trace_drift},
           {"max_hermiticity_defect", d.max_hermiticity_defect},
           {"min_eigenvalue", d.min_eigenvalue},
           {"general_concurrence_fallbacks", d.general_fallbacks}};
    if (d.joint_trace_drift) j["joint_trace_drift"] = *d.joint_trace_drift;
    if (d.joint_hermiticity_defect) j["joint_hermiticity_defect"] = *d.joint_hermiticity_defect;
    return j;
}

json summary_json(const RunConfig& config, const ConcurrenceSurface& surface,
                  const std::vector<EventReport>& reports) {
    json curves = json::array();
    double max_drift = 0.0, max_herm = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    double min_trace = std::numeric_limits<double>::infinity();
    double max_trace = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < surface.diagnostics.size(); ++i) {
        const auto& d = surface.diagnostics[i];
        json entry{{"alpha_sq", surface.alpha_sq_values[i]}, {"diagnostics", to_json(d)}};
        if (i < reports.size()) entry["events"] = to_json(reports[i]);
        curves.push_back(std::move(entry));
        max_drift = std::max(max_drift, d.max_trace_drift);
        max_herm = std::max(max_herm, d.max_hermiticity_defect);
        min_eig = std::min(min_eig, d.min_eigenvalue);
    }
    if (surface.trace_re.size() > 0) {
        min_trace = surface.trace_re.minCoeff();
        max_trace = surface.trace_re.maxCoeff();
    }
    return json{
        {"version", version_string},
        {"config", to_json(config)},
        {"gamma_over_lambda", config.gamma_over_lambda},
        {"trace_drift",
         {{"max_abs", max_drift},
          {"min_trace", min_trace},
          {"max_trace", max_trace},
          {"renormalized_for_concurrence", config.renormalize_trace}}},
        {"diagnostics_extrema",
         {{"max_trace_drift", max_drift},
          {"max_hermiticity_defect", max_herm},
          {"min_eigenvalue", min_eig}}},
        {"grid",
         {{"alpha_sq_points", surface.alpha_sq_values.size()},
          {"time_points", surface.time_values.size()}}},
        {"curves", std::move(curves)},
    };
}

EmittedPaths output_paths(const std::string& path) {
    std::string stem = path;
    if (stem.size() > 4 && stem.ends_with(".csv")) stem.resize(stem.size() - 4);
    return {stem + ".csv", stem + ".json"};
}

EmittedPaths emit(const ConcurrenceSurface& surface, const std::vector<EventReport>& reports,
                  const RunConfig& config, const std::string& path) {
    const EmittedPaths paths = output_paths(path);
    {
        std::ofstream csv(paths.csv, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open " + paths.csv + " for writing");
        write_csv(csv, surface, config.time_axis_scale);
        if (!csv.flush()) throw std::runtime_error("failed writing " + paths.csv);
    }
    {
        std::ofstream js(paths.json, std::ios::binary);
        if (!js) throw std::runtime_error("cannot open " + paths.json + " for writing");
        js << summary_json(config, surface, reports).dump(2) << '\n';
        if (!js.flush()) throw std::runtime_error("failed writing " + paths.json);
    }
    return paths;
}

}  // namespace qdyn
