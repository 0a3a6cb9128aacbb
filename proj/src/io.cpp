#include "gq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gq/errors.hpp"

namespace gq::io {

namespace {

// JSON has no nan/inf literals.
std::string json_real(double v) { return std::isfinite(v) ? format_real(v) : "null"; }

std::string real_list(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += json_real(values[i]);
    }
    return out + "]";
}

std::vector<double> read_reals(const nlohmann::json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end() || !it->is_array()) {
        throw Error(ErrorCode::ParseError, std::string("quantizer JSON: '") + key + "' must be an array");
    }
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) {
            throw Error(ErrorCode::ParseError, std::string("quantizer JSON: '") + key + "' holds a non-number");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quantizer_to_json(const Quantizer& q) {
    std::ostringstream os;
    os << "{\n"
       << "  \"r\": " << json_real(q.order.value()) << ",\n"
       << "  \"n\": " << q.level() << ",\n"
       << "  \"boundaries\": " << real_list(q.boundaries) << ",\n"
       << "  \"codepoints\": " << real_list(q.codepoints) << ",\n"
       << "  \"cell_moments\": " << real_list(q.cell_moments) << ",\n"
       << "  \"distortion\": " << json_real(q.distortion()) << ",\n"
       << "  \"method\": \"" << to_string(q.method) << "\",\n"
       << "  \"unique\": " << (q.unique ? "true" : "false") << "\n"
       << "}\n";
    return os.str();
}

Quantizer quantizer_from_json(const std::string& text, const DensityModel* model) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("quantizer JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "quantizer JSON must be an object");
    try {
        const double r = doc.at("r").get<double>();
        const auto n = doc.at("n").get<long long>();
        auto boundaries = read_reals(doc, "boundaries");
        auto codepoints = read_reals(doc, "codepoints");
        auto moments = read_reals(doc, "cell_moments");
        if (n < 1 || codepoints.size() != static_cast<std::size_t>(n) ||
            boundaries.size() + 1 != static_cast<std::size_t>(n) || moments.size() != static_cast<std::size_t>(n)) {
            throw Error(ErrorCode::ParseError, "quantizer JSON: array lengths do not match n");
        }
        const Method method = doc.contains("method") ? method_from_string(doc.at("method").get<std::string>())
                                                     : Method::OuterBisection;
        const bool unique = doc.contains("unique") ? doc.at("unique").get<bool>() : false;
        const double lo = model ? model->support_lo() : -std::numeric_limits<double>::infinity();
        const double hi = model ? model->support_hi() : std::numeric_limits<double>::infinity();
        return Quantizer(Order(r), std::move(boundaries), std::move(codepoints), std::move(moments), lo, hi, method,
                         unique);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("quantizer JSON: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(ErrorCode::ParseError, std::string("quantizer JSON: ") + e.what());
    }
}

std::string report_to_json(const ConstructionReport& report) {
    std::ostringstream os;
    os << "{\n"
       << "  \"distortion\": " << json_real(report.distortion) << ",\n"
       << "  \"per_cell_spread\": " << json_real(report.per_cell_spread) << ",\n"
       << "  \"outer_iterations\": " << report.outer_iterations << ",\n"
       << "  \"residual_history\": " << real_list(report.residual_history) << ",\n"
       << "  \"method\": \"" << to_string(report.method) << "\",\n"
       << "  \"unique\": " << (report.unique ? "true" : "false") << "\n"
       << "}\n";
    return os.str();
}

std::string convergence_csv(const ConvergenceTable& table, bool with_rate) {
    const bool finite = table.zador.has_value();
    std::string out = finite ? (with_rate ? "n,distortion,scaled,ratio,rate\n" : "n,distortion,scaled,ratio\n")
                             : "n,distortion,scaled\n";
    for (const auto& row : table.rows) {
        out += std::to_string(row.n) + "," + format_real(row.distortion) + "," + format_real(row.scaled);
        if (finite) {
            out += "," + format_real(row.ratio);
            if (with_rate) out += "," + format_real(row.rate);
        }
        out += "\n";
    }
    return out;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
    std::string out = "n,point_density,error_density,mass_deviation,g4_deviation\n";
    for (const auto& row : rows) {
        out += std::to_string(row.n) + "," + format_real(row.point_density) + "," + format_real(row.error_density) +
               "," + format_real(row.mass_deviation) + "," + format_real(row.g4_deviation) + "\n";
    }
    return out;
}

void apply_config_json(const std::string& text, SolverConfig& cfg) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
    SolverConfig next = cfg;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number()) throw Error(ErrorCode::ParseError, "config key '" + key + "' must be numeric");
        next.set(key, value.get<double>());
    }
    cfg = next;
}

void load_config_file(const std::filesystem::path& path, SolverConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_json(ss.str(), cfg);
}

} // namespace gq::io
