#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gq/asymptotics.hpp"
#include "gq/config.hpp"
#include "gq/distribution.hpp"
#include "gq/gersho.hpp"

namespace gq::io {

/// 17 significant digits, `%.17g` style.
std::string format_real(double v);

/// Fixed field order: r, n, boundaries, codepoints, cell_moments, distortion, method, unique.
std::string quantizer_to_json(const Quantizer& q);

/// Parses the quantizer schema. Cells are clipped to the model's support when
/// one is given; otherwise the outer cells are unbounded.
Quantizer quantizer_from_json(const std::string& text, const DensityModel* model = nullptr);

std::string report_to_json(const ConstructionReport& report);

/// Header `n,distortion,scaled,ratio[,rate]`; only `n,distortion,scaled` when C0 is infinite.
std::string convergence_csv(const ConvergenceTable& table, bool with_rate);

/// Header `n,point_density,error_density,mass_deviation,g4_deviation`.
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);

/// Applies overrides from a JSON object whose keys match SolverConfig fields.
void load_config_file(const std::filesystem::path& path, SolverConfig& cfg);
void apply_config_json(const std::string& text, SolverConfig& cfg);

} // namespace gq::io
