#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cars/optimize.hpp"
#include "cars/polarization.hpp"

namespace cars {

// All writers are atomic: content goes to a temporary file in the target
// directory which is then renamed over the destination.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// SpectrumRecord rows: fixed header
// omega_as_cm1,re_Pr,im_Pr,re_Pnr,im_Pnr,abs_Pr,abs_Pnr,I_cars
std::string spectrum_csv(const PolarizationSpectrum& spectrum);
void write_spectrum_csv(const std::filesystem::path& path, const PolarizationSpectrum& spectrum);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// node table with header node_offset_cm1,phase_rad
std::string phase_table_csv(const PhaseProfile& phase, const std::vector<double>& node_offsets);

// mask serialized as a tabulated scheme object sampled at node_offsets
nlohmann::json phase_to_json(const PhaseProfile& phase, const std::vector<double>& node_offsets);

// derived path helpers: "out.csv" -> "out.summary.json", "out.k3.phase.csv"
std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix);

}  // namespace cars
