#include "cars/output.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "cars/errors.hpp"

namespace cars {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.empty()) throw ConfigError("atomic_write: empty path");
    const auto dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericsError("atomic_write: cannot open " + tmp);
        out << content;
        if (!out) throw NumericsError("atomic_write: short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string spectrum_csv(const PolarizationSpectrum& spectrum) {
    std::string out = "omega_as_cm1,re_Pr,im_Pr,re_Pnr,im_Pnr,abs_Pr,abs_Pnr,I_cars\n";
    for (std::size_t i = 0; i < spectrum.anti_stokes_offsets.size(); ++i) {
        const auto& pr = spectrum.resonant[i];
        const auto& pnr = spectrum.nonresonant[i];
        out += format_double(spectrum.anti_stokes_offsets[i]);
        out += ',';
        out += format_double(pr.real());
        out += ',';
        out += format_double(pr.imag());
        out += ',';
        out += format_double(pnr.real());
        out += ',';
        out += format_double(pnr.imag());
        out += ',';
        out += format_double(std::abs(pr));
        out += ',';
        out += format_double(std::abs(pnr));
        out += ',';
        out += format_double(spectrum.cars_intensity[i]);
        out += '\n';
    }
    return out;
}

void write_spectrum_csv(const std::filesystem::path& path, const PolarizationSpectrum& spectrum) {
    atomic_write(path, spectrum_csv(spectrum));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    atomic_write(path, doc.dump(2) + "\n");
}

std::string phase_table_csv(const PhaseProfile& phase, const std::vector<double>& node_offsets) {
    std::string out = "node_offset_cm1,phase_rad\n";
    for (double w : node_offsets) {
        out += format_double(w);
        out += ',';
        out += format_double(phase(w));
        out += '\n';
    }
    return out;
}

nlohmann::json phase_to_json(const PhaseProfile& phase, const std::vector<double>& node_offsets) {
    std::vector<double> values;
    values.reserve(node_offsets.size());
    for (double w : node_offsets) values.push_back(phase(w));
    return nlohmann::json{{"scheme", "tabulated"},
                          {"node_offsets_cm1", node_offsets},
                          {"node_values_rad", values}};
}

std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
    std::filesystem::path p = base;
    p.replace_extension();
    p += suffix;
    return p;
}

}  // namespace cars
