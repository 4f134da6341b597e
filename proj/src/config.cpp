#include "gvof/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gvof {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return fallback;
    consumed_.insert(section + "." + key);
    return k->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size())
        throw std::runtime_error("config key " + section + "." + key +
                                 ": not a number: " + v);
    return d;
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size())
        throw std::runtime_error("config key " + section + "." + key +
                                 ": not an integer: " + v);
    return static_cast<int>(d);
}

std::uint64_t ConfigFile::get_u64(const std::string& section,
                                  const std::string& key,
                                  std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size())
        throw std::runtime_error("config key " + section + "." + key +
                                 ": not an integer: " + v);
    return d;
}

std::vector<std::string> ConfigFile::get_list(
    const std::string& section, const std::string& key,
    const std::vector<std::string>& fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    std::vector<std::string> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void ConfigFile::check_all_consumed() const {
    for (const auto& [section, kv] : sections_)
        for (const auto& [key, value] : kv) {
            const std::string id = section + "." + key;
            if (!consumed_.count(id))
                throw std::runtime_error("unknown config key: " + id);
        }
}

StudyConfig study_config_from(const ConfigFile& cfg) {
    StudyConfig sc;
    sc.nx = cfg.get_int("grid", "nx", sc.nx);
    sc.ny = cfg.get_int("grid", "ny", sc.ny);
    sc.nz = cfg.get_int("grid", "nz", sc.nz);
    sc.sx = cfg.get_double("grid", "sx", sc.sx);
    sc.sy = cfg.get_double("grid", "sy", sc.sy);
    sc.sz = cfg.get_double("grid", "sz", sc.sz);

    sc.body_semi_axis_x_mm =
        cfg.get_double("phantom", "body_semi_axis_x", sc.body_semi_axis_x_mm);
    sc.body_semi_axis_y_mm =
        cfg.get_double("phantom", "body_semi_axis_y", sc.body_semi_axis_y_mm);
    sc.supersample = cfg.get_int("phantom", "supersample", sc.supersample);

    {
        std::vector<std::string> fallback;
        for (double d : sc.durations_s) fallback.push_back(g17(d));
        const auto list = cfg.get_list("acquisition", "durations", fallback);
        sc.durations_s.clear();
        for (const auto& item : list) sc.durations_s.push_back(std::stod(item));
    }
    sc.sensitivity = cfg.get_double("acquisition", "sensitivity", sc.sensitivity);
    sc.psf_fwhm_mm = cfg.get_double("acquisition", "psf_fwhm", sc.psf_fwhm_mm);
    sc.base_seed = cfg.get_u64("acquisition", "seed", sc.base_seed);

    sc.contrasts = cfg.get_list("study", "contrasts", sc.contrasts);
    sc.filters = cfg.get_list("study", "filters", sc.filters);
    sc.realizations = cfg.get_int("study", "realizations", sc.realizations);
    sc.bg_roi_offset_mm[0] =
        cfg.get_double("study", "bg_roi_offset_x", sc.bg_roi_offset_mm[0]);
    sc.bg_roi_offset_mm[1] =
        cfg.get_double("study", "bg_roi_offset_y", sc.bg_roi_offset_mm[1]);
    sc.bg_roi_offset_mm[2] =
        cfg.get_double("study", "bg_roi_offset_z", sc.bg_roi_offset_mm[2]);
    sc.bg_roi_diameter_mm =
        cfg.get_double("study", "bg_roi_diameter", sc.bg_roi_diameter_mm);
    sc.bg_clearance_mm =
        cfg.get_double("study", "bg_clearance", sc.bg_clearance_mm);

    sc.gf.fwhm_mm = cfg.get_double("filter.gf", "fwhm", sc.gf.fwhm_mm);
    sc.bf.spatial_fwhm_mm =
        cfg.get_double("filter.bf", "spatial_fwhm", sc.bf.spatial_fwhm_mm);
    sc.bf.intensity_width =
        cfg.get_double("filter.bf", "intensity_width", sc.bf.intensity_width);
    sc.bf.radius_vox = cfg.get_int("filter.bf", "radius", sc.bf.radius_vox);
    sc.ndf.kappa = cfg.get_double("filter.ndf", "kappa", sc.ndf.kappa);
    sc.ndf.iterations = cfg.get_int("filter.ndf", "iterations", sc.ndf.iterations);
    sc.ndf.dt = cfg.get_double("filter.ndf", "dt", sc.ndf.dt);
    sc.ndf.smooth_fwhm_mm =
        cfg.get_double("filter.ndf", "smooth_fwhm", sc.ndf.smooth_fwhm_mm);
    sc.gvof.kappa = cfg.get_double("filter.gvof", "kappa", sc.gvof.kappa);
    sc.gvof.iterations =
        cfg.get_int("filter.gvof", "iterations", sc.gvof.iterations);
    sc.gvof.smooth_fwhm_mm =
        cfg.get_double("filter.gvof", "smooth_fwhm", sc.gvof.smooth_fwhm_mm);
    sc.gvof.window_p = cfg.get_int("filter.gvof", "window_p", sc.gvof.window_p);
    sc.gvof.window_q = cfg.get_int("filter.gvof", "window_q", sc.gvof.window_q);
    sc.gvof.dt = cfg.get_double("filter.gvof", "dt", sc.gvof.dt);
    if (cfg.has("filter.gvof", "convergence_tol"))
        sc.gvof.convergence_tol =
            cfg.get_double("filter.gvof", "convergence_tol", 0.0);

    cfg.check_all_consumed();
    sc.validate();
    return sc;
}

StudyConfig load_study_config(const std::string& path) {
    return study_config_from(ConfigFile::parse_file(path));
}

std::string study_config_to_string(const StudyConfig& sc) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "nx = " << sc.nx << "\nny = " << sc.ny << "\nnz = " << sc.nz << "\n";
    out << "sx = " << g17(sc.sx) << "\nsy = " << g17(sc.sy)
        << "\nsz = " << g17(sc.sz) << "\n";
    out << "\n[phantom]\n";
    out << "body_semi_axis_x = " << g17(sc.body_semi_axis_x_mm) << "\n";
    out << "body_semi_axis_y = " << g17(sc.body_semi_axis_y_mm) << "\n";
    out << "supersample = " << sc.supersample << "\n";
    out << "\n[acquisition]\n";
    out << "durations = ";
    for (std::size_t t = 0; t < sc.durations_s.size(); ++t)
        out << (t ? "," : "") << g17(sc.durations_s[t]);
    out << "\n";
    out << "sensitivity = " << g17(sc.sensitivity) << "\n";
    out << "psf_fwhm = " << g17(sc.psf_fwhm_mm) << "\n";
    out << "seed = " << sc.base_seed << "\n";
    out << "\n[study]\n";
    out << "contrasts = ";
    for (std::size_t t = 0; t < sc.contrasts.size(); ++t)
        out << (t ? "," : "") << sc.contrasts[t];
    out << "\nfilters = ";
    for (std::size_t t = 0; t < sc.filters.size(); ++t)
        out << (t ? "," : "") << sc.filters[t];
    out << "\nrealizations = " << sc.realizations << "\n";
    out << "bg_roi_offset_x = " << g17(sc.bg_roi_offset_mm[0]) << "\n";
    out << "bg_roi_offset_y = " << g17(sc.bg_roi_offset_mm[1]) << "\n";
    out << "bg_roi_offset_z = " << g17(sc.bg_roi_offset_mm[2]) << "\n";
    out << "bg_roi_diameter = " << g17(sc.bg_roi_diameter_mm) << "\n";
    out << "bg_clearance = " << g17(sc.bg_clearance_mm) << "\n";
    out << "\n[filter.gf]\nfwhm = " << g17(sc.gf.fwhm_mm) << "\n";
    out << "\n[filter.bf]\n";
    out << "spatial_fwhm = " << g17(sc.bf.spatial_fwhm_mm) << "\n";
    out << "intensity_width = " << g17(sc.bf.intensity_width) << "\n";
    out << "radius = " << sc.bf.radius_vox << "\n";
    out << "\n[filter.ndf]\n";
    out << "kappa = " << g17(sc.ndf.kappa) << "\n";
    out << "iterations = " << sc.ndf.iterations << "\n";
    out << "dt = " << g17(sc.ndf.dt) << "\n";
    out << "smooth_fwhm = " << g17(sc.ndf.smooth_fwhm_mm) << "\n";
    out << "\n[filter.gvof]\n";
    out << "kappa = " << g17(sc.gvof.kappa) << "\n";
    out << "iterations = " << sc.gvof.iterations << "\n";
    out << "smooth_fwhm = " << g17(sc.gvof.smooth_fwhm_mm) << "\n";
    out << "window_p = " << sc.gvof.window_p << "\n";
    out << "window_q = " << sc.gvof.window_q << "\n";
    out << "dt = " << g17(sc.gvof.dt) << "\n";
    if (sc.gvof.convergence_tol)
        out << "convergence_tol = " << g17(*sc.gvof.convergence_tol) << "\n";
    return out.str();
}

void save_study_config(const StudyConfig& sc, const std::string& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << study_config_to_string(sc);
    if (!out.good()) throw std::runtime_error("config write failed: " + path);
}

}  // namespace gvof
