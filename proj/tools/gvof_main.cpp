#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gvof/config.hpp"
#include "gvof/io.hpp"
#include "gvof/metrics.hpp"
#include "gvof/study.hpp"

namespace fs = std::filesystem;
using namespace gvof;

namespace {

void ensure_writable_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path probe = fs::path(dir) / ".write_probe";
    std::ofstream f(probe);
    if (!f.good())
        throw std::runtime_error("output directory not writable: " + dir);
    f.close();
    fs::remove(probe, ec);
}

std::string duration_tag(double d) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", d);
    return buf;
}

// "2:1" -> "2to1"
std::string contrast_tag(const std::string& label) {
    std::string t;
    for (char c : label) {
        if (c == ':')
            t += "to";
        else
            t += c;
    }
    return t;
}

int cmd_phantom(const std::string& config_path, const std::string& out_dir,
                std::optional<std::string> contrast,
                std::optional<double> duration, std::optional<int> realizations) {
    StudyConfig sc = config_path.empty() ? StudyConfig{}
                                         : load_study_config(config_path);
    ensure_writable_dir(out_dir);
    const std::string label = contrast.value_or(sc.contrasts.at(0));
    const double dur = duration.value_or(sc.durations_s.at(0));
    const int n = realizations.value_or(sc.realizations);

    const ContrastPreset preset = contrast_preset(label);
    PhantomSpec spec = default_phantom_spec(preset, sc.nx, sc.ny, sc.nz, sc.sx,
                                            sc.sy, sc.sz);
    spec.body_semi_axis_x_mm = sc.body_semi_axis_x_mm;
    spec.body_semi_axis_y_mm = sc.body_semi_axis_y_mm;
    spec.validate();
    const Volume truth = rasterize_phantom(spec, sc.supersample);

    AcquisitionModel model;
    model.duration_s = dur;
    model.sensitivity = sc.sensitivity;
    model.psf_fwhm_mm = sc.psf_fwhm_mm;

    std::cout << "phantom: contrast " << label << ", duration " << dur
              << " s, " << n << " realization(s)\n";
    const auto vols = generate_realizations(truth, model, n, sc.base_seed);
    for (int k = 0; k < n; ++k) {
        const std::string path =
            (fs::path(out_dir) / ("phantom_" + contrast_tag(label) + "_" +
                                  duration_tag(dur) + "s_r" +
                                  std::to_string(k) + ".gvol"))
                .string();
        write_volume(vols[static_cast<std::size_t>(k)], path);
        std::cout << "  seed " << sc.base_seed + static_cast<std::uint64_t>(k)
                  << " -> " << path << "\n";
    }
    return 0;
}

int cmd_filter(const std::string& in_path, const std::string& out_path,
               const FilterConfig& cfg) {
    const Volume in = read_volume(in_path);
    const Volume out = apply_filter(in, cfg);
    write_volume(out, out_path);
    std::cout << "filter " << filter_name(cfg) << ": " << in_path << " -> "
              << out_path << "\n";
    struct Log {
        void operator()(const GfConfig& c) const {
            std::cout << "  fwhm=" << c.fwhm_mm << " mm\n";
        }
        void operator()(const BfConfig& c) const {
            std::cout << "  spatial_fwhm=" << c.spatial_fwhm_mm
                      << " mm intensity_width=" << c.intensity_width
                      << " radius=" << c.radius_vox << "\n";
        }
        void operator()(const NdfConfig& c) const {
            std::cout << "  kappa=" << c.kappa << " iterations=" << c.iterations
                      << " dt=" << c.dt << " smooth_fwhm=" << c.smooth_fwhm_mm
                      << " mm\n";
        }
        void operator()(const GvofConfig& c) const {
            std::cout << "  kappa=" << c.kappa << " iterations=" << c.iterations
                      << " smooth_fwhm=" << c.smooth_fwhm_mm << " mm window="
                      << c.window_p << "x" << c.window_q << " dt=" << c.dt
                      << "\n";
        }
    };
    std::visit(Log{}, cfg);
    return 0;
}

int cmd_study(const std::string& config_path, const std::string& out_dir,
              int jobs, bool full_grid, bool write_volumes) {
    StudyConfig sc = config_path.empty() ? StudyConfig{}
                                         : load_study_config(config_path);
    if (full_grid) {
        sc.nx = 256;
        sc.ny = 256;
        sc.nz = 109;
    }
    sc.jobs = jobs;
    ensure_writable_dir(out_dir);

    save_study_config(sc, (fs::path(out_dir) / "manifest.cfg").string());
    const MetricsReport report = experiment_report(sc);
    write_report_csv(report, (fs::path(out_dir) / "report.csv").string());

    if (write_volumes) {
        for (std::size_t ci = 0; ci < sc.contrasts.size(); ++ci) {
            const ContrastPreset preset = contrast_preset(sc.contrasts[ci]);
            PhantomSpec spec = default_phantom_spec(preset, sc.nx, sc.ny, sc.nz,
                                                    sc.sx, sc.sy, sc.sz);
            spec.body_semi_axis_x_mm = sc.body_semi_axis_x_mm;
            spec.body_semi_axis_y_mm = sc.body_semi_axis_y_mm;
            const Volume truth = rasterize_phantom(spec, sc.supersample);
            for (std::size_t di = 0; di < sc.durations_s.size(); ++di) {
                AcquisitionModel model;
                model.duration_s = sc.durations_s[di];
                model.sensitivity = sc.sensitivity;
                model.psf_fwhm_mm = sc.psf_fwhm_mm;
                const auto vols = generate_realizations(
                    truth, model, sc.realizations, cell_base_seed(sc, ci, di));
                for (int k = 0; k < sc.realizations; ++k) {
                    const std::string path =
                        (fs::path(out_dir) /
                         ("acq_" + contrast_tag(sc.contrasts[ci]) + "_" +
                          duration_tag(sc.durations_s[di]) + "s_r" +
                          std::to_string(k) + ".gvol"))
                            .string();
                    write_volume(vols[static_cast<std::size_t>(k)], path);
                }
            }
        }
    }
    std::cout << "study: " << sc.contrasts.size() << " contrast(s) x "
              << sc.durations_s.size() << " duration(s) x " << sc.filters.size()
              << " filter(s) x " << sc.realizations << " realization(s)\n"
              << "  report: " << (fs::path(out_dir) / "report.csv").string()
              << "\n  manifest: "
              << (fs::path(out_dir) / "manifest.cfg").string() << "\n";
    return 0;
}

int cmd_defaults() {
    const StudyConfig sc;
    std::cout << study_config_to_string(sc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GVOF volumetric denoising toolkit"};
    app.require_subcommand(1);

    // phantom
    auto* phantom = app.add_subcommand("phantom", "generate noisy phantom volumes");
    std::string p_config, p_out = "out";
    std::string p_contrast;
    double p_duration = -1.0;
    int p_realizations = -1;
    phantom->add_option("--config", p_config, "study config file");
    phantom->add_option("--out", p_out, "output directory");
    phantom->add_option("--contrast", p_contrast, "contrast preset (2:1 or 4:1)");
    phantom->add_option("--duration", p_duration, "acquisition duration in s");
    phantom->add_option("--realizations", p_realizations, "realization count");

    // filter
    auto* filter = app.add_subcommand("filter", "apply one filter to a volume");
    std::string f_in, f_out, f_name;
    filter->add_option("--in", f_in, "input volume")->required();
    filter->add_option("--out", f_out, "output volume")->required();
    filter->add_option("--filter", f_name, "gf | bf | ndf | gvof")->required();
    const GfConfig gf_def;
    const BfConfig bf_def;
    const NdfConfig ndf_def;
    const GvofConfig gvof_def;
    double f_fwhm = gf_def.fwhm_mm;
    double f_spatial_fwhm = bf_def.spatial_fwhm_mm;
    double f_intensity_width = bf_def.intensity_width;
    int f_radius = bf_def.radius_vox;
    double f_kappa = -1.0;  // per-filter default resolved below
    int f_iterations = -1;
    double f_dt = ndf_def.dt;
    double f_smooth_fwhm = ndf_def.smooth_fwhm_mm;
    int f_window = gvof_def.window_p;
    double f_tol = -1.0;
    filter->add_option("--fwhm", f_fwhm, "GF kernel FWHM (mm)");
    filter->add_option("--spatial-fwhm", f_spatial_fwhm, "BF spatial FWHM (mm)");
    filter->add_option("--intensity-width", f_intensity_width,
                       "BF intensity width (fraction of slice range)");
    filter->add_option("--radius", f_radius, "BF window radius (voxels)");
    filter->add_option("--kappa", f_kappa, "diffusion kappa");
    filter->add_option("--iterations", f_iterations, "diffusion iterations");
    filter->add_option("--dt", f_dt, "diffusion time step");
    filter->add_option("--smooth-fwhm", f_smooth_fwhm,
                       "gradient-smoothing FWHM (mm)");
    filter->add_option("--window", f_window, "GVOF window extent (odd)");
    filter->add_option("--convergence-tol", f_tol,
                       "GVOF relative L1 convergence threshold");

    // study
    auto* study = app.add_subcommand("study", "run the full experiment grid");
    std::string s_config, s_out = "out";
    int s_jobs = 1;
    bool s_full = false, s_volumes = false;
    study->add_option("--config", s_config, "study config file");
    study->add_option("--out", s_out, "output directory");
    study->add_option("--jobs", s_jobs, "parallel workers");
    study->add_flag("--full-grid", s_full, "use the full 256x256x109 matrix");
    study->add_flag("--write-volumes", s_volumes,
                    "also write the acquired volumes");

    auto* defaults = app.add_subcommand("defaults", "print resolved defaults");
    (void)defaults;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (phantom->parsed())
            return cmd_phantom(
                p_config, p_out,
                p_contrast.empty() ? std::nullopt
                                   : std::optional<std::string>(p_contrast),
                p_duration > 0 ? std::optional<double>(p_duration) : std::nullopt,
                p_realizations > 0 ? std::optional<int>(p_realizations)
                                   : std::nullopt);
        if (filter->parsed()) {
            FilterConfig cfg;
            if (f_name == "gf") {
                GfConfig c;
                c.fwhm_mm = f_fwhm;
                cfg = c;
            } else if (f_name == "bf") {
                BfConfig c;
                c.spatial_fwhm_mm = f_spatial_fwhm;
                c.intensity_width = f_intensity_width;
                c.radius_vox = f_radius;
                cfg = c;
            } else if (f_name == "ndf") {
                NdfConfig c;
                if (f_kappa > 0) c.kappa = f_kappa;
                if (f_iterations > 0) c.iterations = f_iterations;
                c.dt = f_dt;
                c.smooth_fwhm_mm = f_smooth_fwhm;
                cfg = c;
            } else if (f_name == "gvof") {
                GvofConfig c;
                if (f_kappa > 0) c.kappa = f_kappa;
                if (f_iterations > 0) c.iterations = f_iterations;
                c.dt = f_dt;
                c.smooth_fwhm_mm = f_smooth_fwhm;
                c.window_p = c.window_q = f_window;
                if (f_tol > 0) c.convergence_tol = f_tol;
                cfg = c;
            } else {
                std::cerr << "unknown filter name: " << f_name
                          << " (expected gf, bf, ndf or gvof)\n";
                return 2;
            }
            std::visit([](const auto& c) { c.validate(); }, cfg);
            return cmd_filter(f_in, f_out, cfg);
        }
        if (study->parsed())
            return cmd_study(s_config, s_out, s_jobs, s_full, s_volumes);
        if (defaults->parsed()) return cmd_defaults();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
