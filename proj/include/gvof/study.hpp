#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gvof/filters.hpp"
#include "gvof/phantom.hpp"
#include "gvof/volume.hpp"

namespace gvof {

// Full factorial study: contrasts x durations x filters x realizations.
struct StudyConfig {
    // grid (default desk-scale; the full 256x256x109 matrix is a config away)
    int nx = 128, ny = 128, nz = 32;
    double sx = 2.67, sy = 2.67, sz = 2.0;
    double body_semi_axis_x_mm = 150.0;
    double body_semi_axis_y_mm = 110.0;
    int supersample = 4;

    std::vector<std::string> contrasts = {"2:1", "4:1"};
    std::vector<double> durations_s = {900.0, 1200.0, 2000.0, 4000.0};
    double sensitivity = AcquisitionModel{}.sensitivity;
    double psf_fwhm_mm = AcquisitionModel{}.psf_fwhm_mm;
    int realizations = 5;
    std::uint64_t base_seed = 20240801;

    // "none" runs the metrics on the raw acquisition
    std::vector<std::string> filters = {"none", "gf", "bf", "ndf", "gvof"};
    GfConfig gf;
    BfConfig bf;
    NdfConfig ndf;
    GvofConfig gvof;

    // background ROI, offset from the grid center
    std::array<double, 3> bg_roi_offset_mm = {-118.0, 0.0, 0.0};
    double bg_roi_diameter_mm = 37.0;
    double bg_clearance_mm = 30.0;

    int jobs = 1;

    void validate() const;
    FilterConfig filter_config(const std::string& name) const;
};

struct ReportRow {
    std::string contrast;
    double duration_s = 0.0;
    std::string filter;
    int realization = -1;  // -1 marks an aggregate row
    double sphere_mm = 0.0;
    std::optional<double> snr_db;
    std::optional<double> cnr;
    std::optional<double> fwhm_mm;
    std::optional<double> ac_max;
    std::optional<double> bias_pct;
    std::optional<double> repro_pct;
    std::optional<double> cov_snr;
};

struct MetricsReport {
    std::vector<ReportRow> rows;
    int dilation_radius_vox = 1;  // max-search region = geometric mask dilated
    std::string notes;
};

// Deterministic given seeds; cells may run in parallel (config.jobs) with
// output identical to sequential execution.
MetricsReport experiment_report(const StudyConfig& config);

// Seed used for realization k of a (contrast, duration) cell.
std::uint64_t cell_base_seed(const StudyConfig& config, std::size_t contrast_idx,
                             std::size_t duration_idx);

}  // namespace gvof
