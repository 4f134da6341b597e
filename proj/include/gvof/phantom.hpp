#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gvof/volume.hpp"

namespace gvof {

struct SphereSpec {
    std::array<double, 3> center_mm{};  // grid coordinates (voxel 0 at 0 mm)
    double diameter_mm = 0.0;
    double activity = 0.0;  // kBq/ml
};

// Torso-style phantom: six hot spheres in a warm elliptical-cylinder body,
// zero activity outside the body.
struct PhantomSpec {
    int nx = 256, ny = 256, nz = 109;
    double sx = 2.67, sy = 2.67, sz = 2.0;
    double background_activity = 838.0;
    std::vector<SphereSpec> spheres;
    // body cylinder, centered on the grid, axis along z
    double body_semi_axis_x_mm = 150.0;
    double body_semi_axis_y_mm = 110.0;
    double body_height_mm = 1e9;  // clipped to the grid by default

    std::array<double, 3> grid_center_mm() const {
        return {(nx - 1) * 0.5 * sx, (ny - 1) * 0.5 * sy, (nz - 1) * 0.5 * sz};
    }
    void validate() const;
};

// Stand-in for the scanner + reconstruction chain: PSF blur, count scaling
// and voxelwise Poisson sampling.
struct AcquisitionModel {
    double duration_s = 900.0;
    double sensitivity = 1.2065e-5;  // expected counts per kBq/ml per s per voxel
    double psf_fwhm_mm = 4.5;
    std::uint64_t seed = 1;

    void validate() const;
};

// Named contrast presets from the study design.
struct ContrastPreset {
    std::string label;        // "2:1" or "4:1"
    double sphere_activity;   // kBq/ml
    double background_activity;
};
ContrastPreset contrast_preset(const std::string& label);

// Standard six-sphere layout (diameters 37..10 mm at 60-degree steps on a
// 57.2 mm circle in the central slice), activities from the preset.
PhantomSpec default_phantom_spec(const ContrastPreset& preset, int nx, int ny,
                                 int nz, double sx, double sy, double sz);

// Volume-fraction rasterization with n^3 subsamples per voxel.
Volume rasterize_phantom(const PhantomSpec& spec, int supersample = 4);

// Blur + scale + Poisson; deterministic given the model seed.
Volume simulate_acquisition(const Volume& truth, const AcquisitionModel& model);

// n acquisitions of the same truth with seeds base_seed + 0..n-1.
std::vector<Volume> generate_realizations(const Volume& truth,
                                          const AcquisitionModel& model, int n,
                                          std::uint64_t base_seed);

// Separable 3D Gaussian blur with replicate borders (exposed for tests).
Volume gaussian_blur_3d(const Volume& vol, double fwhm_mm);

}  // namespace gvof
