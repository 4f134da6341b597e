#pragma once

#include <vector>

#include "gvof/volume.hpp"

namespace gvof {

// Per-pixel gradient of one slice plus its magnitude field.
struct GradientField {
    int nx = 0, ny = 0;
    std::vector<double> gx, gy, mag;

    double magnitude(int i, int j) const {
        return mag[static_cast<std::size_t>(j) * nx + i];
    }
};

// Orientation-coherence field, normalized to [0,1] per slice.
struct CoherenceField {
    int nx = 0, ny = 0;
    int window_p = 3, window_q = 3;
    std::vector<double> alpha;
};

// Discrete 1D Gaussian, sigma derived from FWHM (sigma = fwhm/2.35482),
// converted to voxel units by `spacing`. Radius = max(1, ceil(3*sigma_vox)),
// weights renormalized to sum exactly 1. Returns the full symmetric tap
// list of length 2*radius+1.
std::vector<double> gaussian_kernel_1d(double fwhm_mm, double spacing_mm);

// Separable x-then-y convolution with replicate borders, per-axis spacing.
Slice gaussian_smooth_slice(const Slice& s, double fwhm_mm);

// Central differences in the interior, one-sided at borders, scaled by the
// given sample spacings. Throws if either dim < 3.
GradientField gradient_2d(const Slice& s, double sx, double sy);
inline GradientField gradient_2d(const Slice& s) {
    return gradient_2d(s, s.sx, s.sy);
}

// Sum over the p x q window (clipped at borders) of the cosine of the angle
// between the center gradient and each neighbor gradient. Terms where either
// magnitude falls below 1e-12 * (slice max magnitude) contribute 0; a
// below-threshold center yields raw value 0.
std::vector<double> orientation_sum(const GradientField& gf, int p, int q);

// Affine min-max rescale of the raw orientation sums to [0,1]. A degenerate
// (nearly constant) field maps to all ones.
CoherenceField normalize_minmax(const std::vector<double>& raw, int nx, int ny,
                                int p, int q);

}  // namespace gvof
