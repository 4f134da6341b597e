#pragma once

#include <array>
#include <vector>

#include "gvof/volume.hpp"

namespace gvof {

struct GaussianFitResult {
    double amplitude = 0.0;
    double center = 0.0;    // mm
    double sigma = 0.0;     // mm
    double residual_rms = 0.0;
};

// SNR = 20*log10(mean/SD) over the background mask. Constant ROI throws
// (infinite SNR is not a number).
double snr_db(const Volume& vol, const Mask& bg_mask);

// CNR = (mean over eroded sphere - mean over background) / background SD.
// The sphere mask must already be eroded; an empty one throws with a
// "sphere too small after erosion" message.
double cnr(const Volume& vol, const Mask& eroded_sphere_mask,
           const Mask& bg_mask);

// Least-squares fit of A*exp(-(x-mu)^2/(2*sigma^2)) via Levenberg-Marquardt
// with moment-based initialization. Requires >= 5 samples, nonnegative
// values and a strict interior maximum.
GaussianFitResult fit_gaussian_1d(const std::vector<double>& positions,
                                  const std::vector<double>& values);

// FWHM (mm) from the absolute gradient of the line profile through the
// sphere center along `axis`. The fit segment covers positions in
// [center - diameter, center], i.e. the rising edge; the segment minimum is
// subtracted before fitting and the discrete-derivative smearing (h^2/3
// variance for central differences at sample pitch h) is removed from the
// fitted variance.
double resolution_fwhm(const Volume& vol,
                       const std::array<double, 3>& sphere_center_mm,
                       double sphere_diameter_mm, Axis axis);

// 100 * (ac_max_mean - tac) / tac
double percent_bias(double ac_max_mean, double tac);

// 200 * (high - low) / (high + low)
double percent_difference(double high, double low);

// sample SD / mean
double cov(const std::vector<double>& values);

}  // namespace gvof
