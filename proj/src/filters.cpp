#include "gvof/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gvof {

namespace {
constexpr double kFwhmToSigma = 2.354820045030949;
}

void GfConfig::validate() const {
    if (fwhm_mm <= 0.0) throw std::invalid_argument("GF: fwhm must be > 0");
}

void BfConfig::validate() const {
    if (spatial_fwhm_mm <= 0.0)
        throw std::invalid_argument("BF: spatial fwhm must be > 0");
    if (intensity_width <= 0.0)
        throw std::invalid_argument("BF: intensity width must be > 0");
    if (radius_vox < 1) throw std::invalid_argument("BF: radius must be >= 1");
}

void NdfConfig::validate() const {
    if (kappa <= 0.0) throw std::invalid_argument("NDF: kappa must be > 0");
    if (iterations < 1) throw std::invalid_argument("NDF: iterations must be >= 1");
    if (dt <= 0.0 || dt > 0.25)
        throw std::invalid_argument("NDF: dt must be in (0, 0.25]");
    if (smooth_fwhm_mm <= 0.0)
        throw std::invalid_argument("NDF: smoothing fwhm must be > 0");
}

void GvofConfig::validate() const {
    if (kappa <= 0.0) throw std::invalid_argument("GVOF: kappa must be > 0");
    if (iterations < 1) throw std::invalid_argument("GVOF: iterations must be >= 1");
    if (dt <= 0.0 || dt > 0.25)
        throw std::invalid_argument("GVOF: dt must be in (0, 0.25]");
    if (smooth_fwhm_mm <= 0.0)
        throw std::invalid_argument("GVOF: smoothing fwhm must be > 0");
    if (window_p < 1 || window_q < 1 || window_p % 2 == 0 || window_q % 2 == 0)
        throw std::invalid_argument("GVOF: window extents must be odd >= 1");
    if (convergence_tol && *convergence_tol <= 0.0)
        throw std::invalid_argument("GVOF: convergence tolerance must be > 0");
}

std::string filter_name(const FilterConfig& cfg) {
    struct V {
        std::string operator()(const GfConfig&) const { return "gf"; }
        std::string operator()(const BfConfig&) const { return "bf"; }
        std::string operator()(const NdfConfig&) const { return "ndf"; }
        std::string operator()(const GvofConfig&) const { return "gvof"; }
    };
    return std::visit(V{}, cfg);
}

ScaleInfo normalize_intensity(Volume& vol) {
    vol.check_finite("normalize_intensity");
    auto [lo_it, hi_it] = std::minmax_element(vol.data.begin(), vol.data.end());
    ScaleInfo s{*lo_it, *hi_it, false};
    if (s.max <= s.min) {
        s.identity = true;
        return s;
    }
    const double span = s.max - s.min;
    for (double& v : vol.data) v = (v - s.min) / span;
    return s;
}

void denormalize_intensity(Volume& vol, const ScaleInfo& s) {
    if (s.identity) return;
    const double span = s.max - s.min;
    for (double& v : vol.data) v = v * span + s.min;
}

std::vector<double> coeff_pm(const std::vector<double>& grad_mag, double kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("coeff_pm: kappa must be > 0");
    std::vector<double> c(grad_mag.size());
    for (std::size_t t = 0; t < c.size(); ++t) {
        const double r = grad_mag[t] / kappa;
        c[t] = std::exp(-r * r);
    }
    return c;
}

std::vector<double> coeff_gvof(const std::vector<double>& grad_mag,
                               const std::vector<double>& alpha, double kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("coeff_gvof: kappa must be > 0");
    if (grad_mag.size() != alpha.size())
        throw std::invalid_argument("coeff_gvof: field size mismatch");
    std::vector<double> c(grad_mag.size());
    for (std::size_t t = 0; t < c.size(); ++t) {
        const double r = grad_mag[t] * alpha[t] / kappa;
        c[t] = std::exp(-r * r);
    }
    return c;
}

Slice diffusion_step(const Slice& s, const std::vector<double>& coeff,
                     double dt) {
    if (dt <= 0.0 || dt > 0.25)
        throw std::invalid_argument("diffusion_step: dt must be in (0, 0.25]");
    if (coeff.size() != s.v.size())
        throw std::invalid_argument("diffusion_step: coefficient field size mismatch");
    Slice out = s;
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) {
            const std::size_t t = static_cast<std::size_t>(j) * s.nx + i;
            const double ic = s.v[t], cc = coeff[t];
            double flux = 0.0;
            if (i > 0) {
                const std::size_t n = t - 1;
                flux += 0.5 * (cc + coeff[n]) * (s.v[n] - ic);
            }
            if (i < s.nx - 1) {
                const std::size_t n = t + 1;
                flux += 0.5 * (cc + coeff[n]) * (s.v[n] - ic);
            }
            if (j > 0) {
                const std::size_t n = t - s.nx;
                flux += 0.5 * (cc + coeff[n]) * (s.v[n] - ic);
            }
            if (j < s.ny - 1) {
                const std::size_t n = t + s.nx;
                flux += 0.5 * (cc + coeff[n]) * (s.v[n] - ic);
            }
            out.v[t] = ic + dt * flux;
        }
    return out;
}

Volume run_gaussian(const Volume& vol, const GfConfig& cfg) {
    cfg.validate();
    Volume out = vol;
    for (int z = 0; z < vol.nz; ++z)
        insert_slice(out, z, gaussian_smooth_slice(extract_slice(vol, z), cfg.fwhm_mm));
    return out;
}

Volume run_bilateral(const Volume& vol, const BfConfig& cfg) {
    cfg.validate();
    const double sigma_s = cfg.spatial_fwhm_mm / kFwhmToSigma;
    Volume out = vol;
    const int r = cfg.radius_vox;
    for (int z = 0; z < vol.nz; ++z) {
        Slice s = extract_slice(vol, z);
        auto [lo, hi] = std::minmax_element(s.v.begin(), s.v.end());
        const double range = *hi - *lo;
        if (range <= 0.0) continue;  // constant slice stays as-is
        const double sigma_i = cfg.intensity_width * range;
        // spatial weights are fixed across the slice
        std::vector<double> ws((2 * r + 1) * (2 * r + 1));
        for (int dj = -r; dj <= r; ++dj)
            for (int di = -r; di <= r; ++di) {
                const double d2 = di * s.sx * di * s.sx + dj * s.sy * dj * s.sy;
                ws[(dj + r) * (2 * r + 1) + (di + r)] =
                    std::exp(-d2 / (2.0 * sigma_s * sigma_s));
            }
        Slice o = s;
        for (int j = 0; j < s.ny; ++j)
            for (int i = 0; i < s.nx; ++i) {
                const double center = s.at(i, j);
                double num = 0.0, den = 0.0;
                for (int dj = -r; dj <= r; ++dj) {
                    const int jj = j + dj;
                    if (jj < 0 || jj >= s.ny) continue;
                    for (int di = -r; di <= r; ++di) {
                        const int ii = i + di;
                        if (ii < 0 || ii >= s.nx) continue;
                        const double v = s.at(ii, jj);
                        const double dv = v - center;
                        const double w =
                            ws[(dj + r) * (2 * r + 1) + (di + r)] *
                            std::exp(-dv * dv / (2.0 * sigma_i * sigma_i));
                        num += w * v;
                        den += w;
                    }
                }
                o.at(i, j) = num / den;
            }
        insert_slice(out, z, o);
    }
    return out;
}

Volume run_ndf(const Volume& vol, const NdfConfig& cfg) {
    cfg.validate();
    Volume work = vol;
    const ScaleInfo scale = normalize_intensity(work);
    for (int z = 0; z < work.nz; ++z) {
        Slice s = extract_slice(work, z);
        // Gradients come from a once-smoothed copy of the original slice;
        // the coefficient field stays frozen across iterations.
        const Slice smoothed = gaussian_smooth_slice(s, cfg.smooth_fwhm_mm);
        const GradientField g =
            gradient_2d(smoothed, kCoeffGradSpacing, kCoeffGradSpacing);
        const std::vector<double> c = coeff_pm(g.mag, cfg.kappa);
        for (int t = 0; t < cfg.iterations; ++t) s = diffusion_step(s, c, cfg.dt);
        insert_slice(work, z, s);
    }
    denormalize_intensity(work, scale);
    return work;
}

Volume run_gvof(const Volume& vol, const GvofConfig& cfg) {
    cfg.validate();
    Volume work = vol;
    const ScaleInfo scale = normalize_intensity(work);
    for (int z = 0; z < work.nz; ++z) {
        Slice cur =
            gaussian_smooth_slice(extract_slice(work, z), cfg.smooth_fwhm_mm);
        for (int t = 0; t < cfg.iterations; ++t) {
            const GradientField g =
                gradient_2d(cur, kCoeffGradSpacing, kCoeffGradSpacing);
            std::vector<double> alpha;
            if (cfg.force_alpha_one) {
                alpha.assign(g.mag.size(), 1.0);
            } else {
                const std::vector<double> raw =
                    orientation_sum(g, cfg.window_p, cfg.window_q);
                alpha = normalize_minmax(raw, g.nx, g.ny, cfg.window_p,
                                         cfg.window_q)
                            .alpha;
            }
            const std::vector<double> c = coeff_gvof(g.mag, alpha, cfg.kappa);
            const Slice next = diffusion_step(cur, c, cfg.dt);
            if (cfg.convergence_tol) {
                double diff = 0.0, norm = 0.0;
                for (std::size_t u = 0; u < cur.v.size(); ++u) {
                    diff += std::abs(next.v[u] - cur.v[u]);
                    norm += std::abs(cur.v[u]);
                }
                cur = next;
                if (norm > 0.0 && diff / norm < *cfg.convergence_tol) break;
            } else {
                cur = next;
            }
        }
        insert_slice(work, z, cur);
    }
    denormalize_intensity(work, scale);
    return work;
}

Volume apply_filter(const Volume& vol, const FilterConfig& cfg) {
    struct V {
        const Volume& vol;
        Volume operator()(const GfConfig& c) const { return run_gaussian(vol, c); }
        Volume operator()(const BfConfig& c) const { return run_bilateral(vol, c); }
        Volume operator()(const NdfConfig& c) const { return run_ndf(vol, c); }
        Volume operator()(const GvofConfig& c) const { return run_gvof(vol, c); }
    };
    return std::visit(V{vol}, cfg);
}

}  // namespace gvof
