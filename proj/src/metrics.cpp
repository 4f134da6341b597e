#include "gvof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gvof {

namespace {
constexpr double kFwhmToSigma = 2.354820045030949;
}

double snr_db(const Volume& vol, const Mask& bg_mask) {
    const RoiStats s = roi_stats(vol, bg_mask);
    if (s.mean <= 0.0)
        throw std::invalid_argument("snr_db: ROI mean must be > 0");
    if (s.sd == 0.0)
        throw std::runtime_error("snr_db: constant ROI (infinite SNR)");
    return 20.0 * std::log10(s.mean / s.sd);
}

double cnr(const Volume& vol, const Mask& eroded_sphere_mask,
           const Mask& bg_mask) {
    if (eroded_sphere_mask.count() == 0)
        throw std::runtime_error("cnr: sphere too small after erosion");
    const RoiStats sp = roi_stats(vol, eroded_sphere_mask);
    const RoiStats bg = roi_stats(vol, bg_mask);
    if (bg.sd == 0.0) throw std::runtime_error("cnr: background SD is zero");
    return (sp.mean - bg.mean) / bg.sd;
}

GaussianFitResult fit_gaussian_1d(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 5 || ys.size() != n)
        throw std::invalid_argument("fit_gaussian_1d: need >= 5 samples");
    std::size_t imax = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (ys[t] < 0.0)
            throw std::invalid_argument("fit_gaussian_1d: values must be >= 0");
        if (ys[t] > ys[imax]) imax = t;
    }
    if (imax == 0 || imax == n - 1)
        throw std::invalid_argument("fit_gaussian_1d: no strict interior maximum");

    // moment init
    double w = 0.0, wx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        w += ys[t];
        wx += ys[t] * xs[t];
    }
    if (w <= 0.0) throw std::invalid_argument("fit_gaussian_1d: all-zero values");
    double mu = wx / w;
    double wxx = 0.0;
    for (std::size_t t = 0; t < n; ++t)
        wxx += ys[t] * (xs[t] - mu) * (xs[t] - mu);
    double sigma = std::sqrt(std::max(wxx / w, 1e-12));
    double amp = ys[imax];

    auto cost = [&](double a, double m, double s) {
        double c = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double e = (xs[t] - m) / s;
            const double r = a * std::exp(-0.5 * e * e) - ys[t];
            c += r * r;
        }
        return c;
    };

    double lambda = 1e-3;
    double best_cost = cost(amp, mu, sigma);
    for (int it = 0; it < 200; ++it) {
        // normal equations for (A, mu, sigma)
        double JtJ[3][3] = {};
        double Jtr[3] = {};
        for (std::size_t t = 0; t < n; ++t) {
            const double d = xs[t] - mu;
            const double e = std::exp(-0.5 * d * d / (sigma * sigma));
            const double f = amp * e;
            const double r = f - ys[t];
            const double j[3] = {e, f * d / (sigma * sigma),
                                 f * d * d / (sigma * sigma * sigma)};
            for (int a = 0; a < 3; ++a) {
                Jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) JtJ[a][b] += j[a] * j[b];
            }
        }
        double step[3] = {};
        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            double M[3][4];
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) M[a][b] = JtJ[a][b];
                M[a][a] *= 1.0 + lambda;
                M[a][3] = -Jtr[a];
            }
            // Gaussian elimination with partial pivoting
            bool singular = false;
            for (int col = 0; col < 3 && !singular; ++col) {
                int piv = col;
                for (int row = col + 1; row < 3; ++row)
                    if (std::abs(M[row][col]) > std::abs(M[piv][col])) piv = row;
                if (std::abs(M[piv][col]) < 1e-300) {
                    singular = true;
                    break;
                }
                std::swap(M[piv], M[col]);
                for (int row = 0; row < 3; ++row) {
                    if (row == col) continue;
                    const double fct = M[row][col] / M[col][col];
                    for (int c2 = col; c2 < 4; ++c2) M[row][c2] -= fct * M[col][c2];
                }
            }
            if (singular) {
                lambda *= 10.0;
                continue;
            }
            for (int a = 0; a < 3; ++a) step[a] = M[a][3] / M[a][a];
            const double na = amp + step[0], nm = mu + step[1],
                         ns = sigma + step[2];
            if (!(ns > 0.0) || !std::isfinite(na) || !std::isfinite(nm) ||
                !std::isfinite(ns)) {
                lambda *= 10.0;
                continue;
            }
            const double c = cost(na, nm, ns);
            if (c <= best_cost) {
                amp = na;
                mu = nm;
                sigma = ns;
                best_cost = c;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) break;  // no improving step left
        const double rel = std::max(
            {std::abs(step[0]) / std::max(std::abs(amp), 1e-12),
             std::abs(step[1]) / std::max(std::abs(mu), 1e-12),
             std::abs(step[2]) / std::max(std::abs(sigma), 1e-12)});
        if (rel < 1e-8) break;
    }
    if (!(sigma > 0.0) || !std::isfinite(best_cost))
        throw std::runtime_error("fit_gaussian_1d: fit diverged, residual " +
                                 std::to_string(best_cost));
    GaussianFitResult res;
    res.amplitude = amp;
    res.center = mu;
    res.sigma = sigma;
    res.residual_rms = std::sqrt(best_cost / static_cast<double>(n));
    return res;
}

double resolution_fwhm(const Volume& vol,
                       const std::array<double, 3>& center_mm,
                       double diameter_mm, Axis axis) {
    double axis_spacing, axis_center;
    std::array<int, 2> fixed{};
    switch (axis) {
        case Axis::X:
            axis_spacing = vol.sx;
            axis_center = center_mm[0];
            fixed = {static_cast<int>(std::lround(center_mm[1] / vol.sy)),
                     static_cast<int>(std::lround(center_mm[2] / vol.sz))};
            break;
        case Axis::Y:
            axis_spacing = vol.sy;
            axis_center = center_mm[1];
            fixed = {static_cast<int>(std::lround(center_mm[0] / vol.sx)),
                     static_cast<int>(std::lround(center_mm[2] / vol.sz))};
            break;
        case Axis::Z:
            axis_spacing = vol.sz;
            axis_center = center_mm[2];
            fixed = {static_cast<int>(std::lround(center_mm[0] / vol.sx)),
                     static_cast<int>(std::lround(center_mm[1] / vol.sy))};
            break;
        default:
            throw std::invalid_argument("resolution_fwhm: bad axis");
    }
    if (diameter_mm / axis_spacing < 4.0)
        throw std::invalid_argument(
            "resolution_fwhm: sphere must span >= 4 voxels along the axis");

    // average the 3x3 bundle of parallel profiles around the center line;
    // differentiation amplifies voxel noise and a single noisy line makes
    // the edge peak unrecoverable at clinical count levels
    std::array<int, 2> limits{};
    switch (axis) {
        case Axis::X: limits = {vol.ny, vol.nz}; break;
        case Axis::Y: limits = {vol.nx, vol.nz}; break;
        case Axis::Z: limits = {vol.nx, vol.ny}; break;
    }
    Profile prof = line_profile(vol, axis, fixed);
    std::fill(prof.values.begin(), prof.values.end(), 0.0);
    int bundle = 0;
    for (int da = -1; da <= 1; ++da)
        for (int db = -1; db <= 1; ++db) {
            const std::array<int, 2> f = {fixed[0] + da, fixed[1] + db};
            if (f[0] < 0 || f[0] >= limits[0] || f[1] < 0 || f[1] >= limits[1])
                continue;
            const Profile p = line_profile(vol, axis, f);
            for (std::size_t t = 0; t < p.values.size(); ++t)
                prof.values[t] += p.values[t];
            ++bundle;
        }
    for (double& v : prof.values) v /= bundle;
    const std::size_t n = prof.values.size();
    if (n < 5) throw std::invalid_argument("resolution_fwhm: profile too short");

    // |gradient| of the profile, central differences
    std::vector<double> grad(n);
    const double h = axis_spacing;
    for (std::size_t t = 0; t < n; ++t) {
        if (t == 0)
            grad[t] = std::abs(prof.values[1] - prof.values[0]) / h;
        else if (t == n - 1)
            grad[t] = std::abs(prof.values[n - 1] - prof.values[n - 2]) / h;
        else
            grad[t] = std::abs(prof.values[t + 1] - prof.values[t - 1]) / (2.0 * h);
    }

    // rising-edge segment: one diameter before the center up to the center
    std::vector<double> xs, ys;
    for (std::size_t t = 0; t < n; ++t) {
        if (prof.positions[t] >= axis_center - diameter_mm &&
            prof.positions[t] <= axis_center) {
            xs.push_back(prof.positions[t]);
            ys.push_back(grad[t]);
        }
    }
    if (xs.size() < 5)
        throw std::runtime_error("resolution_fwhm: edge segment too short");
    const double floor = *std::min_element(ys.begin(), ys.end());
    for (double& y : ys) y -= floor;

    // isolate the rising-edge peak: keep the contiguous run around the
    // segment maximum that stays above 15% of it (plus one pad sample per
    // side) so the residual noise floor cannot masquerade as wide tails
    std::size_t pk = 0;
    for (std::size_t t = 1; t < ys.size(); ++t)
        if (ys[t] > ys[pk]) pk = t;
    if (pk == 0 || pk + 1 == ys.size())
        throw std::runtime_error("resolution_fwhm: no interior gradient peak");
    const double thresh = 0.15 * ys[pk];
    std::size_t lo = pk, hi = pk;
    while (lo > 0 && ys[lo - 1] > thresh) --lo;
    while (hi + 1 < ys.size() && ys[hi + 1] > thresh) ++hi;
    if (lo > 0) --lo;
    if (hi + 1 < ys.size()) ++hi;
    while (hi - lo + 1 < 5 && (lo > 0 || hi + 1 < ys.size())) {
        if (lo > 0) --lo;
        if (hi + 1 < ys.size()) ++hi;
    }
    const std::vector<double> px(xs.begin() + lo, xs.begin() + hi + 1);
    const std::vector<double> py(ys.begin() + lo, ys.begin() + hi + 1);

    const GaussianFitResult fit = fit_gaussian_1d(px, py);
    // central differences smear the edge response by a 2h boxcar (variance
    // h^2/3); remove it from the fitted variance
    const double var = fit.sigma * fit.sigma - h * h / 3.0;
    if (var <= 0.0)
        throw std::runtime_error("resolution_fwhm: edge narrower than the sampling");
    return kFwhmToSigma * std::sqrt(var);
}

double percent_bias(double ac_max_mean, double tac) {
    if (tac <= 0.0) throw std::invalid_argument("percent_bias: tac must be > 0");
    return 100.0 * (ac_max_mean - tac) / tac;
}

double percent_difference(double high, double low) {
    if (!(high >= low) || low <= 0.0)
        throw std::invalid_argument("percent_difference: need high >= low > 0");
    return 200.0 * (high - low) / (high + low);
}

double cov(const std::vector<double>& values) {
    if (values.size() < 2)
        throw std::invalid_argument("cov: need >= 2 values");
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    if (mean == 0.0) throw std::invalid_argument("cov: mean is zero");
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1)) / mean;
}

}  // namespace gvof
