#include "gvof/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gvof {

namespace {
constexpr double kFwhmToSigma = 2.354820045030949;  // 2*sqrt(2*ln 2)
}

std::vector<double> gaussian_kernel_1d(double fwhm_mm, double spacing_mm) {
    if (fwhm_mm <= 0.0 || spacing_mm <= 0.0)
        throw std::invalid_argument("gaussian_kernel_1d: fwhm and spacing must be > 0");
    const double sigma_vox = fwhm_mm / kFwhmToSigma / spacing_mm;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_vox)));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double x = static_cast<double>(k);
        w[k + radius] = std::exp(-x * x / (2.0 * sigma_vox * sigma_vox));
        sum += w[k + radius];
    }
    for (double& t : w) t /= sum;
    return w;
}

namespace {

void convolve_1d_replicate(const std::vector<double>& in, std::vector<double>& out,
                           int n, int stride, int count,
                           const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size()) / 2;
    for (int line = 0; line < count; ++line) {
        const std::size_t base =
            static_cast<std::size_t>(line) * (stride == 1 ? n : 1);
        auto idx = [&](int t) {
            return stride == 1 ? base + t
                               : static_cast<std::size_t>(t) * stride + line;
        };
        for (int t = 0; t < n; ++t) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int src = std::clamp(t + k, 0, n - 1);
                acc += kernel[k + radius] * in[idx(src)];
            }
            out[idx(t)] = acc;
        }
    }
}

}  // namespace

Slice gaussian_smooth_slice(const Slice& s, double fwhm_mm) {
    const auto kx = gaussian_kernel_1d(fwhm_mm, s.sx);
    const auto ky = gaussian_kernel_1d(fwhm_mm, s.sy);
    Slice tmp = s, out = s;
    // x pass: rows of length nx, contiguous
    convolve_1d_replicate(s.v, tmp.v, s.nx, 1, s.ny, kx);
    // y pass: columns, stride nx
    convolve_1d_replicate(tmp.v, out.v, s.ny, s.nx, s.nx, ky);
    return out;
}

GradientField gradient_2d(const Slice& s, double sx, double sy) {
    if (s.nx < 3 || s.ny < 3)
        throw std::invalid_argument("gradient_2d: slice dims must be >= 3x3");
    GradientField g;
    g.nx = s.nx;
    g.ny = s.ny;
    const std::size_t n = s.v.size();
    g.gx.resize(n);
    g.gy.resize(n);
    g.mag.resize(n);
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) {
            const std::size_t t = static_cast<std::size_t>(j) * s.nx + i;
            double dx, dy;
            if (i == 0)
                dx = (s.at(1, j) - s.at(0, j)) / sx;
            else if (i == s.nx - 1)
                dx = (s.at(s.nx - 1, j) - s.at(s.nx - 2, j)) / sx;
            else
                dx = (s.at(i + 1, j) - s.at(i - 1, j)) / (2.0 * sx);
            if (j == 0)
                dy = (s.at(i, 1) - s.at(i, 0)) / sy;
            else if (j == s.ny - 1)
                dy = (s.at(i, s.ny - 1) - s.at(i, s.ny - 2)) / sy;
            else
                dy = (s.at(i, j + 1) - s.at(i, j - 1)) / (2.0 * sy);
            g.gx[t] = dx;
            g.gy[t] = dy;
            g.mag[t] = std::sqrt(dx * dx + dy * dy);
        }
    return g;
}

std::vector<double> orientation_sum(const GradientField& gf, int p, int q) {
    if (p < 1 || q < 1 || p % 2 == 0 || q % 2 == 0)
        throw std::invalid_argument("orientation_sum: window extents must be odd >= 1");
    const int hp = p / 2, hq = q / 2;
    double max_mag = 0.0;
    for (double m : gf.mag) max_mag = std::max(max_mag, m);
    const double eps = max_mag > 0.0 ? 1e-12 * max_mag : 1e-300;

    std::vector<double> raw(gf.mag.size(), 0.0);
    for (int y = 0; y < gf.ny; ++y)
        for (int x = 0; x < gf.nx; ++x) {
            const std::size_t tc = static_cast<std::size_t>(y) * gf.nx + x;
            const double mc = gf.mag[tc];
            if (mc < eps) continue;  // directionless center -> 0
            const double cx = gf.gx[tc], cy = gf.gy[tc];
            double sum = 0.0;
            const int j0 = std::max(0, y - hq), j1 = std::min(gf.ny - 1, y + hq);
            const int i0 = std::max(0, x - hp), i1 = std::min(gf.nx - 1, x + hp);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i) {
                    const std::size_t t = static_cast<std::size_t>(j) * gf.nx + i;
                    const double m = gf.mag[t];
                    if (m < eps) continue;
                    sum += (cx * gf.gx[t] + cy * gf.gy[t]) / (mc * m);
                }
            raw[tc] = sum;
        }
    return raw;
}

CoherenceField normalize_minmax(const std::vector<double>& raw, int nx, int ny,
                                int p, int q) {
    CoherenceField cf;
    cf.nx = nx;
    cf.ny = ny;
    cf.window_p = p;
    cf.window_q = q;
    double lo = raw.empty() ? 0.0 : raw[0], hi = lo;
    for (double v : raw) {
        if (!std::isfinite(v))
            throw std::invalid_argument("normalize_minmax: non-finite input");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    if (span < 1e-12 * std::max(std::abs(hi), 1.0)) {
        cf.alpha.assign(raw.size(), 1.0);
        return cf;
    }
    cf.alpha.resize(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t)
        cf.alpha[t] = (raw[t] - lo) / span;
    return cf;
}

}  // namespace gvof
