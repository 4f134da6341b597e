#include "gvof/phantom.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "gvof/gradient.hpp"

namespace gvof {

void PhantomSpec::validate() const {
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("PhantomSpec: dims must be >= 1");
    if (sx <= 0.0 || sy <= 0.0 || sz <= 0.0)
        throw std::invalid_argument("PhantomSpec: spacing must be > 0");
    if (background_activity < 0.0)
        throw std::invalid_argument("PhantomSpec: background activity must be >= 0");
    if (body_semi_axis_x_mm <= 0.0 || body_semi_axis_y_mm <= 0.0 ||
        body_height_mm <= 0.0)
        throw std::invalid_argument("PhantomSpec: body dimensions must be > 0");
    const auto gc = grid_center_mm();
    for (const auto& s : spheres) {
        if (s.diameter_mm <= 0.0)
            throw std::invalid_argument("PhantomSpec: sphere diameter must be > 0");
        if (s.activity < 0.0)
            throw std::invalid_argument("PhantomSpec: sphere activity must be >= 0");
        const double r = 0.5 * s.diameter_mm;
        const double ex = (s.center_mm[0] - gc[0]) / (body_semi_axis_x_mm - r);
        const double ey = (s.center_mm[1] - gc[1]) / (body_semi_axis_y_mm - r);
        if (body_semi_axis_x_mm <= r || body_semi_axis_y_mm <= r ||
            ex * ex + ey * ey > 1.0)
            throw std::invalid_argument("PhantomSpec: sphere outside body");
    }
    for (std::size_t a = 0; a < spheres.size(); ++a)
        for (std::size_t b = a + 1; b < spheres.size(); ++b) {
            double d2 = 0.0;
            for (int t = 0; t < 3; ++t) {
                const double d = spheres[a].center_mm[t] - spheres[b].center_mm[t];
                d2 += d * d;
            }
            const double rsum =
                0.5 * (spheres[a].diameter_mm + spheres[b].diameter_mm);
            if (d2 < rsum * rsum)
                throw std::invalid_argument("PhantomSpec: overlapping spheres");
        }
}

void AcquisitionModel::validate() const {
    if (duration_s <= 0.0)
        throw std::invalid_argument("AcquisitionModel: duration must be > 0");
    if (sensitivity <= 0.0)
        throw std::invalid_argument("AcquisitionModel: sensitivity must be > 0");
    if (psf_fwhm_mm < 0.0)
        throw std::invalid_argument("AcquisitionModel: psf fwhm must be >= 0");
}

ContrastPreset contrast_preset(const std::string& label) {
    if (label == "2:1") return {"2:1", 1668.0, 838.0};
    if (label == "4:1") return {"4:1", 2775.0, 697.0};
    throw std::invalid_argument("unknown contrast preset: " + label);
}

PhantomSpec default_phantom_spec(const ContrastPreset& preset, int nx, int ny,
                                 int nz, double sx, double sy, double sz) {
    PhantomSpec spec;
    spec.nx = nx;
    spec.ny = ny;
    spec.nz = nz;
    spec.sx = sx;
    spec.sy = sy;
    spec.sz = sz;
    spec.background_activity = preset.background_activity;
    const auto gc = spec.grid_center_mm();
    const double ring_radius = 57.2;
    const double diameters[6] = {37.0, 28.0, 22.0, 17.0, 13.0, 10.0};
    for (int t = 0; t < 6; ++t) {
        const double angle = t * M_PI / 3.0;  // 37 mm sphere on +x
        SphereSpec s;
        s.center_mm = {gc[0] + ring_radius * std::cos(angle),
                       gc[1] + ring_radius * std::sin(angle), gc[2]};
        s.diameter_mm = diameters[t];
        s.activity = preset.sphere_activity;
        spec.spheres.push_back(s);
    }
    spec.validate();
    return spec;
}

namespace {

double region_activity(const PhantomSpec& spec, double x, double y, double z,
                       const std::array<double, 3>& gc) {
    for (const auto& s : spec.spheres) {
        const double dx = x - s.center_mm[0], dy = y - s.center_mm[1],
                     dz = z - s.center_mm[2];
        if (dx * dx + dy * dy + dz * dz <=
            0.25 * s.diameter_mm * s.diameter_mm)
            return s.activity;
    }
    const double ex = (x - gc[0]) / spec.body_semi_axis_x_mm;
    const double ey = (y - gc[1]) / spec.body_semi_axis_y_mm;
    if (ex * ex + ey * ey <= 1.0 && std::abs(z - gc[2]) <= 0.5 * spec.body_height_mm)
        return spec.background_activity;
    return 0.0;
}

}  // namespace

Volume rasterize_phantom(const PhantomSpec& spec, int supersample) {
    spec.validate();
    if (supersample < 1)
        throw std::invalid_argument("rasterize_phantom: supersample must be >= 1");
    Volume vol(spec.nx, spec.ny, spec.nz, spec.sx, spec.sy, spec.sz);
    const auto gc = spec.grid_center_mm();
    const int n = supersample;
    const double inv = 1.0 / (n * n * n);
    for (int k = 0; k < spec.nz; ++k)
        for (int j = 0; j < spec.ny; ++j)
            for (int i = 0; i < spec.nx; ++i) {
                double acc = 0.0;
                for (int c = 0; c < n; ++c) {
                    const double z = (k + (c + 0.5) / n - 0.5) * spec.sz;
                    for (int b = 0; b < n; ++b) {
                        const double y = (j + (b + 0.5) / n - 0.5) * spec.sy;
                        for (int a = 0; a < n; ++a) {
                            const double x = (i + (a + 0.5) / n - 0.5) * spec.sx;
                            acc += region_activity(spec, x, y, z, gc);
                        }
                    }
                }
                vol.at(i, j, k) = acc * inv;
            }
    return vol;
}

namespace {

void blur_axis(std::vector<double>& data, int nx, int ny, int nz,
               const std::vector<double>& kernel, int axis) {
    const int radius = static_cast<int>(kernel.size()) / 2;
    const int n = axis == 0 ? nx : axis == 1 ? ny : nz;
    if (n == 1) return;
    std::vector<double> line(n);
    auto idx = [&](int i, int j, int k) {
        return (static_cast<std::size_t>(k) * ny + j) * nx + i;
    };
    const int u_max = axis == 0 ? ny : nx;
    const int w_max = axis == 2 ? ny : nz;
    for (int w = 0; w < w_max; ++w)
        for (int u = 0; u < u_max; ++u) {
            for (int t = 0; t < n; ++t) {
                const int i = axis == 0 ? t : u;
                const int j = axis == 0 ? u : (axis == 1 ? t : w);
                const int k = axis == 2 ? t : w;
                line[t] = data[idx(i, j, k)];
            }
            for (int t = 0; t < n; ++t) {
                double acc = 0.0;
                for (int r = -radius; r <= radius; ++r) {
                    const int src = std::clamp(t + r, 0, n - 1);
                    acc += kernel[r + radius] * line[src];
                }
                const int i = axis == 0 ? t : u;
                const int j = axis == 0 ? u : (axis == 1 ? t : w);
                const int k = axis == 2 ? t : w;
                data[idx(i, j, k)] = acc;
            }
        }
}

}  // namespace

Volume gaussian_blur_3d(const Volume& vol, double fwhm_mm) {
    if (fwhm_mm <= 0.0) return vol;
    Volume out = vol;
    blur_axis(out.data, out.nx, out.ny, out.nz,
              gaussian_kernel_1d(fwhm_mm, vol.sx), 0);
    blur_axis(out.data, out.nx, out.ny, out.nz,
              gaussian_kernel_1d(fwhm_mm, vol.sy), 1);
    blur_axis(out.data, out.nx, out.ny, out.nz,
              gaussian_kernel_1d(fwhm_mm, vol.sz), 2);
    return out;
}

Volume simulate_acquisition(const Volume& truth, const AcquisitionModel& model) {
    model.validate();
    for (double v : truth.data)
        if (!(v >= 0.0))
            throw std::invalid_argument("simulate_acquisition: truth must be >= 0");
    Volume blurred = gaussian_blur_3d(truth, model.psf_fwhm_mm);
    const double scale = model.sensitivity * model.duration_s;
    std::mt19937_64 rng(model.seed);
    Volume out = blurred;
    for (std::size_t t = 0; t < out.data.size(); ++t) {
        const double lambda = blurred.data[t] * scale;
        if (lambda > 9.22e18)
            throw std::runtime_error("simulate_acquisition: expected counts overflow");
        if (lambda <= 0.0) {
            out.data[t] = 0.0;
            continue;
        }
        std::poisson_distribution<long long> pois(lambda);
        out.data[t] = static_cast<double>(pois(rng)) / scale;
    }
    return out;
}

std::vector<Volume> generate_realizations(const Volume& truth,
                                          const AcquisitionModel& model, int n,
                                          std::uint64_t base_seed) {
    if (n < 1)
        throw std::invalid_argument("generate_realizations: n must be >= 1");
    std::vector<Volume> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        AcquisitionModel m = model;
        m.seed = base_seed + static_cast<std::uint64_t>(k);
        out.push_back(simulate_acquisition(truth, m));
    }
    return out;
}

}  // namespace gvof
