#include "gvof/volume.hpp"

#include <cmath>
#include <stdexcept>

namespace gvof {

Volume::Volume(int nx_, int ny_, int nz_, double sx_, double sy_, double sz_,
               double fill)
    : nx(nx_), ny(ny_), nz(nz_), sx(sx_), sy(sy_), sz(sz_) {
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("Volume: dims must be >= 1");
    if (sx <= 0.0 || sy <= 0.0 || sz <= 0.0)
        throw std::invalid_argument("Volume: spacing must be > 0");
    data.assign(static_cast<std::size_t>(nx) * ny * nz, fill);
}

void Volume::check_finite(const std::string& context) const {
    for (double v : data)
        if (!std::isfinite(v))
            throw std::runtime_error(context + ": volume contains non-finite values");
}

Slice extract_slice(const Volume& vol, int z) {
    if (z < 0 || z >= vol.nz) throw std::out_of_range("extract_slice: z out of range");
    Slice s(vol.nx, vol.ny, vol.sx, vol.sy);
    const std::size_t base = static_cast<std::size_t>(z) * vol.ny * vol.nx;
    std::copy(vol.data.begin() + base, vol.data.begin() + base + s.v.size(),
              s.v.begin());
    return s;
}

void insert_slice(Volume& vol, int z, const Slice& s) {
    if (z < 0 || z >= vol.nz) throw std::out_of_range("insert_slice: z out of range");
    if (s.nx != vol.nx || s.ny != vol.ny)
        throw std::invalid_argument("insert_slice: slice dims mismatch");
    const std::size_t base = static_cast<std::size_t>(z) * vol.ny * vol.nx;
    std::copy(s.v.begin(), s.v.end(), vol.data.begin() + base);
}

std::size_t Mask::count() const {
    std::size_t n = 0;
    for (auto b : data) n += b != 0;
    return n;
}

Mask sphere_mask(int nx, int ny, int nz, double sx, double sy, double sz,
                 const std::array<double, 3>& c, double diameter_mm) {
    if (diameter_mm <= 0.0)
        throw std::invalid_argument("sphere_mask: diameter must be > 0");
    const double ex = (nx - 1) * sx, ey = (ny - 1) * sy, ez = (nz - 1) * sz;
    if (c[0] < 0.0 || c[0] > ex || c[1] < 0.0 || c[1] > ey || c[2] < 0.0 ||
        c[2] > ez)
        throw std::invalid_argument("sphere_mask: center outside grid extent");
    Mask m(nx, ny, nz);
    const double r2 = 0.25 * diameter_mm * diameter_mm;
    for (int k = 0; k < nz; ++k) {
        const double dz = k * sz - c[2];
        for (int j = 0; j < ny; ++j) {
            const double dy = j * sy - c[1];
            for (int i = 0; i < nx; ++i) {
                const double dx = i * sx - c[0];
                if (dx * dx + dy * dy + dz * dz <= r2) m.set(i, j, k, true);
            }
        }
    }
    if (m.count() == 0)
        throw std::runtime_error("sphere_mask: no voxel center falls inside the sphere");
    return m;
}

Mask erode_mask_2d(const Mask& m) {
    Mask out(m.nx, m.ny, m.nz);
    for (int k = 0; k < m.nz; ++k)
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i) {
                bool keep = true;
                for (int dj = -1; dj <= 1 && keep; ++dj)
                    for (int di = -1; di <= 1 && keep; ++di) {
                        const int ii = i + di, jj = j + dj;
                        if (ii < 0 || ii >= m.nx || jj < 0 || jj >= m.ny ||
                            !m.at(ii, jj, k))
                            keep = false;
                    }
                out.set(i, j, k, keep);
            }
    return out;
}

Mask dilate_mask_2d(const Mask& m) {
    Mask out(m.nx, m.ny, m.nz);
    for (int k = 0; k < m.nz; ++k)
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i) {
                bool hit = false;
                for (int dj = -1; dj <= 1 && !hit; ++dj)
                    for (int di = -1; di <= 1 && !hit; ++di) {
                        const int ii = i + di, jj = j + dj;
                        if (ii >= 0 && ii < m.nx && jj >= 0 && jj < m.ny &&
                            m.at(ii, jj, k))
                            hit = true;
                    }
                out.set(i, j, k, hit);
            }
    return out;
}

Profile line_profile(const Volume& vol, Axis axis,
                     const std::array<int, 2>& fixed) {
    Profile p;
    int n = 0;
    double spacing = 0.0;
    switch (axis) {
        case Axis::X:
            if (fixed[0] < 0 || fixed[0] >= vol.ny || fixed[1] < 0 ||
                fixed[1] >= vol.nz)
                throw std::out_of_range("line_profile: fixed indices out of range");
            n = vol.nx;
            spacing = vol.sx;
            for (int i = 0; i < n; ++i)
                p.values.push_back(vol.at(i, fixed[0], fixed[1]));
            break;
        case Axis::Y:
            if (fixed[0] < 0 || fixed[0] >= vol.nx || fixed[1] < 0 ||
                fixed[1] >= vol.nz)
                throw std::out_of_range("line_profile: fixed indices out of range");
            n = vol.ny;
            spacing = vol.sy;
            for (int j = 0; j < n; ++j)
                p.values.push_back(vol.at(fixed[0], j, fixed[1]));
            break;
        case Axis::Z:
            if (fixed[0] < 0 || fixed[0] >= vol.nx || fixed[1] < 0 ||
                fixed[1] >= vol.ny)
                throw std::out_of_range("line_profile: fixed indices out of range");
            n = vol.nz;
            spacing = vol.sz;
            for (int k = 0; k < n; ++k)
                p.values.push_back(vol.at(fixed[0], fixed[1], k));
            break;
    }
    for (int t = 0; t < n; ++t) p.positions.push_back(t * spacing);
    return p;
}

RoiStats roi_stats(const Volume& vol, const Mask& mask) {
    if (!mask.same_grid(vol))
        throw std::invalid_argument("roi_stats: mask/volume dims mismatch");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < vol.data.size(); ++t)
        if (mask.data[t]) {
            sum += vol.data[t];
            ++n;
        }
    if (n == 0) throw std::invalid_argument("roi_stats: empty mask");
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t t = 0; t < vol.data.size(); ++t)
        if (mask.data[t]) {
            const double d = vol.data[t] - mean;
            ss += d * d;
        }
    RoiStats r;
    r.mean = mean;
    r.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    r.count = n;
    return r;
}

}  // namespace gvof
