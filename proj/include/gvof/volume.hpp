#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace gvof {

// 3D scalar activity grid (kBq/ml) with physical voxel spacing in mm.
// Storage is x-fastest, then y, then z. Voxel (i,j,k) center sits at
// (i*sx, j*sy, k*sz) in physical coordinates.
struct Volume {
    int nx = 0, ny = 0, nz = 0;
    double sx = 1.0, sy = 1.0, sz = 1.0;
    std::vector<double> data;

    Volume() = default;
    Volume(int nx_, int ny_, int nz_, double sx_, double sy_, double sz_,
           double fill = 0.0);

    std::size_t size() const { return data.size(); }
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(k) * ny * nx +
               static_cast<std::size_t>(j) * nx + i;
    }
    double& at(int i, int j, int k) { return data[index(i, j, k)]; }
    double at(int i, int j, int k) const { return data[index(i, j, k)]; }

    bool same_grid(const Volume& o) const {
        return nx == o.nx && ny == o.ny && nz == o.nz;
    }

    // Throws if any value is non-finite.
    void check_finite(const std::string& context) const;
};

// One z-slice pulled out of a volume, with in-plane spacing.
struct Slice {
    int nx = 0, ny = 0;
    double sx = 1.0, sy = 1.0;
    std::vector<double> v;

    Slice() = default;
    Slice(int nx_, int ny_, double sx_, double sy_, double fill = 0.0)
        : nx(nx_), ny(ny_), sx(sx_), sy(sy_),
          v(static_cast<std::size_t>(nx_) * ny_, fill) {}

    double& at(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
    double at(int i, int j) const {
        return v[static_cast<std::size_t>(j) * nx + i];
    }
};

Slice extract_slice(const Volume& vol, int z);
void insert_slice(Volume& vol, int z, const Slice& s);

// Boolean ROI mask on the same grid as its volume.
struct Mask {
    int nx = 0, ny = 0, nz = 0;
    std::vector<std::uint8_t> data;

    Mask() = default;
    Mask(int nx_, int ny_, int nz_, bool fill = false)
        : nx(nx_), ny(ny_), nz(nz_),
          data(static_cast<std::size_t>(nx_) * ny_ * nz_, fill ? 1 : 0) {}

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(k) * ny * nx +
               static_cast<std::size_t>(j) * nx + i;
    }
    bool at(int i, int j, int k) const { return data[index(i, j, k)] != 0; }
    void set(int i, int j, int k, bool v) { data[index(i, j, k)] = v ? 1 : 0; }

    std::size_t count() const;
    bool same_grid(const Volume& v) const {
        return nx == v.nx && ny == v.ny && nz == v.nz;
    }
};

// Samples along one grid axis; positions strictly increasing, uniform.
struct Profile {
    std::vector<double> positions;  // mm
    std::vector<double> values;
};

enum class Axis { X, Y, Z };

struct RoiStats {
    double mean = 0.0;
    double sd = 0.0;  // sample SD, divisor n-1
    std::size_t count = 0;
};

// True where the voxel center lies within diameter/2 of center (mm).
// Throws if the center is outside the grid extent or the mask comes out
// empty.
Mask sphere_mask(int nx, int ny, int nz, double sx, double sy, double sz,
                 const std::array<double, 3>& center_mm, double diameter_mm);

// Per-slice morphological erosion with a full 3x3 element; out-of-bounds
// neighbors count as false. May return an empty mask.
Mask erode_mask_2d(const Mask& m);

// Per-slice dilation with a full 3x3 element (used to widen max-search
// regions so rim maxima are not missed).
Mask dilate_mask_2d(const Mask& m);

// Samples every voxel along `axis`; `fixed` holds the two in-range voxel
// indices of the other axes in grid order (e.g. for Axis::X, {j, k}).
Profile line_profile(const Volume& vol, Axis axis,
                     const std::array<int, 2>& fixed);

// Mean / sample SD / count over masked voxels. Empty mask or grid
// mismatch throws.
RoiStats roi_stats(const Volume& vol, const Mask& mask);

}  // namespace gvof
