#include <cmath>
#include <random>

#include "doctest.h"
#include "gvof/volume.hpp"

using namespace gvof;

TEST_CASE("sphere_mask: 37 mm sphere volume matches 26.52 ml") {
    // paper-scale grid
    const int nx = 64, ny = 64, nz = 40;
    const double sx = 2.67, sy = 2.67, sz = 2.0;
    const std::array<double, 3> c = {(nx - 1) * 0.5 * sx, (ny - 1) * 0.5 * sy,
                                     (nz - 1) * 0.5 * sz};
    const Mask m = sphere_mask(nx, ny, nz, sx, sy, sz, c, 37.0);
    const double ml = m.count() * sx * sy * sz / 1000.0;
    CHECK(ml == doctest::Approx(26.52).epsilon(0.05));
}

TEST_CASE("sphere_mask: degenerate sub-voxel sphere keeps one voxel") {
    const std::array<double, 3> c = {5 * 2.0, 5 * 2.0, 5 * 2.0};
    const Mask m = sphere_mask(11, 11, 11, 2.0, 2.0, 2.0, c, 0.5);
    CHECK(m.count() == 1);
    CHECK(m.at(5, 5, 5));
}

TEST_CASE("sphere_mask: 10 mm sphere against brute-force oracle") {
    const int nx = 32, ny = 32, nz = 16;
    const double sx = 2.67, sy = 2.67, sz = 2.0;
    const std::array<double, 3> c = {40.0, 41.0, 15.0};
    const Mask m = sphere_mask(nx, ny, nz, sx, sy, sz, c, 10.0);
    std::size_t oracle = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double dx = i * sx - c[0], dy = j * sy - c[1],
                             dz = k * sz - c[2];
                if (std::sqrt(dx * dx + dy * dy + dz * dz) <= 5.0) ++oracle;
            }
    CHECK(m.count() == oracle);
    const double ml = m.count() * sx * sy * sz / 1000.0;
    CHECK(ml == doctest::Approx(0.52).epsilon(0.15));
}

TEST_CASE("sphere_mask: errors") {
    CHECK_THROWS(sphere_mask(8, 8, 8, 1, 1, 1, {3, 3, 3}, -1.0));
    CHECK_THROWS(sphere_mask(8, 8, 8, 1, 1, 1, {100, 3, 3}, 5.0));
}

TEST_CASE("sphere_mask: symmetric under center reflection") {
    const int n = 21;
    const std::array<double, 3> mid = {10.0, 10.0, 10.0};
    const std::array<double, 3> a = {7.0, 8.0, 9.0};
    const std::array<double, 3> b = {2 * mid[0] - a[0], 2 * mid[1] - a[1],
                                     2 * mid[2] - a[2]};
    const Mask ma = sphere_mask(n, n, n, 1, 1, 1, a, 6.0);
    const Mask mb = sphere_mask(n, n, n, 1, 1, 1, b, 6.0);
    CHECK(ma.count() == mb.count());
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                CHECK(ma.at(i, j, k) ==
                      mb.at(n - 1 - i, n - 1 - j, n - 1 - k));
}

TEST_CASE("erode_mask_2d: analytic cases") {
    Mask all(5, 5, 1, true);
    const Mask e = erode_mask_2d(all);
    CHECK(e.count() == 9);
    for (int j = 1; j <= 3; ++j)
        for (int i = 1; i <= 3; ++i) CHECK(e.at(i, j, 0));

    Mask single(5, 5, 1);
    single.set(2, 2, 0, true);
    CHECK(erode_mask_2d(single).count() == 0);
}

TEST_CASE("erode_mask_2d: sphere mask matches neighborhood oracle, subset") {
    const int nx = 48, ny = 48, nz = 24;
    const std::array<double, 3> c = {60.0, 60.0, 24.0};
    const Mask m = sphere_mask(nx, ny, nz, 2.67, 2.67, 2.0, c, 37.0);
    const Mask e = erode_mask_2d(m);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                bool oracle = true;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        const int ii = i + di, jj = j + dj;
                        if (ii < 0 || ii >= nx || jj < 0 || jj >= ny ||
                            !m.at(ii, jj, k))
                            oracle = false;
                    }
                CHECK(e.at(i, j, k) == oracle);
                if (e.at(i, j, k)) CHECK(m.at(i, j, k));  // subset property
            }
}

TEST_CASE("erode subset property on random masks") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Mask m(12, 12, 3);
        for (auto& b : m.data) b = rng() % 2;
        const Mask e = erode_mask_2d(m);
        for (std::size_t t = 0; t < m.data.size(); ++t)
            if (e.data[t]) CHECK(m.data[t]);
    }
}

TEST_CASE("line_profile: constants, ramps, bounds") {
    Volume v(6, 4, 3, 1.5, 1.0, 2.0, 5.0);
    const Profile constant = line_profile(v, Axis::X, {1, 1});
    REQUIRE(constant.values.size() == 6);
    for (double x : constant.values) CHECK(x == 5.0);
    CHECK(constant.positions[3] == doctest::Approx(4.5));

    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 6; ++i) v.at(i, j, k) = i;
    const Profile ramp = line_profile(v, Axis::X, {2, 0});
    for (int i = 0; i < 6; ++i) CHECK(ramp.values[i] == doctest::Approx(i));

    CHECK_THROWS(line_profile(v, Axis::X, {4, 0}));
    CHECK_THROWS(line_profile(v, Axis::Z, {0, 9}));
}

TEST_CASE("line_profile through a rasterized sphere shows the plateau") {
    const int n = 41;
    Volume v(n, n, n, 1.0, 1.0, 1.0, 1.0);
    const std::array<double, 3> c = {20.0, 20.0, 20.0};
    const double r = 18.5;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double d = std::sqrt((i - c[0]) * (i - c[0]) +
                                           (j - c[1]) * (j - c[1]) +
                                           (k - c[2]) * (k - c[2]));
                if (d <= r) v.at(i, j, k) = 10.0;
            }
    const Profile p = line_profile(v, Axis::X, {20, 20});
    for (int i = 0; i < n; ++i) {
        const bool inside = std::abs(p.positions[i] - 20.0) <= r;
        CHECK(p.values[i] == (inside ? 10.0 : 1.0));
    }
}

TEST_CASE("roi_stats: analytic values and errors") {
    Volume v(3, 1, 1, 1, 1, 1);
    Mask m(3, 1, 1, true);
    v.data = {100, 100, 100};
    RoiStats s = roi_stats(v, m);
    CHECK(s.mean == 100.0);
    CHECK(s.sd == 0.0);
    CHECK(s.count == 3);

    Volume v2(2, 1, 1, 1, 1, 1);
    Mask m2(2, 1, 1, true);
    v2.data = {90, 110};
    s = roi_stats(v2, m2);
    CHECK(s.mean == doctest::Approx(100.0));
    CHECK(s.sd == doctest::Approx(std::sqrt(200.0)));

    Mask empty(2, 1, 1);
    CHECK_THROWS(roi_stats(v2, empty));
    CHECK_THROWS(roi_stats(v2, m));  // dims mismatch
}

TEST_CASE("roi_stats: two-pass oracle and translation equivariance") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    Volume v(20, 20, 10, 1, 1, 1);
    for (auto& x : v.data) x = dist(rng);
    Mask m(20, 20, 10);
    for (auto& b : m.data) b = rng() % 3 == 0;
    REQUIRE(m.count() > 10);
    const RoiStats s = roi_stats(v, m);

    // independent two-pass summation
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < v.data.size(); ++t)
        if (m.data[t]) {
            sum += v.data[t];
            ++n;
        }
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t t = 0; t < v.data.size(); ++t)
        if (m.data[t]) ss += (v.data[t] - mean) * (v.data[t] - mean);
    const double sd = std::sqrt(ss / (n - 1));
    CHECK(s.mean == doctest::Approx(mean).epsilon(1e-10));
    CHECK(s.sd == doctest::Approx(sd).epsilon(1e-10));

    Volume shifted = v;
    for (auto& x : shifted.data) x += 17.25;
    const RoiStats s2 = roi_stats(shifted, m);
    CHECK(s2.mean == doctest::Approx(s.mean + 17.25).epsilon(1e-10));
    CHECK(s2.sd == doctest::Approx(s.sd).epsilon(1e-10));
}
