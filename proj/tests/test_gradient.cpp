#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gvof/gradient.hpp"

using namespace gvof;

TEST_CASE("gaussian_kernel_1d: 4 mm FWHM on the paper grid") {
    const auto w = gaussian_kernel_1d(4.0, 2.67);
    // sigma_vox = 4 / 2.35482 / 2.67 ~ 0.6362 -> radius 2, 5 taps
    REQUIRE(w.size() == 5);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // evaluate the formula independently
    const double sigma = 4.0 / (2.0 * std::sqrt(2.0 * std::log(2.0))) / 2.67;
    double norm = 0.0;
    double expect[5];
    for (int k = -2; k <= 2; ++k) {
        expect[k + 2] = std::exp(-k * k / (2.0 * sigma * sigma));
        norm += expect[k + 2];
    }
    for (int k = 0; k < 5; ++k)
        CHECK(w[k] == doctest::Approx(expect[k] / norm).epsilon(1e-12));
}

TEST_CASE("gaussian_kernel_1d: delta limit and symmetry") {
    const auto w = gaussian_kernel_1d(1e-4, 1.0);
    REQUIRE(w.size() >= 3);
    CHECK(w[w.size() / 2] == doctest::Approx(1.0).epsilon(1e-9));
    const auto w2 = gaussian_kernel_1d(7.3, 1.9);
    for (std::size_t k = 0; k < w2.size(); ++k)
        CHECK(w2[k] == w2[w2.size() - 1 - k]);
    CHECK_THROWS(gaussian_kernel_1d(0.0, 1.0));
    CHECK_THROWS(gaussian_kernel_1d(4.0, -1.0));
}

TEST_CASE("gaussian_smooth_slice: constant preserved, impulse response") {
    Slice s(16, 16, 1.0, 1.0, 3.5);
    const Slice out = gaussian_smooth_slice(s, 4.0);
    for (double v : out.v) CHECK(v == doctest::Approx(3.5).epsilon(1e-12));

    Slice imp(21, 21, 1.0, 1.0);
    imp.at(10, 10) = 1.0;
    const Slice resp = gaussian_smooth_slice(imp, 3.0);
    const auto k = gaussian_kernel_1d(3.0, 1.0);
    const int r = static_cast<int>(k.size()) / 2;
    for (int dj = -r; dj <= r; ++dj)
        for (int di = -r; di <= r; ++di)
            CHECK(resp.at(10 + di, 10 + dj) ==
                  doctest::Approx(k[di + r] * k[dj + r]).epsilon(1e-12));
}

TEST_CASE("gaussian_smooth_slice: pass order commutes, no new extrema") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    Slice s(24, 18, 2.67, 2.67);
    for (auto& v : s.v) v = dist(rng);
    const Slice a = gaussian_smooth_slice(s, 5.0);

    // y-then-x by transposing
    Slice t(s.ny, s.nx, s.sy, s.sx);
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i) t.at(j, i) = s.at(i, j);
    const Slice bt = gaussian_smooth_slice(t, 5.0);
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i)
            CHECK(a.at(i, j) == doctest::Approx(bt.at(j, i)).epsilon(1e-12));

    const auto [lo, hi] = std::minmax_element(s.v.begin(), s.v.end());
    for (double v : a.v) {
        CHECK(v >= *lo - 1e-12);
        CHECK(v <= *hi + 1e-12);
    }
}

TEST_CASE("gradient_2d: linear and bilinear fields are exact") {
    const int nx = 12, ny = 10;
    const double sx = 1.5, sy = 2.0;
    Slice ramp(nx, ny, sx, sy);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) ramp.at(i, j) = 3.0 * i * sx;
    const GradientField g = gradient_2d(ramp);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            CHECK(g.gx[j * nx + i] == doctest::Approx(3.0).epsilon(1e-12));
            CHECK(g.gy[j * nx + i] == doctest::Approx(0.0));
        }

    Slice flat(nx, ny, sx, sy, 2.0);
    const GradientField gf = gradient_2d(flat);
    for (double m : gf.mag) CHECK(m == 0.0);

    Slice bilinear(nx, ny, sx, sy);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) bilinear.at(i, j) = (i * sx) * (j * sy);
    const GradientField gb = gradient_2d(bilinear);
    for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i) {
            CHECK(gb.gx[j * nx + i] == doctest::Approx(j * sy).epsilon(1e-12));
            CHECK(gb.gy[j * nx + i] == doctest::Approx(i * sx).epsilon(1e-12));
        }

    Slice tiny(2, 2, 1, 1);
    CHECK_THROWS(gradient_2d(tiny));
}

TEST_CASE("orientation_sum: parallel vectors and degenerate center") {
    const int nx = 9, ny = 9;
    GradientField g;
    g.nx = nx;
    g.ny = ny;
    g.gx.assign(nx * ny, 2.0);
    g.gy.assign(nx * ny, 1.0);
    g.mag.assign(nx * ny, std::sqrt(5.0));
    auto raw = orientation_sum(g, 3, 3);
    CHECK(raw[4 * nx + 4] == doctest::Approx(9.0).epsilon(1e-12));

    g.gx[4 * nx + 4] = g.gy[4 * nx + 4] = 0.0;
    g.mag[4 * nx + 4] = 0.0;
    raw = orientation_sum(g, 3, 3);
    CHECK(raw[4 * nx + 4] == 0.0);

    CHECK_THROWS(orientation_sum(g, 2, 3));
    CHECK_THROWS(orientation_sum(g, 3, 0));
}

TEST_CASE("orientation_sum: checkerboard field against double-loop oracle") {
    const int nx = 11, ny = 11;
    GradientField g;
    g.nx = nx;
    g.ny = ny;
    g.gx.resize(nx * ny);
    g.gy.resize(nx * ny);
    g.mag.resize(nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            g.gx[j * nx + i] = sign * 0.6;
            g.gy[j * nx + i] = sign * 0.8;
            g.mag[j * nx + i] = 1.0;
        }
    const int p = 5, q = 3;
    const auto raw = orientation_sum(g, p, q);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            double oracle = 0.0;
            for (int j = std::max(0, y - q / 2); j <= std::min(ny - 1, y + q / 2); ++j)
                for (int i = std::max(0, x - p / 2); i <= std::min(nx - 1, x + p / 2); ++i) {
                    const double dot = g.gx[y * nx + x] * g.gx[j * nx + i] +
                                       g.gy[y * nx + x] * g.gy[j * nx + i];
                    oracle += dot / (g.mag[y * nx + x] * g.mag[j * nx + i]);
                }
            CHECK(raw[y * nx + x] == doctest::Approx(oracle).epsilon(1e-12));
            CHECK(std::abs(raw[y * nx + x]) <= p * q + 1e-12);
        }
}

TEST_CASE("orientation_sum: invariant under positive scaling") {
    std::mt19937 rng(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    const int nx = 14, ny = 14;
    GradientField g;
    g.nx = nx;
    g.ny = ny;
    g.gx.resize(nx * ny);
    g.gy.resize(nx * ny);
    g.mag.resize(nx * ny);
    for (int t = 0; t < nx * ny; ++t) {
        g.gx[t] = dist(rng);
        g.gy[t] = dist(rng);
        g.mag[t] = std::hypot(g.gx[t], g.gy[t]);
    }
    const auto raw = orientation_sum(g, 3, 3);
    GradientField scaled = g;
    for (int t = 0; t < nx * ny; ++t) {
        scaled.gx[t] *= 731.5;
        scaled.gy[t] *= 731.5;
        scaled.mag[t] *= 731.5;
    }
    const auto raw2 = orientation_sum(scaled, 3, 3);
    for (int t = 0; t < nx * ny; ++t)
        CHECK(std::abs(raw[t] - raw2[t]) < 1e-9);
}

TEST_CASE("normalize_minmax: analytic, degenerate and random postconditions") {
    CoherenceField cf = normalize_minmax({0.0, 5.0, 10.0}, 3, 1, 3, 3);
    CHECK(cf.alpha[0] == 0.0);
    CHECK(cf.alpha[1] == doctest::Approx(0.5));
    CHECK(cf.alpha[2] == 1.0);

    cf = normalize_minmax({4.0, 4.0, 4.0, 4.0}, 2, 2, 3, 3);
    for (double a : cf.alpha) CHECK(a == 1.0);

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> dist(-7.0, 3.0);
    std::vector<double> raw(64);
    for (auto& v : raw) v = dist(rng);
    cf = normalize_minmax(raw, 8, 8, 3, 3);
    const auto [lo, hi] = std::minmax_element(cf.alpha.begin(), cf.alpha.end());
    CHECK(*lo == 0.0);
    CHECK(*hi == 1.0);
}
