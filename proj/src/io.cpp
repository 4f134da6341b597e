#include "gvof/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gvof {

static_assert(std::endian::native == std::endian::little,
              "volume payloads are little-endian");

namespace {

std::string payload_path(const std::string& path) { return path + ".raw"; }

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_volume(const Volume& vol, const std::string& path) {
    vol.check_finite("write_volume");
    std::ofstream hdr(path, std::ios::trunc);
    if (!hdr) throw std::runtime_error("write_volume: cannot open " + path);
    hdr << "magic: GVOFVOL1\n";
    hdr << "dims: " << vol.nx << " " << vol.ny << " " << vol.nz << "\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "spacing: %.17g %.17g %.17g\n", vol.sx,
                  vol.sy, vol.sz);
    hdr << buf;
    hdr << "unit: kBq/ml\n";
    hdr << "byteorder: little-endian\n";
    hdr << "scalar: float32\n";
    if (!hdr.good()) throw std::runtime_error("write_volume: header write failed");
    hdr.close();

    std::ofstream raw(payload_path(path), std::ios::trunc | std::ios::binary);
    if (!raw)
        throw std::runtime_error("write_volume: cannot open " + payload_path(path));
    std::vector<float> payload(vol.data.size());
    for (std::size_t t = 0; t < payload.size(); ++t)
        payload[t] = static_cast<float>(vol.data[t]);
    raw.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (!raw.good()) throw std::runtime_error("write_volume: payload write failed");
}

Volume read_volume(const std::string& path) {
    std::ifstream hdr(path);
    if (!hdr) throw std::runtime_error("read_volume: cannot open " + path);
    int nx = 0, ny = 0, nz = 0;
    double sx = 0, sy = 0, sz = 0;
    bool saw_magic = false;
    std::string line;
    while (std::getline(hdr, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(0, colon);
        std::istringstream val(line.substr(colon + 1));
        if (key == "magic") {
            std::string magic;
            val >> magic;
            if (magic != "GVOFVOL1")
                throw std::runtime_error("read_volume: magic mismatch in " + path);
            saw_magic = true;
        } else if (key == "dims") {
            val >> nx >> ny >> nz;
        } else if (key == "spacing") {
            val >> sx >> sy >> sz;
        } else if (key == "byteorder") {
            std::string bo;
            val >> bo;
            if (bo != "little-endian")
                throw std::runtime_error("read_volume: unsupported byte order");
        } else if (key == "scalar") {
            std::string sc;
            val >> sc;
            if (sc != "float32")
                throw std::runtime_error("read_volume: unsupported scalar type");
        }
    }
    if (!saw_magic)
        throw std::runtime_error("read_volume: magic mismatch in " + path);
    if (nx < 1 || ny < 1 || nz < 1 || sx <= 0 || sy <= 0 || sz <= 0)
        throw std::runtime_error("read_volume: invalid header in " + path);

    std::ifstream raw(payload_path(path), std::ios::binary);
    if (!raw)
        throw std::runtime_error("read_volume: cannot open " + payload_path(path));
    raw.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(raw.tellg());
    raw.seekg(0);
    const std::size_t expected =
        static_cast<std::size_t>(nx) * ny * nz * sizeof(float);
    if (bytes != expected)
        throw std::runtime_error("read_volume: payload length mismatch (" +
                                 std::to_string(bytes) + " vs " +
                                 std::to_string(expected) + " bytes)");
    std::vector<float> payload(static_cast<std::size_t>(nx) * ny * nz);
    raw.read(reinterpret_cast<char*>(payload.data()),
             static_cast<std::streamsize>(bytes));
    if (!raw.good()) throw std::runtime_error("read_volume: payload read failed");

    Volume vol(nx, ny, nz, sx, sy, sz);
    for (std::size_t t = 0; t < payload.size(); ++t) {
        if (!std::isfinite(payload[t]))
            throw std::runtime_error("read_volume: NaN/Inf in payload");
        vol.data[t] = payload[t];
    }
    return vol;
}

void export_slice_pgm(const Volume& vol, int z, const std::string& path) {
    if (z < 0 || z >= vol.nz)
        throw std::out_of_range("export_slice_pgm: z out of range");
    const Slice s = extract_slice(vol, z);
    double lo = s.v[0], hi = s.v[0];
    for (double v : s.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("export_slice_pgm: cannot open " + path);
    out << "P5\n" << vol.nx << " " << vol.ny << "\n65535\n";
    for (double v : s.v) {
        const double w = span > 0.0 ? (v - lo) / span : 0.0;
        const auto sample =
            static_cast<std::uint16_t>(std::lround(w * 65535.0));
        const char bytes[2] = {static_cast<char>(sample >> 8),
                               static_cast<char>(sample & 0xff)};
        out.write(bytes, 2);
    }
    if (!out.good()) throw std::runtime_error("export_slice_pgm: write failed");
}

std::string report_csv_string(const MetricsReport& report) {
    std::ostringstream out;
    out << "contrast,duration_s,filter,realization,sphere_mm,snr_db,cnr,"
           "fwhm_mm,ac_max,bias_pct,repro_pct,cov_snr\n";
    auto cell = [&](const std::optional<double>& v) {
        out << ",";
        if (v) out << fmt6(*v);
    };
    for (const auto& r : report.rows) {
        out << r.contrast << "," << fmt6(r.duration_s) << "," << r.filter << ",";
        if (r.realization < 0)
            out << "agg";
        else
            out << r.realization;
        out << "," << fmt6(r.sphere_mm);
        cell(r.snr_db);
        cell(r.cnr);
        cell(r.fwhm_mm);
        cell(r.ac_max);
        cell(r.bias_pct);
        cell(r.repro_pct);
        cell(r.cov_snr);
        out << "\n";
    }
    return out.str();
}

void write_report_csv(const MetricsReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
    out << report_csv_string(report);
    if (!out.good()) throw std::runtime_error("write_report_csv: write failed");
}

}  // namespace gvof
