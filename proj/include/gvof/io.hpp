#pragma once

#include <string>

#include "gvof/study.hpp"
#include "gvof/volume.hpp"

namespace gvof {

// Volume container: human-readable sidecar header at `path` plus a raw
// payload of little-endian 32-bit floats (x-fastest order) at `path`.raw.
// Round trips are bitwise lossless for float-representable values.
void write_volume(const Volume& vol, const std::string& path);
Volume read_volume(const std::string& path);

// Binary 16-bit PGM (P5, maxval 65535, big-endian samples), linear min-max
// window over the slice; a constant slice maps to all zeros.
void export_slice_pgm(const Volume& vol, int z, const std::string& path);

// CSV schema:
//   contrast,duration_s,filter,realization,sphere_mm,
//   snr_db,cnr,fwhm_mm,ac_max,bias_pct,repro_pct,cov_snr
// Numbers carry 6 significant digits; undefined metrics stay empty;
// aggregate rows carry realization=agg.
void write_report_csv(const MetricsReport& report, const std::string& path);
std::string report_csv_string(const MetricsReport& report);

}  // namespace gvof
