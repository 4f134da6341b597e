#include "gvof/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "gvof/metrics.hpp"

namespace gvof {

void StudyConfig::validate() const {
    if (realizations < 1)
        throw std::invalid_argument("StudyConfig: realizations must be >= 1");
    if (filters.empty())
        throw std::invalid_argument("StudyConfig: need at least one filter");
    if (contrasts.empty() || durations_s.empty())
        throw std::invalid_argument("StudyConfig: need contrasts and durations");
    if (jobs < 1) throw std::invalid_argument("StudyConfig: jobs must be >= 1");
    for (const auto& f : filters)
        if (f != "none") (void)filter_config(f);
    for (const auto& c : contrasts) (void)contrast_preset(c);
    for (double d : durations_s)
        if (d <= 0.0)
            throw std::invalid_argument("StudyConfig: durations must be > 0");
}

FilterConfig StudyConfig::filter_config(const std::string& name) const {
    if (name == "gf") return gf;
    if (name == "bf") return bf;
    if (name == "ndf") return ndf;
    if (name == "gvof") return gvof;
    throw std::invalid_argument("unknown filter name: " + name);
}

std::uint64_t cell_base_seed(const StudyConfig& config, std::size_t ci,
                             std::size_t di) {
    return config.base_seed +
           100000ull * (ci * config.durations_s.size() + di);
}

namespace {

struct ContrastContext {
    ContrastPreset preset;
    PhantomSpec spec;
    Volume truth;
    Mask bg_mask;
    std::vector<Mask> eroded;   // per sphere
    std::vector<Mask> dilated;  // per sphere, max-search region
};

struct CellResult {
    // indexed [filter][sphere] and [filter]
    std::vector<std::optional<double>> snr;
    std::vector<std::optional<double>> fwhm;
    std::vector<std::vector<std::optional<double>>> cnr_v;
    std::vector<std::vector<std::optional<double>>> acmax_v;
};

double mask_max(const Volume& vol, const Mask& m) {
    double best = -1e300;
    bool any = false;
    for (std::size_t t = 0; t < vol.data.size(); ++t)
        if (m.data[t]) {
            best = std::max(best, vol.data[t]);
            any = true;
        }
    if (!any) throw std::runtime_error("mask_max: empty mask");
    return best;
}

ContrastContext make_context(const StudyConfig& cfg, const std::string& label) {
    ContrastContext ctx;
    ctx.preset = contrast_preset(label);
    ctx.spec = default_phantom_spec(ctx.preset, cfg.nx, cfg.ny, cfg.nz, cfg.sx,
                                    cfg.sy, cfg.sz);
    ctx.spec.body_semi_axis_x_mm = cfg.body_semi_axis_x_mm;
    ctx.spec.body_semi_axis_y_mm = cfg.body_semi_axis_y_mm;
    ctx.spec.validate();
    ctx.truth = rasterize_phantom(ctx.spec, cfg.supersample);

    const auto gc = ctx.spec.grid_center_mm();
    const std::array<double, 3> bg_center = {gc[0] + cfg.bg_roi_offset_mm[0],
                                             gc[1] + cfg.bg_roi_offset_mm[1],
                                             gc[2] + cfg.bg_roi_offset_mm[2]};
    const double bg_r = 0.5 * cfg.bg_roi_diameter_mm;
    for (const auto& s : ctx.spec.spheres) {
        double d2 = 0.0;
        for (int t = 0; t < 3; ++t) {
            const double d = bg_center[t] - s.center_mm[t];
            d2 += d * d;
        }
        if (std::sqrt(d2) - bg_r - 0.5 * s.diameter_mm < cfg.bg_clearance_mm)
            throw std::runtime_error(
                "experiment_report: background ROI clearance unsatisfiable on "
                "this grid");
    }
    // the ROI sphere must sit inside the body
    const double ax = ctx.spec.body_semi_axis_x_mm - bg_r;
    const double ay = ctx.spec.body_semi_axis_y_mm - bg_r;
    const double ex = (bg_center[0] - gc[0]) / ax;
    const double ey = (bg_center[1] - gc[1]) / ay;
    if (ax <= 0.0 || ay <= 0.0 || ex * ex + ey * ey > 1.0)
        throw std::runtime_error(
            "experiment_report: background ROI extends outside the body");

    ctx.bg_mask = sphere_mask(cfg.nx, cfg.ny, cfg.nz, cfg.sx, cfg.sy, cfg.sz,
                              bg_center, cfg.bg_roi_diameter_mm);
    for (const auto& s : ctx.spec.spheres) {
        const Mask geom = sphere_mask(cfg.nx, cfg.ny, cfg.nz, cfg.sx, cfg.sy,
                                      cfg.sz, s.center_mm, s.diameter_mm);
        ctx.eroded.push_back(erode_mask_2d(geom));
        ctx.dilated.push_back(dilate_mask_2d(geom));
    }
    return ctx;
}

}  // namespace

MetricsReport experiment_report(const StudyConfig& cfg) {
    cfg.validate();

    std::vector<ContrastContext> contexts;
    for (const auto& label : cfg.contrasts)
        contexts.push_back(make_context(cfg, label));

    const std::size_t nc = cfg.contrasts.size();
    const std::size_t nd = cfg.durations_s.size();
    const std::size_t nr = static_cast<std::size_t>(cfg.realizations);
    const std::size_t nf = cfg.filters.size();
    const std::size_t nsph = contexts[0].spec.spheres.size();

    // one task per (contrast, duration, realization)
    struct Task {
        std::size_t ci, di, ri;
    };
    std::vector<Task> tasks;
    for (std::size_t ci = 0; ci < nc; ++ci)
        for (std::size_t di = 0; di < nd; ++di)
            for (std::size_t ri = 0; ri < nr; ++ri) tasks.push_back({ci, di, ri});

    std::vector<CellResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex fail_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size() || failed.load()) return;
            try {
                const Task& task = tasks[t];
                const ContrastContext& ctx = contexts[task.ci];
                AcquisitionModel model;
                model.duration_s = cfg.durations_s[task.di];
                model.sensitivity = cfg.sensitivity;
                model.psf_fwhm_mm = cfg.psf_fwhm_mm;
                model.seed = cell_base_seed(cfg, task.ci, task.di) + task.ri;
                const Volume acquired = simulate_acquisition(ctx.truth, model);

                CellResult res;
                res.snr.resize(nf);
                res.fwhm.resize(nf);
                res.cnr_v.assign(nf, std::vector<std::optional<double>>(nsph));
                res.acmax_v.assign(nf, std::vector<std::optional<double>>(nsph));
                // the 37 mm sphere (largest) carries the resolution metric
                std::size_t big = 0;
                for (std::size_t s = 1; s < nsph; ++s)
                    if (ctx.spec.spheres[s].diameter_mm >
                        ctx.spec.spheres[big].diameter_mm)
                        big = s;

                for (std::size_t fi = 0; fi < nf; ++fi) {
                    const Volume filtered =
                        cfg.filters[fi] == "none"
                            ? acquired
                            : apply_filter(acquired,
                                           cfg.filter_config(cfg.filters[fi]));
                    try {
                        res.snr[fi] = snr_db(filtered, ctx.bg_mask);
                    } catch (const std::exception&) {
                    }
                    try {
                        res.fwhm[fi] = resolution_fwhm(
                            filtered, ctx.spec.spheres[big].center_mm,
                            ctx.spec.spheres[big].diameter_mm, Axis::X);
                    } catch (const std::exception&) {
                    }
                    for (std::size_t s = 0; s < nsph; ++s) {
                        try {
                            res.cnr_v[fi][s] =
                                cnr(filtered, ctx.eroded[s], ctx.bg_mask);
                        } catch (const std::exception&) {
                        }
                        try {
                            res.acmax_v[fi][s] =
                                mask_max(filtered, ctx.dilated[s]);
                        } catch (const std::exception&) {
                        }
                    }
                }
                results[t] = std::move(res);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                failed.store(true);
                if (failure_message.empty()) failure_message = e.what();
            }
        }
    };

    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), tasks.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load())
        throw std::runtime_error("experiment_report: " + failure_message);

    auto task_index = [&](std::size_t ci, std::size_t di, std::size_t ri) {
        return (ci * nd + di) * nr + ri;
    };

    MetricsReport report;
    report.notes = "ac_max search region: geometric sphere mask dilated by 1 "
                   "voxel (3x3 per slice)";
    for (std::size_t ci = 0; ci < nc; ++ci) {
        const ContrastContext& ctx = contexts[ci];
        for (std::size_t di = 0; di < nd; ++di) {
            for (std::size_t fi = 0; fi < nf; ++fi) {
                // per-realization rows
                for (std::size_t ri = 0; ri < nr; ++ri) {
                    const CellResult& res = results[task_index(ci, di, ri)];
                    for (std::size_t s = 0; s < nsph; ++s) {
                        ReportRow row;
                        row.contrast = cfg.contrasts[ci];
                        row.duration_s = cfg.durations_s[di];
                        row.filter = cfg.filters[fi];
                        row.realization = static_cast<int>(ri);
                        row.sphere_mm = ctx.spec.spheres[s].diameter_mm;
                        row.snr_db = res.snr[fi];
                        row.cnr = res.cnr_v[fi][s];
                        if (ctx.spec.spheres[s].diameter_mm ==
                            ctx.spec.spheres[0].diameter_mm)
                            row.fwhm_mm = res.fwhm[fi];
                        row.ac_max = res.acmax_v[fi][s];
                        report.rows.push_back(row);
                    }
                }
                // aggregate rows, one per sphere
                std::vector<double> snrs;
                for (std::size_t ri = 0; ri < nr; ++ri) {
                    const CellResult& res = results[task_index(ci, di, ri)];
                    if (res.snr[fi]) snrs.push_back(*res.snr[fi]);
                }
                for (std::size_t s = 0; s < nsph; ++s) {
                    ReportRow row;
                    row.contrast = cfg.contrasts[ci];
                    row.duration_s = cfg.durations_s[di];
                    row.filter = cfg.filters[fi];
                    row.realization = -1;
                    row.sphere_mm = ctx.spec.spheres[s].diameter_mm;

                    std::vector<double> acs, cnrs, fwhms;
                    for (std::size_t ri = 0; ri < nr; ++ri) {
                        const CellResult& res = results[task_index(ci, di, ri)];
                        if (res.acmax_v[fi][s]) acs.push_back(*res.acmax_v[fi][s]);
                        if (res.cnr_v[fi][s]) cnrs.push_back(*res.cnr_v[fi][s]);
                        if (s == 0 && res.fwhm[fi]) fwhms.push_back(*res.fwhm[fi]);
                    }
                    auto mean_of = [](const std::vector<double>& v)
                        -> std::optional<double> {
                        if (v.empty()) return std::nullopt;
                        double sum = 0.0;
                        for (double x : v) sum += x;
                        return sum / static_cast<double>(v.size());
                    };
                    row.snr_db = mean_of(snrs);
                    row.cnr = mean_of(cnrs);
                    row.fwhm_mm = mean_of(fwhms);
                    row.ac_max = mean_of(acs);
                    if (!acs.empty())
                        row.bias_pct = percent_bias(
                            *row.ac_max, ctx.spec.spheres[s].activity);
                    if (acs.size() >= 2) {
                        const auto [lo, hi] =
                            std::minmax_element(acs.begin(), acs.end());
                        if (*lo > 0.0)
                            row.repro_pct = percent_difference(*hi, *lo);
                    }
                    if (snrs.size() >= 2) row.cov_snr = cov(snrs);
                    report.rows.push_back(row);
                }
            }
        }
    }
    return report;
}

}  // namespace gvof
