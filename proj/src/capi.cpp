#include "floss/floss.h"

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/losses.hpp"
#include "core/map.hpp"
#include "core/metrics.hpp"
#include "core/pgm.hpp"
#include "core/pipeline.hpp"

struct fl_map {
    floss::SaliencyMap map;
};

struct fl_binary_map {
    floss::BinaryMap map;
};

struct fl_curve {
    floss::SweepCurve curve;
};

namespace {

thread_local std::string g_last_error;

fl_status fail(fl_status status, const char* what) {
    g_last_error = what;
    return status;
}

// Exception-to-status boundary shared by every entry point.
template <typename Fn>
fl_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FL_OK;
    } catch (const floss::DimensionError& e) {
        return fail(FL_ERR_DIMENSION, e.what());
    } catch (const floss::DomainError& e) {
        return fail(FL_ERR_DOMAIN, e.what());
    } catch (const floss::ArgumentError& e) {
        return fail(FL_ERR_ARGUMENT, e.what());
    } catch (const floss::SaturationError& e) {
        return fail(FL_ERR_SATURATION, e.what());
    } catch (const floss::DivergenceError& e) {
        return fail(FL_ERR_DIVERGENCE, e.what());
    } catch (const floss::ConfigError& e) {
        return fail(FL_ERR_CONFIG, e.what());
    } catch (const floss::UnsupportedFormatError& e) {
        return fail(FL_ERR_UNSUPPORTED_FORMAT, e.what());
    } catch (const floss::FormatError& e) {
        return fail(FL_ERR_FORMAT, e.what());
    } catch (const floss::IoError& e) {
        return fail(FL_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(FL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FL_ERR_INTERNAL, "unknown failure");
    }
}

// True when a NULL-argument precondition failed; records the message.
bool bad_args(bool ok, const char* what) {
    if (!ok) fail(FL_ERR_ARGUMENT, what);
    return !ok;
}

floss::Beta2 beta2_of(double value) { return floss::Beta2(value); }

fl_eval_summary to_c(const floss::EvalSummary& s) {
    return {s.max_f, s.mean_f, s.mae, s.t_o};
}

} // namespace

extern "C" {

const char* fl_status_name(fl_status status) {
    switch (status) {
        case FL_OK: return "ok";
        case FL_ERR_DIMENSION: return "dimension error";
        case FL_ERR_DOMAIN: return "domain error";
        case FL_ERR_ARGUMENT: return "argument error";
        case FL_ERR_SATURATION: return "saturation error";
        case FL_ERR_DIVERGENCE: return "divergence error";
        case FL_ERR_CONFIG: return "config error";
        case FL_ERR_FORMAT: return "format error";
        case FL_ERR_UNSUPPORTED_FORMAT: return "unsupported format error";
        case FL_ERR_IO: return "io error";
        case FL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* fl_last_error(void) { return g_last_error.c_str(); }

const char* fl_version(void) { return "1.0.0"; }

fl_status fl_map_create(int width, int height, const double* values, fl_map** out) {
    if (bad_args(values && out, "fl_map_create: values and out must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const std::size_t n = width > 0 && height > 0
                                  ? static_cast<std::size_t>(width) * height
                                  : 0;
        *out = new fl_map{
            floss::SaliencyMap(width, height, std::vector<double>(values, values + n))};
    });
}

void fl_map_free(fl_map* map) { delete map; }

int fl_map_width(const fl_map* map) { return map ? map->map.width() : 0; }

int fl_map_height(const fl_map* map) { return map ? map->map.height() : 0; }

const double* fl_map_values(const fl_map* map) {
    return map ? map->map.values().data() : nullptr;
}

fl_status fl_binary_map_create(int width, int height, const uint8_t* values,
                               fl_binary_map** out) {
    if (bad_args(values && out, "fl_binary_map_create: values and out must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const std::size_t n = width > 0 && height > 0
                                  ? static_cast<std::size_t>(width) * height
                                  : 0;
        *out = new fl_binary_map{
            floss::BinaryMap(width, height, std::vector<std::uint8_t>(values, values + n))};
    });
}

void fl_binary_map_free(fl_binary_map* map) { delete map; }

int fl_binary_map_width(const fl_binary_map* map) { return map ? map->map.width() : 0; }

int fl_binary_map_height(const fl_binary_map* map) {
    return map ? map->map.height() : 0;
}

const uint8_t* fl_binary_map_values(const fl_binary_map* map) {
    return map ? map->map.values().data() : nullptr;
}

fl_status fl_binarize(const fl_map* pred, double threshold, fl_binary_map** out) {
    if (bad_args(pred && out, "fl_binarize: pred and out must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        *out = new fl_binary_map{floss::binarize(pred->map, threshold)};
    });
}

fl_status fl_relaxed_f(const fl_map* pred, const fl_binary_map* gt, double beta2,
                       double* out) {
    if (bad_args(pred && gt && out, "fl_relaxed_f: arguments must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        *out = floss::relaxed_f(pred->map, gt->map, beta2_of(beta2));
    });
}

fl_status fl_loss_eval(const char* loss, const fl_map* pred, const fl_binary_map* gt,
                       double beta2, double* loss_out, double* grad_out) {
    if (bad_args(loss && pred && gt && loss_out,
                "fl_loss_eval: loss, pred, gt, loss_out must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const auto kind = floss::parse_loss_kind(loss);
        if (!kind) {
            throw floss::ArgumentError("unknown loss '" + std::string(loss) + "'");
        }
        const floss::LossSpec spec{*kind, beta2_of(beta2), floss::kDefaultEps, false};
        const floss::LossResult result = floss::eval_loss(spec, pred->map, gt->map);
        *loss_out = result.loss;
        if (grad_out) {
            std::memcpy(grad_out, result.grad.values().data(),
                        result.grad.size() * sizeof(double));
        }
    });
}

fl_status fl_f_at_threshold(const fl_map* pred, const fl_binary_map* gt,
                            double threshold, double beta2, double* precision,
                            double* recall, double* f) {
    if (bad_args(pred && gt, "fl_f_at_threshold: pred and gt must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const floss::PrfPoint p =
            floss::f_at_threshold(pred->map, gt->map, threshold, beta2_of(beta2));
        if (precision) *precision = p.precision;
        if (recall) *recall = p.recall;
        if (f) *f = p.f;
    });
}

fl_status fl_mae(const fl_map* pred, const fl_binary_map* gt, double* out) {
    if (bad_args(pred && gt && out, "fl_mae: arguments must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] { *out = floss::mae(pred->map, gt->map); });
}

fl_status fl_sweep(const fl_map* pred, const fl_binary_map* gt, const double* thresholds,
                   size_t n_thresholds, double beta2, fl_curve** out) {
    if (bad_args(pred && gt && out, "fl_sweep: pred, gt, out must not be NULL")) return FL_ERR_ARGUMENT;
    if (bad_args(thresholds || n_thresholds == 0,
                "fl_sweep: thresholds is NULL but n_thresholds > 0")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const std::vector<double> ts =
            n_thresholds ? std::vector<double>(thresholds, thresholds + n_thresholds)
                         : floss::default_thresholds();
        *out = new fl_curve{floss::sweep(pred->map, gt->map, ts, beta2_of(beta2))};
    });
}

void fl_curve_free(fl_curve* curve) { delete curve; }

size_t fl_curve_size(const fl_curve* curve) { return curve ? curve->curve.size() : 0; }

fl_status fl_curve_point(const fl_curve* curve, size_t index, double* threshold,
                         double* precision, double* recall, double* f) {
    if (bad_args(curve, "fl_curve_point: curve must not be NULL")) return FL_ERR_ARGUMENT;
    if (index >= curve->curve.size()) {
        return fail(FL_ERR_ARGUMENT, "fl_curve_point: index out of range");
    }
    if (threshold) *threshold = curve->curve.thresholds[index];
    if (precision) *precision = curve->curve.precision[index];
    if (recall) *recall = curve->curve.recall[index];
    if (f) *f = curve->curve.f[index];
    g_last_error.clear();
    return FL_OK;
}

fl_status fl_curve_optimal(const fl_curve* curve, double* t_o, double* max_f) {
    if (bad_args(curve, "fl_curve_optimal: curve must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const auto [t, f] = floss::optimal_threshold(curve->curve);
        if (t_o) *t_o = t;
        if (max_f) *max_f = f;
    });
}

fl_status fl_curve_mean_f(const fl_curve* curve, double* out) {
    if (bad_args(curve && out, "fl_curve_mean_f: arguments must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] { *out = floss::mean_f(curve->curve); });
}

fl_status fl_read_pgm(const char* path, fl_map** out) {
    if (bad_args(path && out, "fl_read_pgm: path and out must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] { *out = new fl_map{floss::read_pgm(path).map}; });
}

fl_status fl_write_pgm(const fl_map* map, const char* path) {
    if (bad_args(map && path, "fl_write_pgm: map and path must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] { floss::write_pgm(map->map, path); });
}

fl_status fl_cmd_losscheck(const char* loss, double beta2, int size, int trials,
                           uint64_t seed, fl_losscheck_report* out) {
    if (bad_args(loss && out, "fl_cmd_losscheck: loss and out must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const floss::LosscheckReport report =
            floss::cmd_losscheck(loss, beta2, size, trials, seed);
        std::memset(out, 0, sizeof *out);
        out->n_rows = static_cast<int>(report.rows.size());
        out->trials = report.trials;
        out->size = report.size;
        out->tolerance = report.tolerance;
        out->pass = report.pass() ? 1 : 0;
        for (std::size_t i = 0; i < report.rows.size() && i < 4; ++i) {
            std::snprintf(out->rows[i].loss, sizeof out->rows[i].loss, "%s",
                          floss::loss_kind_name(report.rows[i].loss));
            out->rows[i].max_rel_err = report.rows[i].max_rel_err;
        }
    });
}

fl_status fl_cmd_surface(const char* loss, const char* gt_code, double beta2,
                         int resolution, const char* out_dir) {
    if (bad_args(loss && gt_code && out_dir,
                "fl_cmd_surface: loss, gt_code, out_dir must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        floss::cmd_surface({loss, gt_code, beta2, resolution, out_dir});
    });
}

void fl_synth_options_init(fl_synth_options* options) {
    if (!options) return;
    const floss::SynthConfig defaults;
    options->width = defaults.width;
    options->height = defaults.height;
    options->n_images = defaults.n_images;
    options->blobs_min = defaults.blobs_min;
    options->blobs_max = defaults.blobs_max;
    options->fg_lo = defaults.fg_lo;
    options->fg_hi = defaults.fg_hi;
    options->bg_lo = defaults.bg_lo;
    options->bg_hi = defaults.bg_hi;
    options->noise_sigma = defaults.noise_sigma;
    options->seed = defaults.seed;
}

fl_status fl_cmd_synth(const fl_synth_options* options, const char* out_dir,
                       int* n_written) {
    if (bad_args(options && out_dir, "fl_cmd_synth: options and out_dir must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        floss::SynthConfig config;
        config.width = options->width;
        config.height = options->height;
        config.n_images = options->n_images;
        config.blobs_min = options->blobs_min;
        config.blobs_max = options->blobs_max;
        config.fg_lo = options->fg_lo;
        config.fg_hi = options->fg_hi;
        config.bg_lo = options->bg_lo;
        config.bg_hi = options->bg_hi;
        config.noise_sigma = options->noise_sigma;
        config.seed = options->seed;
        const int n = floss::cmd_synth(config, out_dir);
        if (n_written) *n_written = n;
    });
}

void fl_train_options_init(fl_train_options* options) {
    if (!options) return;
    const floss::TrainOptions defaults;
    options->data_dir = nullptr;
    options->out_dir = nullptr;
    options->loss = "floss";
    options->beta2 = floss::kDefaultBeta2;
    options->lr = defaults.lr;
    options->epochs = defaults.epochs;
    options->seed = defaults.seed;
    options->init_scale = defaults.init_scale;
    options->checkpoint_every = defaults.checkpoint_every;
    options->train_fraction = defaults.train_fraction;
}

fl_status fl_cmd_train(const fl_train_options* options, fl_train_outcome* out) {
    if (bad_args(options && options->data_dir && options->out_dir && options->loss,
                "fl_cmd_train: options with data_dir, out_dir, loss are required")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        floss::TrainOptions opts;
        opts.data_dir = options->data_dir;
        opts.out_dir = options->out_dir;
        opts.loss = options->loss;
        opts.beta2 = options->beta2;
        opts.lr = options->lr;
        opts.epochs = options->epochs;
        opts.seed = options->seed;
        opts.init_scale = options->init_scale;
        opts.checkpoint_every = options->checkpoint_every;
        opts.train_fraction = options->train_fraction;
        const floss::TrainOutcome outcome = floss::cmd_train(opts);
        if (out) {
            out->final_eval = to_c(outcome.final_eval);
            out->iterations = outcome.iterations;
            out->n_train = static_cast<int>(outcome.n_train);
            out->n_test = static_cast<int>(outcome.n_test);
            out->lr = outcome.lr;
        }
    });
}

fl_status fl_cmd_eval(const char* pred_dir, const char* gt_dir, const char* out_dir,
                      double beta2, fl_eval_outcome* out) {
    if (bad_args(pred_dir && gt_dir && out_dir,
                "fl_cmd_eval: pred_dir, gt_dir, out_dir must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const floss::EvalOutcome outcome =
            floss::cmd_eval({pred_dir, gt_dir, out_dir, beta2});
        if (out) {
            out->average_pr = to_c(outcome.average_pr);
            out->per_image_f = to_c(outcome.per_image_f);
            out->t_o_mean = outcome.t_o_stats.mean;
            out->t_o_variance = outcome.t_o_stats.variance;
            out->n_pairs = static_cast<int>(outcome.n_pairs);
        }
    });
}

fl_status fl_cmd_sweep(const char* pred_pgm, const char* gt_pgm, const char* out_dir,
                       double beta2, fl_eval_summary* out) {
    if (bad_args(pred_pgm && gt_pgm && out_dir,
                "fl_cmd_sweep: pred_pgm, gt_pgm, out_dir must not be NULL")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        const floss::EvalSummary summary =
            floss::cmd_sweep({pred_pgm, gt_pgm, out_dir, beta2});
        if (out) *out = to_c(summary);
    });
}

fl_status fl_cmd_report(const char* const* run_dirs, int n_runs, const char* gt_dir,
                        const char* out_dir) {
    if (bad_args(run_dirs && gt_dir && out_dir && n_runs > 0,
                "fl_cmd_report: run_dirs, gt_dir, out_dir are required")) return FL_ERR_ARGUMENT;
    return guarded([&] {
        floss::ReportOptions opts;
        for (int i = 0; i < n_runs; ++i) {
            if (!run_dirs[i]) {
                throw floss::ArgumentError("fl_cmd_report: run_dirs[" +
                                           std::to_string(i) + "] is NULL");
            }
            opts.run_dirs.emplace_back(run_dirs[i]);
        }
        opts.gt_dir = gt_dir;
        opts.out_dir = out_dir;
        floss::cmd_report(opts);
    });
}

double fl_default_lr(const char* loss) {
    if (!loss) return 0.0;
    const auto kind = floss::parse_loss_kind(loss);
    return kind ? floss::default_lr(*kind) : 0.0;
}

} // extern "C"
