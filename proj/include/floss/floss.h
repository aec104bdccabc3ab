#ifndef FLOSS_FLOSS_H
#define FLOSS_FLOSS_H

/* C interface to the floss library: relaxed F-measure losses with analytic
 * gradients, threshold-sweep evaluation, synthetic data, a toy trainer, and
 * the pipeline commands behind the CLI.
 *
 * Every function returns fl_status; on failure fl_last_error() holds a
 * thread-local description. Handles are opaque and freed with the matching
 * *_free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FLOSS_BUILD_SHARED)
#    define FLOSS_API __declspec(dllexport)
#  else
#    define FLOSS_API __declspec(dllimport)
#  endif
#else
#  define FLOSS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fl_status {
    FL_OK = 0,
    FL_ERR_DIMENSION = 1,
    FL_ERR_DOMAIN = 2,
    FL_ERR_ARGUMENT = 3,
    FL_ERR_SATURATION = 4,
    FL_ERR_DIVERGENCE = 5,
    FL_ERR_CONFIG = 6,
    FL_ERR_FORMAT = 7,
    FL_ERR_UNSUPPORTED_FORMAT = 8,
    FL_ERR_IO = 9,
    FL_ERR_INTERNAL = 10
} fl_status;

FLOSS_API const char* fl_status_name(fl_status status);

/* Message describing this thread's most recent failure; empty on success. */
FLOSS_API const char* fl_last_error(void);

FLOSS_API const char* fl_version(void);

/* Continuous per-pixel posterior map, values in [0,1], row-major. */
typedef struct fl_map fl_map;
/* {0,1} label map. */
typedef struct fl_binary_map fl_binary_map;
/* Threshold sweep: (threshold, precision, recall, f) per entry. */
typedef struct fl_curve fl_curve;

FLOSS_API fl_status fl_map_create(int width, int height, const double* values,
                                  fl_map** out);
FLOSS_API void fl_map_free(fl_map* map);
FLOSS_API int fl_map_width(const fl_map* map);
FLOSS_API int fl_map_height(const fl_map* map);
FLOSS_API const double* fl_map_values(const fl_map* map);

FLOSS_API fl_status fl_binary_map_create(int width, int height, const uint8_t* values,
                                         fl_binary_map** out);
FLOSS_API void fl_binary_map_free(fl_binary_map* map);
FLOSS_API int fl_binary_map_width(const fl_binary_map* map);
FLOSS_API int fl_binary_map_height(const fl_binary_map* map);
FLOSS_API const uint8_t* fl_binary_map_values(const fl_binary_map* map);

/* Strict comparison: output is 1 where value > threshold. */
FLOSS_API fl_status fl_binarize(const fl_map* pred, double threshold,
                                fl_binary_map** out);

FLOSS_API fl_status fl_relaxed_f(const fl_map* pred, const fl_binary_map* gt,
                                 double beta2, double* out);

/* loss is one of "floss", "logfloss", "ce", "balanced-ce". grad_out, if not
 * NULL, must hold width*height doubles and receives dL/dy_hat per pixel. */
FLOSS_API fl_status fl_loss_eval(const char* loss, const fl_map* pred,
                                 const fl_binary_map* gt, double beta2,
                                 double* loss_out, double* grad_out);

FLOSS_API fl_status fl_f_at_threshold(const fl_map* pred, const fl_binary_map* gt,
                                      double threshold, double beta2, double* precision,
                                      double* recall, double* f);

FLOSS_API fl_status fl_mae(const fl_map* pred, const fl_binary_map* gt, double* out);

/* thresholds may be NULL with n_thresholds 0 to use the default 256-level
 * set {i/255}. */
FLOSS_API fl_status fl_sweep(const fl_map* pred, const fl_binary_map* gt,
                             const double* thresholds, size_t n_thresholds, double beta2,
                             fl_curve** out);
FLOSS_API void fl_curve_free(fl_curve* curve);
FLOSS_API size_t fl_curve_size(const fl_curve* curve);
FLOSS_API fl_status fl_curve_point(const fl_curve* curve, size_t index,
                                   double* threshold, double* precision, double* recall,
                                   double* f);
/* Smallest maximizing threshold and its F. */
FLOSS_API fl_status fl_curve_optimal(const fl_curve* curve, double* t_o, double* max_f);
FLOSS_API fl_status fl_curve_mean_f(const fl_curve* curve, double* out);

/* Binary P5, maxval 255. Reading scales to [0,1]; writing rounds ties away
 * from zero. */
FLOSS_API fl_status fl_read_pgm(const char* path, fl_map** out);
FLOSS_API fl_status fl_write_pgm(const fl_map* map, const char* path);

/* ---- pipeline commands: one call per CLI subcommand ---- */

typedef struct fl_losscheck_row {
    char loss[16];
    double max_rel_err;
} fl_losscheck_row;

typedef struct fl_losscheck_report {
    fl_losscheck_row rows[4];
    int n_rows;
    int trials;
    int size;
    double tolerance;
    int pass; /* 1 when every row is under tolerance */
} fl_losscheck_report;

/* Central finite-difference check of the analytic gradients on random maps.
 * loss may be a single loss name or "all". */
FLOSS_API fl_status fl_cmd_losscheck(const char* loss, double beta2, int size,
                                     int trials, uint64_t seed,
                                     fl_losscheck_report* out);

/* Writes surface.csv and surface.svg for the 2-pixel problem; gt_code is
 * "01" or "11". */
FLOSS_API fl_status fl_cmd_surface(const char* loss, const char* gt_code, double beta2,
                                   int resolution, const char* out_dir);

typedef struct fl_synth_options {
    int width, height;
    int n_images;
    int blobs_min, blobs_max;
    double fg_lo, fg_hi;
    double bg_lo, bg_hi;
    double noise_sigma;
    uint64_t seed;
} fl_synth_options;

FLOSS_API void fl_synth_options_init(fl_synth_options* options);

FLOSS_API fl_status fl_cmd_synth(const fl_synth_options* options, const char* out_dir,
                                 int* n_written);

typedef struct fl_train_options {
    const char* data_dir;
    const char* out_dir;
    const char* loss;
    double beta2;
    double lr; /* 0 selects the per-loss default */
    int epochs;
    uint64_t seed;
    double init_scale;
    int checkpoint_every;
    double train_fraction;
} fl_train_options;

FLOSS_API void fl_train_options_init(fl_train_options* options);

typedef struct fl_eval_summary {
    double max_f, mean_f, mae, t_o;
} fl_eval_summary;

typedef struct fl_train_outcome {
    fl_eval_summary final_eval;
    int64_t iterations;
    int n_train, n_test;
    double lr; /* resolved learning rate */
} fl_train_outcome;

FLOSS_API fl_status fl_cmd_train(const fl_train_options* options,
                                 fl_train_outcome* out);

typedef struct fl_eval_outcome {
    fl_eval_summary average_pr;
    fl_eval_summary per_image_f;
    double t_o_mean, t_o_variance;
    int n_pairs;
} fl_eval_outcome;

FLOSS_API fl_status fl_cmd_eval(const char* pred_dir, const char* gt_dir,
                                const char* out_dir, double beta2,
                                fl_eval_outcome* out);

FLOSS_API fl_status fl_cmd_sweep(const char* pred_pgm, const char* gt_pgm,
                                 const char* out_dir, double beta2,
                                 fl_eval_summary* out);

FLOSS_API fl_status fl_cmd_report(const char* const* run_dirs, int n_runs,
                                  const char* gt_dir, const char* out_dir);

/* Shipped per-loss learning-rate default; 0 for an unknown name. */
FLOSS_API double fl_default_lr(const char* loss);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FLOSS_FLOSS_H */
