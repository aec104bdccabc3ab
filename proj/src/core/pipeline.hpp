#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "losses.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "synth.hpp"

namespace floss {

inline constexpr double kGradCheckTolerance = 1e-6;

// Shipped per-loss learning rates, one base rate for all losses except
// logfloss: the log mapping rescales gradients by 1/F, which amplifies the
// early steps, so its nominal rate sits lower to stay on the same scale.
double default_lr(LossKind kind);

struct LosscheckRow {
    LossKind loss;
    double max_rel_err;
};

struct LosscheckReport {
    std::vector<LosscheckRow> rows;
    double tolerance = kGradCheckTolerance;
    int trials = 0;
    int size = 0;

    bool pass() const;
};

// loss_name is one of the four loss names or "all".
LosscheckReport cmd_losscheck(const std::string& loss_name, double beta2, int size,
                              int trials, std::uint64_t seed);

struct SurfaceOptions {
    std::string loss = "floss";
    std::string gt_code = "01"; // "01" -> gt [0,1], "11" -> gt [1,1]
    double beta2 = kDefaultBeta2;
    int resolution = 101;
    std::filesystem::path out_dir;
};

void cmd_surface(const SurfaceOptions& options);

// Generates and writes a dataset; returns the number of images.
int cmd_synth(const SynthConfig& config, const std::filesystem::path& out_dir);

struct TrainOptions {
    std::filesystem::path data_dir;
    std::filesystem::path out_dir;
    std::string loss = "floss";
    double beta2 = kDefaultBeta2;
    double lr = 0.0; // 0 selects the per-loss default
    int epochs = 20;
    std::uint64_t seed = 0;
    double init_scale = 0.01;
    int checkpoint_every = 50;
    double train_fraction = 2.0 / 3.0;
};

struct TrainOutcome {
    EvalSummary final_eval;
    std::int64_t iterations = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double lr = 0.0; // resolved learning rate
};

TrainOutcome cmd_train(const TrainOptions& options);

struct EvalOptions {
    std::filesystem::path pred_dir;
    std::filesystem::path gt_dir;
    std::filesystem::path out_dir;
    double beta2 = kDefaultBeta2;
};

struct EvalOutcome {
    EvalSummary average_pr;
    EvalSummary per_image_f;
    ThresholdStats t_o_stats;
    std::size_t n_pairs = 0;
};

EvalOutcome cmd_eval(const EvalOptions& options);

struct SweepOptions {
    std::filesystem::path pred;
    std::filesystem::path gt;
    std::filesystem::path out_dir;
    double beta2 = kDefaultBeta2;
};

EvalSummary cmd_sweep(const SweepOptions& options);

struct ReportOptions {
    std::vector<std::filesystem::path> run_dirs; // >= 2
    std::filesystem::path gt_dir;
    std::filesystem::path out_dir;
};

void cmd_report(const ReportOptions& options);

} // namespace floss
