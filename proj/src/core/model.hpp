#pragma once

#include <cstdint>
#include <vector>

#include "losses.hpp"
#include "metrics.hpp"
#include "synth.hpp"

namespace floss {

// Pixelwise logistic model: y_hat_i = sigmoid(w . x_i).
struct ModelParams {
    std::vector<double> weights; // length FeatureStack::kChannels
};

struct TrainConfig {
    LossKind loss = LossKind::kFLoss;
    Beta2 beta2;
    double lr = 0.5;
    int epochs = 20;
    std::uint64_t seed = 0;
    double init_scale = 0.01;
    int checkpoint_every = 50;
    double eps = kDefaultEps;
    // CE-family losses step on the per-pixel mean so learning rates stay on
    // one scale across losses; the loss module's sum form is unaffected.
    bool ce_mean_per_pixel = true;
};

struct LogRecord {
    std::int64_t iteration = 0;
    double train_loss = 0.0; // mean per-image loss over the full train set
    double max_f = 0.0;      // test-set values below
    double mean_f = 0.0;
    double mae = 0.0;
};

using ConvergenceLog = std::vector<LogRecord>;

struct TrainResult {
    ModelParams params;
    ConvergenceLog log;
    EvalSummary final_eval;
};

double sigmoid(double z);

SaliencyMap predict(const ModelParams& params, const FeatureStack& features);

// dL/dw = sum_i (dL/dy_hat_i) * y_hat_i (1 - y_hat_i) * x_i.
std::vector<double> param_gradient(const ModelParams& params, const Sample& sample,
                                   const LossSpec& loss_spec);

// Plain gradient descent, one image per step, visit order reshuffled each
// epoch from the seed. Checkpoints: iteration 0, every checkpoint_every
// steps, and the final step. Non-finite loss or weights abort with a
// DivergenceError naming the iteration.
TrainResult train(const std::vector<Sample>& train_set,
                  const std::vector<Sample>& test_set, const TrainConfig& config);

} // namespace floss
