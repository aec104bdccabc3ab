#pragma once

#include <optional>
#include <string>
#include <vector>

#include "map.hpp"

namespace floss {

// Defaults shared across losses, metrics and the CLI.
inline constexpr double kDefaultBeta2 = 0.3;
inline constexpr double kDefaultEps = 1e-8;

// The beta^2 precision/recall balance factor. > 1 favours recall,
// < 1 favours precision.
struct Beta2 {
    double value;

    explicit Beta2(double v = kDefaultBeta2) : value(v) {
        if (!(v > 0.0)) {
            throw DomainError("beta2 must be positive, got " + std::to_string(v));
        }
    }
};

// Soft confusion counts over the continuous posterior:
//   tp = sum y_hat*y, fp = sum y_hat*(1-y), fn = sum (1-y_hat)*y.
// tp + fn equals the integer positive-pixel count exactly.
struct RelaxedCounts {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    double n_pos = 0.0; // ground-truth positives (= tp + fn)
    double n_neg = 0.0; // ground-truth negatives
};

RelaxedCounts relaxed_counts(const SaliencyMap& pred, const BinaryMap& gt);

// Single-eps F combination shared by the relaxed and the discrete route,
// so binarized relaxed F and thresholded discrete F agree bit for bit:
//   F = (1+b2)*tp / (b2*(tp+fn) + (tp+fp) + eps)
double fbeta_from_counts(double tp, double fp, double fn, Beta2 beta2, double eps);

// Eq.-1 style combination of already-computed precision/recall, under the
// same additive-eps convention. Used for dataset-level average-PR curves.
double fbeta_from_pr(double precision, double recall, Beta2 beta2, double eps);

double relaxed_f(const SaliencyMap& pred, const BinaryMap& gt, Beta2 beta2,
                 double eps = kDefaultEps);

struct LossResult {
    double loss;
    GradientMap grad;
};

// FLoss: 1 - relaxed F. Gradient at pixel i:
//   (1+b2)*tp/(H+eps)^2 - (1+b2)*y_i/(H+eps),  H = b2*(tp+fn) + (tp+fp).
// Bounded, non-vanishing at pred == gt, <= 0 at positives, >= 0 at negatives.
LossResult floss(const SaliencyMap& pred, const BinaryMap& gt, Beta2 beta2,
                 double eps = kDefaultEps);

// Log-FLoss: -log(relaxed F); gradient is the FLoss gradient scaled by 1/F.
// Throws SaturationError when F <= eps (the loss would be infinite).
LossResult log_floss(const SaliencyMap& pred, const BinaryMap& gt, Beta2 beta2,
                     double eps = kDefaultEps);

// Per-image-sum binary cross entropy with additive eps inside the logs.
// Gradient of the loss: -y/(y_hat+eps) + (1-y)/(1-y_hat+eps); unbounded as
// y_hat -> 0 at positives. `mean_per_pixel` divides loss and gradient by the
// pixel count, for learning-rate comparability with the bounded losses.
LossResult celoss(const SaliencyMap& pred, const BinaryMap& gt,
                  double eps = kDefaultEps, bool mean_per_pixel = false);

// Cross entropy with per-image class weights w1 = |y==0|/|Y| on the positive
// term and w0 = |y==1|/|Y| on the negative term.
LossResult balanced_celoss(const SaliencyMap& pred, const BinaryMap& gt,
                           double eps = kDefaultEps, bool mean_per_pixel = false);

enum class LossKind {
    kFLoss,
    kLogFLoss,
    kCrossEntropy,
    kBalancedCrossEntropy,
};

std::optional<LossKind> parse_loss_kind(const std::string& name);
const char* loss_kind_name(LossKind kind);

// Loss selection bundle used by the trainer, the finite-difference oracle
// and the surface grid.
struct LossSpec {
    LossKind kind = LossKind::kFLoss;
    Beta2 beta2{kDefaultBeta2};
    double eps = kDefaultEps;
    bool ce_mean_per_pixel = false;
};

LossResult eval_loss(const LossSpec& spec, const SaliencyMap& pred, const BinaryMap& gt);

// Central-difference gradient (L(y_i+h) - L(y_i-h)) / 2h per pixel.
// Caller keeps every y_i +- h inside [0,1].
GradientMap finite_difference_grad(const LossSpec& spec, const SaliencyMap& pred,
                                   const BinaryMap& gt, double h);

struct SurfacePoint {
    double y0;
    double y1;
    double loss;
};

// Loss over the uniform resolution^2 grid of 2-pixel predictions, rows in
// lexicographic (y0, y1) order. gt must have exactly 2 pixels. Log-FLoss
// values are capped at -log(eps) where F <= eps so the grid stays finite.
std::vector<SurfacePoint> loss_surface_grid(const LossSpec& spec, const BinaryMap& gt,
                                            int resolution);

} // namespace floss
