#include "losses.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace floss {

namespace {

RelaxedCounts counts_unchecked(const SaliencyMap& pred, const BinaryMap& gt) {
    RelaxedCounts c;
    // Fixed row-major summation order keeps results bit-reproducible.
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double y_hat = pred[i];
        if (gt[i]) {
            c.tp += y_hat;
            c.fn += 1.0 - y_hat;
            c.n_pos += 1.0;
        } else {
            c.fp += y_hat;
            c.n_neg += 1.0;
        }
    }
    return c;
}

struct FlossEval {
    double f;
    double grad_pos;
    double grad_neg;
};

// Mirrors fbeta_from_counts term for term so both routes round identically.
FlossEval floss_eval(const RelaxedCounts& c, Beta2 beta2, double eps) {
    const double b2 = beta2.value;
    const double h = b2 * (c.tp + c.fn) + (c.tp + c.fp) + eps;
    const double f = (1.0 + b2) * c.tp / h;
    const double grad_neg = (1.0 + b2) * c.tp / (h * h);
    const double grad_pos = grad_neg - (1.0 + b2) / h;
    return {f, grad_pos, grad_neg};
}

} // namespace

RelaxedCounts relaxed_counts(const SaliencyMap& pred, const BinaryMap& gt) {
    require_same_shape(pred, gt, "relaxed_counts");
    return counts_unchecked(pred, gt);
}

double fbeta_from_counts(double tp, double fp, double fn, Beta2 beta2, double eps) {
    const double h = beta2.value * (tp + fn) + (tp + fp);
    return (1.0 + beta2.value) * tp / (h + eps);
}

double fbeta_from_pr(double precision, double recall, Beta2 beta2, double eps) {
    return (1.0 + beta2.value) * precision * recall /
           (beta2.value * precision + recall + eps);
}

double relaxed_f(const SaliencyMap& pred, const BinaryMap& gt, Beta2 beta2, double eps) {
    const RelaxedCounts c = relaxed_counts(pred, gt);
    return fbeta_from_counts(c.tp, c.fp, c.fn, beta2, eps);
}

LossResult floss(const SaliencyMap& pred, const BinaryMap& gt, Beta2 beta2, double eps) {
    require_same_shape(pred, gt, "floss");
    const FlossEval e = floss_eval(counts_unchecked(pred, gt), beta2, eps);
    std::vector<double> grad(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) grad[i] = gt[i] ? e.grad_pos : e.grad_neg;
    return {1.0 - e.f, GradientMap(pred.width(), pred.height(), std::move(grad))};
}

LossResult log_floss(const SaliencyMap& pred, const BinaryMap& gt, Beta2 beta2, double eps) {
    require_same_shape(pred, gt, "log_floss");
    const FlossEval e = floss_eval(counts_unchecked(pred, gt), beta2, eps);
    if (e.f <= eps) {
        throw SaturationError("relaxed F = " + std::to_string(e.f) +
                              " <= eps; -log(F) is not finite");
    }
    std::vector<double> grad(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        grad[i] = (gt[i] ? e.grad_pos : e.grad_neg) / e.f;
    }
    return {-std::log(e.f), GradientMap(pred.width(), pred.height(), std::move(grad))};
}

LossResult celoss(const SaliencyMap& pred, const BinaryMap& gt, double eps,
                  bool mean_per_pixel) {
    require_same_shape(pred, gt, "celoss");
    double loss = 0.0;
    std::vector<double> grad(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double y_hat = pred[i];
        if (gt[i]) {
            loss -= std::log(y_hat + eps);
            grad[i] = -1.0 / (y_hat + eps);
        } else {
            loss -= std::log(1.0 - y_hat + eps);
            grad[i] = 1.0 / (1.0 - y_hat + eps);
        }
    }
    // At an exact corner the eps terms leave a ~N*eps negative residue;
    // the loss is defined as nonnegative.
    loss = std::max(loss, 0.0);
    if (mean_per_pixel) {
        const double inv = 1.0 / static_cast<double>(pred.size());
        loss *= inv;
        for (auto& g : grad) g *= inv;
    }
    return {loss, GradientMap(pred.width(), pred.height(), std::move(grad))};
}

LossResult balanced_celoss(const SaliencyMap& pred, const BinaryMap& gt, double eps,
                           bool mean_per_pixel) {
    require_same_shape(pred, gt, "balanced_celoss");
    const double n = static_cast<double>(gt.size());
    const double n_pos = static_cast<double>(gt.positive_count());
    const double w1 = (n - n_pos) / n; // weight on the positive term
    const double w0 = n_pos / n;       // weight on the negative term

    double loss = 0.0;
    std::vector<double> grad(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double y_hat = pred[i];
        if (gt[i]) {
            loss -= w1 * std::log(y_hat + eps);
            grad[i] = -w1 / (y_hat + eps);
        } else {
            loss -= w0 * std::log(1.0 - y_hat + eps);
            grad[i] = w0 / (1.0 - y_hat + eps);
        }
    }
    loss = std::max(loss, 0.0);
    if (mean_per_pixel) {
        const double inv = 1.0 / static_cast<double>(pred.size());
        loss *= inv;
        for (auto& g : grad) g *= inv;
    }
    return {loss, GradientMap(pred.width(), pred.height(), std::move(grad))};
}

std::optional<LossKind> parse_loss_kind(const std::string& name) {
    if (name == "floss") return LossKind::kFLoss;
    if (name == "logfloss") return LossKind::kLogFLoss;
    if (name == "ce") return LossKind::kCrossEntropy;
    if (name == "balanced-ce") return LossKind::kBalancedCrossEntropy;
    return std::nullopt;
}

const char* loss_kind_name(LossKind kind) {
    switch (kind) {
        case LossKind::kFLoss: return "floss";
        case LossKind::kLogFLoss: return "logfloss";
        case LossKind::kCrossEntropy: return "ce";
        case LossKind::kBalancedCrossEntropy: return "balanced-ce";
    }
    return "unknown";
}

LossResult eval_loss(const LossSpec& spec, const SaliencyMap& pred, const BinaryMap& gt) {
    switch (spec.kind) {
        case LossKind::kFLoss: return floss(pred, gt, spec.beta2, spec.eps);
        case LossKind::kLogFLoss: return log_floss(pred, gt, spec.beta2, spec.eps);
        case LossKind::kCrossEntropy:
            return celoss(pred, gt, spec.eps, spec.ce_mean_per_pixel);
        case LossKind::kBalancedCrossEntropy:
            return balanced_celoss(pred, gt, spec.eps, spec.ce_mean_per_pixel);
    }
    throw ArgumentError("unknown loss kind");
}

GradientMap finite_difference_grad(const LossSpec& spec, const SaliencyMap& pred,
                                   const BinaryMap& gt, double h) {
    require_same_shape(pred, gt, "finite_difference_grad");
    std::vector<double> values = pred.values();
    std::vector<double> grad(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double original = values[i];
        values[i] = original + h;
        const double up = eval_loss(spec, SaliencyMap(pred.width(), pred.height(), values), gt).loss;
        values[i] = original - h;
        const double down = eval_loss(spec, SaliencyMap(pred.width(), pred.height(), values), gt).loss;
        values[i] = original;
        grad[i] = (up - down) / (2.0 * h);
    }
    return GradientMap(pred.width(), pred.height(), std::move(grad));
}

std::vector<SurfacePoint> loss_surface_grid(const LossSpec& spec, const BinaryMap& gt,
                                            int resolution) {
    if (gt.size() != 2) {
        throw DimensionError("loss surface needs a 2-pixel ground truth, got " +
                             std::to_string(gt.size()) + " pixels");
    }
    if (resolution < 2) {
        throw ArgumentError("surface resolution must be >= 2, got " +
                            std::to_string(resolution));
    }
    const double step = 1.0 / static_cast<double>(resolution - 1);
    std::vector<SurfacePoint> grid;
    grid.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const double y0 = std::min(1.0, i * step);
            const double y1 = std::min(1.0, j * step);
            const SaliencyMap pred(gt.width(), gt.height(), {y0, y1});
            double value;
            if (spec.kind == LossKind::kLogFLoss) {
                // Saturated corners would be -log(0); cap at -log(eps).
                const double f = relaxed_f(pred, gt, spec.beta2, spec.eps);
                value = -std::log(std::max(f, spec.eps));
            } else {
                value = eval_loss(spec, pred, gt).loss;
            }
            grid.push_back({y0, y1, value});
        }
    }
    return grid;
}

} // namespace floss
