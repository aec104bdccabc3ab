#include "model.hpp"

#include <cmath>

#include "rng.hpp"

namespace floss {

double sigmoid(double z) {
    // Split on sign so the exp argument is never positive (no overflow).
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

void require_weight_count(const ModelParams& params) {
    if (params.weights.size() != FeatureStack::kChannels) {
        throw DimensionError("expected " + std::to_string(FeatureStack::kChannels) +
                             " weights, got " + std::to_string(params.weights.size()));
    }
}

// Prediction plus loss and the chain-ruled weight gradient in one pass.
struct StepEval {
    double loss;
    std::vector<double> grad_w;
};

StepEval step_eval(const ModelParams& params, const Sample& sample,
                   const LossSpec& spec) {
    const SaliencyMap pred = predict(params, sample.features);
    const LossResult lr = eval_loss(spec, pred, sample.mask);
    StepEval out{lr.loss, std::vector<double>(FeatureStack::kChannels, 0.0)};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double s = lr.grad[i] * pred[i] * (1.0 - pred[i]);
        for (int c = 0; c < FeatureStack::kChannels; ++c) {
            out.grad_w[static_cast<std::size_t>(c)] += s * sample.features.at(i, c);
        }
    }
    return out;
}

void validate(const TrainConfig& c, std::size_t n_train, std::size_t n_test) {
    if (n_train == 0 || n_test == 0) {
        throw ArgumentError("train and test sets must both be nonempty");
    }
    // lr = 0 is allowed (a no-op run); negative rates are rejected.
    if (!(c.lr >= 0.0) || !std::isfinite(c.lr)) {
        throw ConfigError("lr must be finite and >= 0, got " + std::to_string(c.lr));
    }
    if (c.epochs < 1) {
        throw ConfigError("epochs must be >= 1, got " + std::to_string(c.epochs));
    }
    if (c.checkpoint_every < 1) {
        throw ConfigError("checkpoint_every must be >= 1, got " +
                          std::to_string(c.checkpoint_every));
    }
    if (!(c.init_scale >= 0.0)) {
        throw ConfigError("init_scale must be >= 0, got " + std::to_string(c.init_scale));
    }
}

} // namespace

SaliencyMap predict(const ModelParams& params, const FeatureStack& features) {
    require_weight_count(params);
    std::vector<double> values(features.pixels());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double z = 0.0;
        for (int c = 0; c < FeatureStack::kChannels; ++c) {
            z += params.weights[static_cast<std::size_t>(c)] * features.at(i, c);
        }
        values[i] = sigmoid(z);
    }
    return SaliencyMap(features.width, features.height, std::move(values));
}

std::vector<double> param_gradient(const ModelParams& params, const Sample& sample,
                                   const LossSpec& loss_spec) {
    return step_eval(params, sample, loss_spec).grad_w;
}

TrainResult train(const std::vector<Sample>& train_set,
                  const std::vector<Sample>& test_set, const TrainConfig& config) {
    validate(config, train_set.size(), test_set.size());
    const LossSpec spec{config.loss, config.beta2, config.eps, config.ce_mean_per_pixel};

    Rng rng(config.seed);
    ModelParams params;
    params.weights.resize(FeatureStack::kChannels);
    for (auto& w : params.weights) {
        w = rng.uniform(-config.init_scale, config.init_scale);
    }

    const std::vector<double> thresholds = default_thresholds();
    ConvergenceLog log;
    EvalSummary last_summary;
    const auto checkpoint = [&](std::int64_t iteration) {
        double train_loss = 0.0;
        for (const auto& s : train_set) {
            train_loss += eval_loss(spec, predict(params, s.features), s.mask).loss;
        }
        train_loss /= static_cast<double>(train_set.size());

        std::vector<EvalPair> pairs;
        pairs.reserve(test_set.size());
        for (const auto& s : test_set) {
            pairs.push_back({s.id, predict(params, s.features), s.mask});
        }
        const DatasetEval ev = dataset_eval(pairs, thresholds, config.beta2);
        log.push_back({iteration, train_loss, ev.summary.max_f, ev.summary.mean_f,
                       ev.summary.mae});
        last_summary = ev.summary;
    };

    checkpoint(0);

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::int64_t iteration = 0;
    const std::int64_t total =
        static_cast<std::int64_t>(config.epochs) * static_cast<std::int64_t>(order.size());
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t j = 0; j < order.size(); ++j) {
            const Sample& sample = train_set[order[j]];
            const StepEval ev = step_eval(params, sample, spec);
            ++iteration;
            if (!std::isfinite(ev.loss)) {
                throw DivergenceError("training diverged at iteration " +
                                      std::to_string(iteration) + " (non-finite loss)");
            }
            for (int c = 0; c < FeatureStack::kChannels; ++c) {
                const auto ci = static_cast<std::size_t>(c);
                params.weights[ci] -= config.lr * ev.grad_w[ci];
                if (!std::isfinite(params.weights[ci])) {
                    throw DivergenceError("training diverged at iteration " +
                                          std::to_string(iteration) +
                                          " (non-finite weight)");
                }
            }
            if (iteration % config.checkpoint_every == 0 && iteration != total) {
                checkpoint(iteration);
            }
        }
    }
    checkpoint(total);

    return TrainResult{std::move(params), std::move(log), last_summary};
}

} // namespace floss
