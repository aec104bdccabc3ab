#include "metrics.hpp"

#include <algorithm>
#include <cmath>

namespace floss {

namespace {

PrfPoint prf_from_counts(double tp, double fp, double fn, Beta2 beta2, double eps) {
    PrfPoint p;
    p.precision = tp / (tp + fp + eps);
    p.recall = tp / (tp + fn + eps);
    // Same arithmetic route as relaxed_f so binary inputs agree bit for bit.
    p.f = fbeta_from_counts(tp, fp, fn, beta2, eps);
    return p;
}

std::vector<double> sorted_thresholds(std::vector<double> thresholds) {
    if (thresholds.empty()) {
        throw ArgumentError("threshold set is empty");
    }
    for (double t : thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw DomainError("threshold " + std::to_string(t) + " outside [0,1]");
        }
    }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    return thresholds;
}

} // namespace

std::optional<AggregationMode> parse_aggregation_mode(const std::string& name) {
    if (name == "average-pr") return AggregationMode::kAveragePr;
    if (name == "per-image-f") return AggregationMode::kPerImageF;
    return std::nullopt;
}

const char* aggregation_mode_name(AggregationMode mode) {
    switch (mode) {
        case AggregationMode::kAveragePr: return "average-pr";
        case AggregationMode::kPerImageF: return "per-image-f";
    }
    return "unknown";
}

DiscreteCounts discrete_counts(const BinaryMap& binpred, const BinaryMap& gt) {
    require_same_shape(binpred, gt, "discrete_counts");
    DiscreteCounts c;
    for (std::size_t i = 0; i < binpred.size(); ++i) {
        if (gt[i]) {
            if (binpred[i]) ++c.tp; else ++c.fn;
        } else if (binpred[i]) {
            ++c.fp;
        }
    }
    return c;
}

PrfPoint f_at_threshold(const SaliencyMap& pred, const BinaryMap& gt, double t,
                        Beta2 beta2, double eps) {
    const DiscreteCounts c = discrete_counts(binarize(pred, t), gt);
    return prf_from_counts(static_cast<double>(c.tp), static_cast<double>(c.fp),
                           static_cast<double>(c.fn), beta2, eps);
}

std::vector<double> default_thresholds() {
    std::vector<double> t(256);
    for (int i = 0; i < 256; ++i) {
        t[static_cast<std::size_t>(i)] = static_cast<double>(i) / 255.0;
    }
    return t;
}

SweepCurve sweep(const SaliencyMap& pred, const BinaryMap& gt,
                 const std::vector<double>& thresholds, Beta2 beta2, double eps) {
    require_same_shape(pred, gt, "sweep");
    const std::vector<double> ts = sorted_thresholds(thresholds);
    const std::size_t k = ts.size();

    // Pixel i is predicted positive at ts[j] exactly when j < lower_bound(ts, pred[i]),
    // i.e. for the thresholds strictly below pred[i]. Bucketing pixels by that bound and
    // suffix-summing reproduces the per-threshold strict comparison without a K*N scan.
    std::vector<std::int64_t> pos_at(k + 1, 0);
    std::vector<std::int64_t> neg_at(k + 1, 0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(ts.begin(), ts.end(), pred[i]) - ts.begin());
        if (gt[i]) ++pos_at[idx]; else ++neg_at[idx];
    }
    const auto n_pos = static_cast<std::int64_t>(gt.positive_count());

    SweepCurve curve;
    curve.beta2 = beta2;
    curve.thresholds = ts;
    curve.precision.resize(k);
    curve.recall.resize(k);
    curve.f.resize(k);
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    for (std::size_t j = k; j-- > 0;) {
        tp += pos_at[j + 1];
        fp += neg_at[j + 1];
        const PrfPoint p =
            prf_from_counts(static_cast<double>(tp), static_cast<double>(fp),
                            static_cast<double>(n_pos - tp), beta2, eps);
        curve.precision[j] = p.precision;
        curve.recall[j] = p.recall;
        curve.f[j] = p.f;
    }
    return curve;
}

std::pair<double, double> optimal_threshold(const SweepCurve& curve) {
    if (curve.size() == 0) {
        throw ArgumentError("optimal_threshold on an empty curve");
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < curve.size(); ++j) {
        if (curve.f[j] > curve.f[best]) best = j; // strict: ties keep the smallest t
    }
    return {curve.thresholds[best], curve.f[best]};
}

double mean_f(const SweepCurve& curve) {
    if (curve.size() == 0) {
        throw ArgumentError("mean_f on an empty curve");
    }
    double sum = 0.0;
    for (double v : curve.f) sum += v;
    return sum / static_cast<double>(curve.size());
}

double mae(const SaliencyMap& pred, const BinaryMap& gt) {
    require_same_shape(pred, gt, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        sum += std::abs(pred[i] - static_cast<double>(gt[i]));
    }
    return sum / static_cast<double>(pred.size());
}

EvalSummary summarize(const SweepCurve& curve, double mae_value) {
    const auto [t_o, max_f] = optimal_threshold(curve);
    return {max_f, mean_f(curve), mae_value, t_o};
}

DatasetEval dataset_eval(const std::vector<EvalPair>& pairs,
                         const std::vector<double>& thresholds, Beta2 beta2,
                         AggregationMode mode, double eps) {
    if (pairs.empty()) {
        throw ArgumentError("dataset_eval needs at least one (pred, gt) pair");
    }
    for (const auto& pair : pairs) {
        if (!shape_compatible(pair.pred, pair.gt)) {
            throw DimensionError(
                "pair \"" + pair.id + "\": pred is " + std::to_string(pair.pred.width()) +
                "x" + std::to_string(pair.pred.height()) + ", gt is " +
                std::to_string(pair.gt.width()) + "x" + std::to_string(pair.gt.height()));
        }
    }
    const std::vector<double> ts = sorted_thresholds(thresholds);
    const std::size_t k = ts.size();

    std::vector<double> sum_p(k, 0.0);
    std::vector<double> sum_r(k, 0.0);
    std::vector<double> sum_f(k, 0.0);
    double sum_mae = 0.0;

    DatasetEval out;
    out.mode = mode;
    out.images.reserve(pairs.size());
    // Images reduce in input order so aggregates are reproducible.
    for (const auto& pair : pairs) {
        const SweepCurve c = sweep(pair.pred, pair.gt, ts, beta2, eps);
        const double m = mae(pair.pred, pair.gt);
        for (std::size_t j = 0; j < k; ++j) {
            sum_p[j] += c.precision[j];
            sum_r[j] += c.recall[j];
            sum_f[j] += c.f[j];
        }
        sum_mae += m;
        out.images.push_back({pair.id, summarize(c, m)});
    }

    const double inv = 1.0 / static_cast<double>(pairs.size());
    SweepCurve agg;
    agg.beta2 = beta2;
    agg.thresholds = ts;
    agg.precision.resize(k);
    agg.recall.resize(k);
    agg.f.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        agg.precision[j] = sum_p[j] * inv;
        agg.recall[j] = sum_r[j] * inv;
        agg.f[j] = mode == AggregationMode::kAveragePr
                       ? fbeta_from_pr(agg.precision[j], agg.recall[j], beta2, eps)
                       : sum_f[j] * inv;
    }
    out.curve = std::move(agg);
    out.summary = summarize(out.curve, sum_mae * inv);
    return out;
}

ThresholdStats threshold_stats(const std::vector<EvalSummary>& summaries) {
    if (summaries.empty()) {
        throw ArgumentError("threshold_stats needs at least one summary");
    }
    double mean = 0.0;
    for (const auto& s : summaries) mean += s.t_o;
    mean /= static_cast<double>(summaries.size());
    double var = 0.0;
    for (const auto& s : summaries) {
        const double d = s.t_o - mean;
        var += d * d;
    }
    var /= static_cast<double>(summaries.size());
    return {mean, var};
}

} // namespace floss
