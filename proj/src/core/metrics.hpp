#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "losses.hpp"
#include "map.hpp"

namespace floss {

struct DiscreteCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
};

struct PrfPoint {
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

// Per-threshold precision/recall/F over an ascending, duplicate-free threshold set.
struct SweepCurve {
    std::vector<double> thresholds;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f;
    Beta2 beta2;

    std::size_t size() const { return thresholds.size(); }
};

struct EvalSummary {
    double max_f = 0.0;
    double mean_f = 0.0;
    double mae = 0.0;
    double t_o = 0.0;
};

struct EvalPair {
    std::string id;
    SaliencyMap pred;
    BinaryMap gt;
};

struct ImageRecord {
    std::string id;
    EvalSummary summary;
};

// average-pr: mean per-image precision/recall per threshold, then combine.
// per-image-f: mean per-image F per threshold.
enum class AggregationMode { kAveragePr, kPerImageF };

std::optional<AggregationMode> parse_aggregation_mode(const std::string& name);
const char* aggregation_mode_name(AggregationMode mode);

struct DatasetEval {
    EvalSummary summary;
    SweepCurve curve; // dataset-level curve; f semantics depend on mode
    std::vector<ImageRecord> images;
    AggregationMode mode = AggregationMode::kAveragePr;
};

struct ThresholdStats {
    double mean = 0.0;
    double variance = 0.0; // population variance
};

DiscreteCounts discrete_counts(const BinaryMap& binpred, const BinaryMap& gt);

// Binarizes with strict >, then p = tp/(tp+fp+eps), r = tp/(tp+fn+eps).
// f reuses the relaxed-F arithmetic so binary inputs agree with relaxed_f exactly.
PrfPoint f_at_threshold(const SaliencyMap& pred, const BinaryMap& gt, double t,
                        Beta2 beta2 = Beta2(), double eps = kDefaultEps);

// 256-level set {i/255 : i = 0..255}.
std::vector<double> default_thresholds();

SweepCurve sweep(const SaliencyMap& pred, const BinaryMap& gt,
                 const std::vector<double>& thresholds, Beta2 beta2 = Beta2(),
                 double eps = kDefaultEps);

// (t_o, max_f); ties resolve to the smallest maximizing threshold.
std::pair<double, double> optimal_threshold(const SweepCurve& curve);

double mean_f(const SweepCurve& curve);

double mae(const SaliencyMap& pred, const BinaryMap& gt);

EvalSummary summarize(const SweepCurve& curve, double mae_value);

DatasetEval dataset_eval(const std::vector<EvalPair>& pairs,
                         const std::vector<double>& thresholds, Beta2 beta2 = Beta2(),
                         AggregationMode mode = AggregationMode::kAveragePr,
                         double eps = kDefaultEps);

ThresholdStats threshold_stats(const std::vector<EvalSummary>& summaries);

} // namespace floss
