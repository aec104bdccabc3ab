#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "core/metrics.hpp"

using namespace floss;

namespace {

// Quadratic reference: count at each threshold from scratch. The fast sweep
// must reproduce this exactly, not approximately.
PrfPoint naive_at(const SaliencyMap& pred, const BinaryMap& gt, double t, double b2,
                  double eps) {
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool on = pred[i] > t;
        if (on && gt[i]) ++tp;
        if (on && !gt[i]) ++fp;
        if (!on && gt[i]) ++fn;
    }
    PrfPoint out;
    out.precision = static_cast<double>(tp) / (static_cast<double>(tp + fp) + eps);
    out.recall = static_cast<double>(tp) / (static_cast<double>(tp + fn) + eps);
    const double h = b2 * static_cast<double>(tp + fn) + static_cast<double>(tp + fp);
    out.f = (1.0 + b2) * static_cast<double>(tp) / (h + eps);
    return out;
}

const SaliencyMap kPred(2, 2, {0.9, 0.2, 0.6, 0.1});
const BinaryMap kGt(2, 2, {1, 0, 1, 0});

} // namespace

TEST_CASE("f_at_threshold matches the worked fixture") {
    const PrfPoint at_half = f_at_threshold(kPred, kGt, 0.5, Beta2(0.3));
    CHECK(at_half.precision == doctest::Approx(0.99999999500000003).epsilon(1e-15));
    CHECK(at_half.recall == doctest::Approx(0.99999999500000003).epsilon(1e-15));
    CHECK(at_half.f == doctest::Approx(0.99999999615384616).epsilon(1e-15));

    const PrfPoint at_07 = f_at_threshold(kPred, kGt, 0.7, Beta2(0.3));
    CHECK(at_07.recall == doctest::Approx(0.49999999750000002).epsilon(1e-15));
    CHECK(at_07.f == doctest::Approx(0.81249999492187508).epsilon(1e-15));
}

TEST_CASE("mae matches the worked fixture") {
    CHECK(mae(kPred, kGt) == doctest::Approx(0.19999999999999998).epsilon(1e-15));
    CHECK_THROWS_AS(mae(kPred, BinaryMap(4, 1, {1, 0, 1, 0})), DimensionError);
}

TEST_CASE("binary inputs make the relaxed and discrete F identical") {
    // criterion at the unit level: same counts, same combination, same bits
    std::mt19937_64 rng(5u);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::bernoulli_distribution label(0.5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> pv(30);
        std::vector<std::uint8_t> gv(30);
        for (std::size_t i = 0; i < pv.size(); ++i) {
            pv[i] = val(rng);
            gv[i] = label(rng) ? 1 : 0;
        }
        const SaliencyMap pred(6, 5, pv);
        const BinaryMap gt(6, 5, gv);
        const double t = val(rng);
        const BinaryMap hard = binarize(pred, t);
        const double relaxed = relaxed_f(hard.as_saliency(), gt, Beta2(0.3));
        const double discrete = f_at_threshold(pred, gt, t, Beta2(0.3)).f;
        CHECK(relaxed == discrete);
    }
}

TEST_CASE("default thresholds are the 256 8-bit levels") {
    const std::vector<double> ts = default_thresholds();
    REQUIRE(ts.size() == 256);
    CHECK(ts.front() == 0.0);
    CHECK(ts.back() == 1.0);
    CHECK(ts[128] == 128.0 / 255.0);
}

TEST_CASE("sweep equals the per-threshold reference") {
    std::mt19937_64 rng(9u);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::bernoulli_distribution label(0.5);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> pv(48);
        std::vector<std::uint8_t> gv(48);
        for (std::size_t i = 0; i < pv.size(); ++i) {
            pv[i] = val(rng);
            gv[i] = label(rng) ? 1 : 0;
        }
        const SaliencyMap pred(8, 6, pv);
        const BinaryMap gt(8, 6, gv);
        const SweepCurve curve = sweep(pred, gt, default_thresholds(), Beta2(0.3));
        REQUIRE(curve.size() == 256);
        for (std::size_t j = 0; j < curve.size(); j += 17) {
            const PrfPoint ref =
                naive_at(pred, gt, curve.thresholds[j], 0.3, kDefaultEps);
            CHECK(curve.precision[j] == ref.precision);
            CHECK(curve.recall[j] == ref.recall);
            CHECK(curve.f[j] == ref.f);
        }
    }
}

TEST_CASE("sweep sorts and dedupes thresholds") {
    const SweepCurve curve = sweep(kPred, kGt, {0.7, 0.5, 0.7, 0.5}, Beta2(0.3));
    REQUIRE(curve.size() == 2);
    CHECK(curve.thresholds[0] == 0.5);
    CHECK(curve.thresholds[1] == 0.7);
    CHECK(mean_f(curve) == doctest::Approx(0.90624999553786068).epsilon(1e-15));

    CHECK_THROWS_AS(sweep(kPred, kGt, {}, Beta2(0.3)), ArgumentError);
    CHECK_THROWS_AS(sweep(kPred, kGt, {0.5, 1.5}, Beta2(0.3)), DomainError);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sweep(kPred, kGt, {0.5, nan}, Beta2(0.3)), DomainError);
}

TEST_CASE("per-image curve obeys the precision/recall combination closely") {
    // f is computed from counts, fbeta_from_pr recombines the stored p and r;
    // both carry their own additive eps so they agree to ~1e-6, not exactly.
    const SweepCurve curve = sweep(kPred, kGt, default_thresholds(), Beta2(0.3));
    for (std::size_t j = 0; j < curve.size(); ++j) {
        const double recombined =
            fbeta_from_pr(curve.precision[j], curve.recall[j], Beta2(0.3), kDefaultEps);
        CHECK(std::abs(curve.f[j] - recombined) < 1e-6);
    }
}

TEST_CASE("optimal_threshold keeps the smallest maximizer") {
    SweepCurve curve;
    curve.thresholds = {0.1, 0.2, 0.3, 0.4};
    curve.precision = {0.5, 0.5, 0.5, 0.5};
    curve.recall = {0.5, 0.5, 0.5, 0.5};
    curve.f = {0.3, 0.8, 0.8, 0.2};
    const auto [t_o, max_f] = optimal_threshold(curve);
    CHECK(t_o == 0.2);
    CHECK(max_f == 0.8);

    SweepCurve empty;
    CHECK_THROWS_AS(optimal_threshold(empty), ArgumentError);
}

TEST_CASE("aggregation modes differ on the two-pair fixture") {
    std::vector<EvalPair> pairs;
    pairs.push_back({"a", SaliencyMap(2, 1, {0.9, 0.1}), BinaryMap(2, 1, {1, 0})});
    pairs.push_back({"b", SaliencyMap(2, 1, {0.6, 0.7}), BinaryMap(2, 1, {1, 0})});
    const std::vector<double> ts = {0.5};

    const DatasetEval avg =
        dataset_eval(pairs, ts, Beta2(0.3), AggregationMode::kAveragePr);
    const DatasetEval per =
        dataset_eval(pairs, ts, Beta2(0.3), AggregationMode::kPerImageF);
    CHECK(avg.summary.max_f == doctest::Approx(0.79591835397334476).epsilon(1e-15));
    CHECK(per.summary.max_f == doctest::Approx(0.78260869057728666).epsilon(1e-15));
    CHECK(avg.summary.max_f > per.summary.max_f);

    REQUIRE(avg.images.size() == 2);
    CHECK(avg.images[0].id == "a");
    // per-image records do not depend on the dataset mode
    CHECK(avg.images[1].summary.max_f == per.images[1].summary.max_f);
}

TEST_CASE("dataset_eval of a single pair reduces to the per-image sweep") {
    std::vector<EvalPair> pairs;
    pairs.push_back({"solo", kPred, kGt});
    const DatasetEval per = dataset_eval(pairs, default_thresholds(), Beta2(0.3),
                                         AggregationMode::kPerImageF);
    const SweepCurve direct = sweep(kPred, kGt, default_thresholds(), Beta2(0.3));
    for (std::size_t j = 0; j < direct.size(); j += 31) {
        CHECK(per.curve.f[j] == direct.f[j]); // mean over one image is that image
    }
    const DatasetEval avg = dataset_eval(pairs, default_thresholds(), Beta2(0.3),
                                         AggregationMode::kAveragePr);
    for (std::size_t j = 0; j < direct.size(); j += 31) {
        CHECK(std::abs(avg.curve.f[j] - direct.f[j]) < 1e-6);
    }
    CHECK(per.summary.mae == mae(kPred, kGt));
}

TEST_CASE("dataset_eval validates input") {
    CHECK_THROWS_AS(dataset_eval({}, default_thresholds(), Beta2(0.3)), ArgumentError);

    std::vector<EvalPair> bad;
    bad.push_back({"shape", SaliencyMap(2, 1, {0.5, 0.5}), BinaryMap(1, 2, {1, 0})});
    CHECK_THROWS_WITH_AS(
        dataset_eval(bad, default_thresholds(), Beta2(0.3)),
        doctest::Contains("shape"), DimensionError);
}

TEST_CASE("threshold_stats reports mean and population variance") {
    std::vector<EvalSummary> summaries(2);
    summaries[0].t_o = 0.4;
    summaries[1].t_o = 0.6;
    const ThresholdStats stats = threshold_stats(summaries);
    CHECK(stats.mean == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(stats.variance == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(threshold_stats({}), ArgumentError);
}

TEST_CASE("aggregation mode registry round-trips") {
    CHECK(parse_aggregation_mode("average-pr") == AggregationMode::kAveragePr);
    CHECK(parse_aggregation_mode("per-image-f") == AggregationMode::kPerImageF);
    CHECK_FALSE(parse_aggregation_mode("mean").has_value());
    CHECK(parse_aggregation_mode(aggregation_mode_name(AggregationMode::kPerImageF)) ==
          AggregationMode::kPerImageF);
}

TEST_CASE("discrete_counts tallies the confusion entries") {
    const BinaryMap pred(2, 2, {1, 0, 1, 0});
    const BinaryMap gt(2, 2, {1, 1, 0, 0});
    const DiscreteCounts c = discrete_counts(pred, gt);
    CHECK(c.tp == 1);
    CHECK(c.fp == 1);
    CHECK(c.fn == 1);
}
