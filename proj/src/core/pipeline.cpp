#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "csv.hpp"
#include "dataset.hpp"
#include "pgm.hpp"
#include "rng.hpp"
#include "svg.hpp"

namespace floss {

namespace {

constexpr double kDefaultLrBase = 0.5;

const Schema& sweep_schema() {
    static const Schema schema = {{"threshold", ColumnType::kReal},
                                  {"precision", ColumnType::kReal},
                                  {"recall", ColumnType::kReal},
                                  {"f", ColumnType::kReal}};
    return schema;
}

const Schema& log_schema() {
    static const Schema schema = {{"iteration", ColumnType::kInt},
                                  {"train_loss", ColumnType::kReal},
                                  {"max_f", ColumnType::kReal},
                                  {"mean_f", ColumnType::kReal},
                                  {"mae", ColumnType::kReal}};
    return schema;
}

const Schema& per_image_schema() {
    static const Schema schema = {{"image_id", ColumnType::kText},
                                  {"max_f", ColumnType::kReal},
                                  {"mean_f", ColumnType::kReal},
                                  {"mae", ColumnType::kReal},
                                  {"t_o", ColumnType::kReal}};
    return schema;
}

LossKind parse_loss_or_throw(const std::string& name) {
    const auto kind = parse_loss_kind(name);
    if (!kind) {
        throw ArgumentError("unknown loss '" + name +
                            "' (expected floss, logfloss, ce, or balanced-ce)");
    }
    return *kind;
}

std::vector<CsvRow> curve_rows(const SweepCurve& curve) {
    std::vector<CsvRow> rows;
    rows.reserve(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) {
        rows.push_back({curve.thresholds[j], curve.precision[j], curve.recall[j],
                        curve.f[j]});
    }
    return rows;
}

std::vector<CsvRow> per_image_rows(const std::vector<ImageRecord>& images) {
    std::vector<CsvRow> rows;
    rows.reserve(images.size());
    for (const auto& rec : images) {
        rows.push_back({rec.id, rec.summary.max_f, rec.summary.mean_f, rec.summary.mae,
                        rec.summary.t_o});
    }
    return rows;
}

std::vector<EvalSummary> image_summaries(const std::vector<ImageRecord>& images) {
    std::vector<EvalSummary> out;
    out.reserve(images.size());
    for (const auto& rec : images) out.push_back(rec.summary);
    return out;
}

// Dataset precision/recall/F at one threshold under the average-pr convention.
PrfPoint dataset_prf_at(const std::vector<EvalPair>& pairs, double t, Beta2 beta2) {
    double p = 0.0, r = 0.0;
    for (const auto& pair : pairs) {
        const PrfPoint point = f_at_threshold(pair.pred, pair.gt, t, beta2);
        p += point.precision;
        r += point.recall;
    }
    p /= static_cast<double>(pairs.size());
    r /= static_cast<double>(pairs.size());
    return {p, r, fbeta_from_pr(p, r, beta2, kDefaultEps)};
}

} // namespace

double default_lr(LossKind kind) {
    switch (kind) {
        case LossKind::kLogFLoss:
            return 0.7 * kDefaultLrBase;
        case LossKind::kFLoss:
        case LossKind::kCrossEntropy:
        case LossKind::kBalancedCrossEntropy:
            return kDefaultLrBase;
    }
    throw ArgumentError("unknown loss kind");
}

bool LosscheckReport::pass() const {
    return std::all_of(rows.begin(), rows.end(),
                       [&](const LosscheckRow& r) { return r.max_rel_err < tolerance; });
}

LosscheckReport cmd_losscheck(const std::string& loss_name, double beta2, int size,
                              int trials, std::uint64_t seed) {
    if (size < 1) {
        throw ArgumentError("size must be >= 1, got " + std::to_string(size));
    }
    if (trials < 1) {
        throw ArgumentError("trials must be >= 1, got " + std::to_string(trials));
    }
    std::vector<LossKind> kinds;
    if (loss_name == "all") {
        kinds = {LossKind::kFLoss, LossKind::kLogFLoss, LossKind::kCrossEntropy,
                 LossKind::kBalancedCrossEntropy};
    } else {
        kinds = {parse_loss_or_throw(loss_name)};
    }

    LosscheckReport report;
    report.trials = trials;
    report.size = size;
    const auto n = static_cast<std::size_t>(size) * static_cast<std::size_t>(size);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        const LossSpec spec{kinds[k], Beta2(beta2), kDefaultEps, false};
        Rng rng(seed, k);
        double worst = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<double> pred_values(n);
            for (auto& v : pred_values) v = rng.uniform(0.05, 0.95);
            std::vector<std::uint8_t> gt_values(n);
            std::size_t n_pos = 0;
            do {
                n_pos = 0;
                for (auto& v : gt_values) {
                    v = rng.bernoulli(0.5) ? 1 : 0;
                    n_pos += v;
                }
            } while (n_pos == 0); // keep log_floss away from F = 0
            const SaliencyMap pred(size, size, std::move(pred_values));
            const BinaryMap gt(size, size, std::move(gt_values));

            const GradientMap analytic = eval_loss(spec, pred, gt).grad;
            const GradientMap fd = finite_difference_grad(spec, pred, gt, 1e-5);
            for (std::size_t i = 0; i < n; ++i) {
                const double rel =
                    std::abs(analytic[i] - fd[i]) / std::max(std::abs(fd[i]), 1e-9);
                worst = std::max(worst, rel);
            }
        }
        report.rows.push_back({kinds[k], worst});
    }
    return report;
}

void cmd_surface(const SurfaceOptions& options) {
    const LossKind kind = parse_loss_or_throw(options.loss);
    std::vector<std::uint8_t> gt_values;
    if (options.gt_code == "01") {
        gt_values = {0, 1};
    } else if (options.gt_code == "11") {
        gt_values = {1, 1};
    } else {
        throw ArgumentError("gt code must be 01 or 11, got '" + options.gt_code + "'");
    }
    const BinaryMap gt(2, 1, std::move(gt_values));
    const LossSpec spec{kind, Beta2(options.beta2), kDefaultEps, false};
    const std::vector<SurfacePoint> grid = loss_surface_grid(spec, gt, options.resolution);

    ensure_dir(options.out_dir);
    static const Schema schema = {{"y0", ColumnType::kReal},
                                  {"y1", ColumnType::kReal},
                                  {"loss", ColumnType::kReal}};
    std::vector<CsvRow> rows;
    rows.reserve(grid.size());
    for (const auto& p : grid) rows.push_back({p.y0, p.y1, p.loss});
    write_csv(schema, rows, options.out_dir / "surface.csv");
    heatmap_svg(grid, options.resolution,
                "loss surface: " + options.loss + ", gt=" + options.gt_code,
                options.out_dir / "surface.svg");
    write_kv_config(options.out_dir / "config.txt",
                    {{"command", "surface"},
                     {"loss", options.loss},
                     {"gt", options.gt_code},
                     {"beta2", format_real(options.beta2)},
                     {"resolution", std::to_string(options.resolution)}});
}

int cmd_synth(const SynthConfig& config, const std::filesystem::path& out_dir) {
    const std::vector<Sample> samples = generate(config);
    write_dataset(samples, config, out_dir);
    return static_cast<int>(samples.size());
}

TrainOutcome cmd_train(const TrainOptions& options) {
    const LossKind kind = parse_loss_or_throw(options.loss);
    if (options.lr < 0.0) {
        throw ConfigError("lr must be >= 0 (0 selects the per-loss default), got " +
                          std::to_string(options.lr));
    }
    const std::vector<Sample> samples = load_dataset(options.data_dir);
    auto [train_set, test_set] = split(samples, options.train_fraction, options.seed);

    TrainConfig config;
    config.loss = kind;
    config.beta2 = Beta2(options.beta2);
    config.lr = options.lr > 0.0 ? options.lr : default_lr(kind);
    config.epochs = options.epochs;
    config.seed = options.seed;
    config.init_scale = options.init_scale;
    config.checkpoint_every = options.checkpoint_every;

    const TrainResult result = train(train_set, test_set, config);

    ensure_dir(options.out_dir / "preds");
    ensure_dir(options.out_dir / "reports");
    write_kv_config(options.out_dir / "config.txt",
                    {{"command", "train"},
                     {"loss", options.loss},
                     {"beta2", format_real(options.beta2)},
                     {"lr", format_real(config.lr)},
                     {"epochs", std::to_string(config.epochs)},
                     {"seed", std::to_string(config.seed)},
                     {"init_scale", format_real(config.init_scale)},
                     {"checkpoint_every", std::to_string(config.checkpoint_every)},
                     {"eps", format_real(config.eps)},
                     {"ce_mean_per_pixel", config.ce_mean_per_pixel ? "1" : "0"},
                     {"data_dir", options.data_dir.string()},
                     {"train_fraction", format_real(options.train_fraction)},
                     {"n_train", std::to_string(train_set.size())},
                     {"n_test", std::to_string(test_set.size())}});

    std::vector<CsvRow> log_rows;
    log_rows.reserve(result.log.size());
    for (const auto& rec : result.log) {
        log_rows.push_back({rec.iteration, rec.train_loss, rec.max_f, rec.mean_f,
                            rec.mae});
    }
    write_csv(log_schema(), log_rows, options.out_dir / "log.csv");

    static const Schema params_schema = {{"channel", ColumnType::kInt},
                                         {"weight", ColumnType::kReal}};
    std::vector<CsvRow> param_rows;
    for (std::size_t c = 0; c < result.params.weights.size(); ++c) {
        param_rows.push_back({static_cast<std::int64_t>(c), result.params.weights[c]});
    }
    write_csv(params_schema, param_rows, options.out_dir / "params.csv");

    for (const auto& sample : test_set) {
        write_pgm(predict(result.params, sample.features),
                  options.out_dir / "preds" / (sample.id + ".pgm"));
    }

    Series max_f{"test max_f", {}, {}};
    Series mean_f_series{"test mean_f", {}, {}};
    Series mae_series{"test mae", {}, {}};
    Series loss_series{"train loss", {}, {}};
    for (const auto& rec : result.log) {
        const auto it = static_cast<double>(rec.iteration);
        max_f.x.push_back(it);
        max_f.y.push_back(rec.max_f);
        mean_f_series.x.push_back(it);
        mean_f_series.y.push_back(rec.mean_f);
        mae_series.x.push_back(it);
        mae_series.y.push_back(rec.mae);
        loss_series.x.push_back(it);
        loss_series.y.push_back(rec.train_loss);
    }
    plot_svg({max_f, mean_f_series, mae_series},
             "test metrics vs iteration (" + options.loss + ")", "iteration", "value",
             options.out_dir / "reports" / "convergence.svg");
    plot_svg({loss_series}, "train loss vs iteration (" + options.loss + ")",
             "iteration", "loss", options.out_dir / "reports" / "train_loss.svg");

    return TrainOutcome{result.final_eval, result.log.back().iteration,
                        train_set.size(), test_set.size(), config.lr};
}

EvalOutcome cmd_eval(const EvalOptions& options) {
    const std::vector<EvalPair> pairs = pair_directories(options.pred_dir, options.gt_dir);
    const std::vector<double> thresholds = default_thresholds();
    const Beta2 beta2(options.beta2);
    const DatasetEval avg = dataset_eval(pairs, thresholds, beta2,
                                         AggregationMode::kAveragePr);
    const DatasetEval pif = dataset_eval(pairs, thresholds, beta2,
                                         AggregationMode::kPerImageF);

    ensure_dir(options.out_dir);
    write_kv_config(options.out_dir / "config.txt",
                    {{"command", "eval"},
                     {"pred_dir", options.pred_dir.string()},
                     {"gt_dir", options.gt_dir.string()},
                     {"beta2", format_real(options.beta2)}});
    write_csv(per_image_schema(), per_image_rows(avg.images),
              options.out_dir / "per_image.csv");

    static const Schema summary_schema = {{"mode", ColumnType::kText},
                                          {"max_f", ColumnType::kReal},
                                          {"mean_f", ColumnType::kReal},
                                          {"mae", ColumnType::kReal},
                                          {"t_o", ColumnType::kReal}};
    write_csv(summary_schema,
              {{std::string(aggregation_mode_name(avg.mode)), avg.summary.max_f,
                avg.summary.mean_f, avg.summary.mae, avg.summary.t_o},
               {std::string(aggregation_mode_name(pif.mode)), pif.summary.max_f,
                pif.summary.mean_f, pif.summary.mae, pif.summary.t_o}},
              options.out_dir / "summary.csv");
    write_csv(sweep_schema(), curve_rows(avg.curve),
              options.out_dir / "sweep_average_pr.csv");
    write_csv(sweep_schema(), curve_rows(pif.curve),
              options.out_dir / "sweep_per_image_f.csv");
    plot_svg({{"average-pr", avg.curve.thresholds, avg.curve.f},
              {"per-image-f", pif.curve.thresholds, pif.curve.f}},
             "dataset F vs threshold", "threshold", "F",
             options.out_dir / "f_vs_threshold.svg");

    return EvalOutcome{avg.summary, pif.summary,
                       threshold_stats(image_summaries(avg.images)), pairs.size()};
}

EvalSummary cmd_sweep(const SweepOptions& options) {
    const SaliencyMap pred = read_pgm(options.pred).map;
    const BinaryMap gt = read_binary_pgm(options.gt);
    const SweepCurve curve = sweep(pred, gt, default_thresholds(), Beta2(options.beta2));
    const double mae_value = mae(pred, gt);

    ensure_dir(options.out_dir);
    write_kv_config(options.out_dir / "config.txt",
                    {{"command", "sweep"},
                     {"pred", options.pred.string()},
                     {"gt", options.gt.string()},
                     {"beta2", format_real(options.beta2)}});
    write_csv(sweep_schema(), curve_rows(curve), options.out_dir / "sweep.csv");
    plot_svg({{"precision", curve.thresholds, curve.precision},
              {"recall", curve.thresholds, curve.recall},
              {"f", curve.thresholds, curve.f}},
             "precision/recall/F vs threshold", "threshold", "value",
             options.out_dir / "sweep.svg");
    return summarize(curve, mae_value);
}

void cmd_report(const ReportOptions& options) {
    if (options.run_dirs.size() < 2) {
        throw ArgumentError("report needs at least 2 run directories, got " +
                            std::to_string(options.run_dirs.size()));
    }
    ensure_dir(options.out_dir);

    struct RunEval {
        std::string label;
        std::string loss;
        double beta2;
        DatasetEval eval;
        PrfPoint at_half;
        std::vector<LogRecord> log;
    };

    const std::vector<double> thresholds = default_thresholds();
    std::vector<RunEval> runs;
    std::set<std::string> labels;
    for (const auto& dir : options.run_dirs) {
        const auto cfg = read_kv_config(dir / "config.txt");
        for (const char* key : {"loss", "beta2"}) {
            if (cfg.find(key) == cfg.end()) {
                throw FormatError(dir.string() + "/config.txt lacks key '" +
                                  std::string(key) + "'");
            }
        }
        std::string label = dir.filename().string();
        if (label.empty()) label = dir.parent_path().filename().string();
        while (!labels.insert(label).second) label += "+";

        RunEval run;
        run.label = label;
        run.loss = cfg.at("loss");
        run.beta2 = std::stod(cfg.at("beta2"));
        const std::vector<EvalPair> pairs =
            pair_directories(dir / "preds", options.gt_dir);
        run.eval = dataset_eval(pairs, thresholds, Beta2(run.beta2),
                                AggregationMode::kAveragePr);
        run.at_half = dataset_prf_at(pairs, 0.5, Beta2(run.beta2));

        const std::vector<CsvRow> log_rows = read_csv(dir / "log.csv", log_schema());
        for (const auto& row : log_rows) {
            run.log.push_back({std::get<std::int64_t>(row[0]), std::get<double>(row[1]),
                               std::get<double>(row[2]), std::get<double>(row[3]),
                               std::get<double>(row[4])});
        }
        runs.push_back(std::move(run));
    }

    // Fig. 5a analog: dataset-level F vs threshold, one curve per run.
    static const Schema overlay_schema = {{"run", ColumnType::kText},
                                          {"threshold", ColumnType::kReal},
                                          {"precision", ColumnType::kReal},
                                          {"recall", ColumnType::kReal},
                                          {"f", ColumnType::kReal}};
    std::vector<CsvRow> overlay_rows;
    std::vector<Series> overlay_series;
    for (const auto& run : runs) {
        const SweepCurve& c = run.eval.curve;
        for (std::size_t j = 0; j < c.size(); ++j) {
            overlay_rows.push_back({run.label, c.thresholds[j], c.precision[j],
                                    c.recall[j], c.f[j]});
        }
        overlay_series.push_back({run.label, c.thresholds, c.f});
    }
    write_csv(overlay_schema, overlay_rows, options.out_dir / "f_vs_threshold.csv");
    plot_svg(overlay_series, "dataset F vs threshold (average-pr)", "threshold", "F",
             options.out_dir / "f_vs_threshold.svg");

    // Fig. 5b analog: optimal-threshold statistics per run.
    static const Schema to_schema = {{"run", ColumnType::kText},
                                     {"loss", ColumnType::kText},
                                     {"beta2", ColumnType::kReal},
                                     {"t_o_mean", ColumnType::kReal},
                                     {"t_o_variance", ColumnType::kReal},
                                     {"t_o_std", ColumnType::kReal}};
    std::vector<CsvRow> to_rows;
    for (const auto& run : runs) {
        const ThresholdStats stats = threshold_stats(image_summaries(run.eval.images));
        to_rows.push_back({run.label, run.loss, run.beta2, stats.mean, stats.variance,
                           std::sqrt(stats.variance)});
    }
    write_csv(to_schema, to_rows, options.out_dir / "t_o_stats.csv");

    // Fig. 6 analog: per-run precision/recall/F against threshold.
    for (const auto& run : runs) {
        const SweepCurve& c = run.eval.curve;
        plot_svg({{"precision", c.thresholds, c.precision},
                  {"recall", c.thresholds, c.recall},
                  {"f", c.thresholds, c.f}},
                 "precision/recall/F vs threshold (" + run.label + ")", "threshold",
                 "value", options.out_dir / ("prf_" + run.label + ".svg"));
    }

    // Fig. 7 analog: summary at t=0.5 per run (the beta2 sweep reads off here).
    static const Schema half_schema = {{"run", ColumnType::kText},
                                       {"loss", ColumnType::kText},
                                       {"beta2", ColumnType::kReal},
                                       {"precision_t05", ColumnType::kReal},
                                       {"recall_t05", ColumnType::kReal},
                                       {"f_t05", ColumnType::kReal},
                                       {"max_f", ColumnType::kReal},
                                       {"mean_f", ColumnType::kReal},
                                       {"mae", ColumnType::kReal},
                                       {"t_o", ColumnType::kReal}};
    std::vector<CsvRow> half_rows;
    for (const auto& run : runs) {
        half_rows.push_back({run.label, run.loss, run.beta2, run.at_half.precision,
                             run.at_half.recall, run.at_half.f, run.eval.summary.max_f,
                             run.eval.summary.mean_f, run.eval.summary.mae,
                             run.eval.summary.t_o});
    }
    write_csv(half_schema, half_rows, options.out_dir / "summary_by_run.csv");

    // Fig. 8 analog: convergence overlay from the stored logs.
    static const Schema conv_schema = {{"run", ColumnType::kText},
                                       {"iteration", ColumnType::kInt},
                                       {"max_f", ColumnType::kReal}};
    std::vector<CsvRow> conv_rows;
    std::vector<Series> conv_series;
    for (const auto& run : runs) {
        Series s{run.label, {}, {}};
        for (const auto& rec : run.log) {
            conv_rows.push_back({run.label, rec.iteration, rec.max_f});
            s.x.push_back(static_cast<double>(rec.iteration));
            s.y.push_back(rec.max_f);
        }
        conv_series.push_back(std::move(s));
    }
    write_csv(conv_schema, conv_rows, options.out_dir / "convergence.csv");
    plot_svg(conv_series, "test MaxF vs iteration", "iteration", "MaxF",
             options.out_dir / "convergence.svg");

    std::string run_list;
    for (const auto& dir : options.run_dirs) {
        run_list += run_list.empty() ? dir.string() : ";" + dir.string();
    }
    write_kv_config(options.out_dir / "config.txt", {{"command", "report"},
                                                     {"gt_dir", options.gt_dir.string()},
                                                     {"runs", run_list}});
}

} // namespace floss
