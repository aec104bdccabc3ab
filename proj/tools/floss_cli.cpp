// floss: relaxed F-measure losses, threshold-sweep evaluation, synthetic
// blob data, and a linear pixel model, all behind one executable.
//
// Exit codes: 0 success, 1 bad usage or configuration, 2 runtime failure
// (format, io, saturation, divergence, or a failed gradient check).

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floss/floss.h"

namespace {

int exit_code_for(fl_status status) {
    switch (status) {
        case FL_OK:
            return 0;
        case FL_ERR_ARGUMENT:
        case FL_ERR_CONFIG:
        case FL_ERR_DOMAIN:
            return 1;
        default:
            return 2;
    }
}

int report_failure(fl_status status) {
    std::fprintf(stderr, "error (%s): %s\n", fl_status_name(status), fl_last_error());
    return exit_code_for(status);
}

struct BetaOption {
    double beta2 = 0.3;
    void attach(CLI::App* cmd) {
        cmd->add_option("--beta2", beta2, "beta^2 weighting recall against precision")
            ->capture_default_str();
    }
};

int run_losscheck(const std::string& loss, double beta2, int size, int trials,
                  uint64_t seed) {
    fl_losscheck_report report;
    const fl_status status =
        fl_cmd_losscheck(loss.c_str(), beta2, size, trials, seed, &report);
    if (status != FL_OK) return report_failure(status);
    std::printf("gradient check: %d trials, %dx%d maps, tolerance %.1e\n",
                report.trials, report.size, report.size, report.tolerance);
    for (int i = 0; i < report.n_rows; ++i) {
        const bool ok = report.rows[i].max_rel_err < report.tolerance;
        std::printf("  %-12s max rel err %.3e  %s\n", report.rows[i].loss,
                    report.rows[i].max_rel_err, ok ? "ok" : "EXCEEDED");
    }
    std::printf("%s\n", report.pass ? "PASS" : "FAIL");
    return report.pass ? 0 : 2;
}

int run_train(const fl_train_options& options) {
    fl_train_outcome outcome;
    const fl_status status = fl_cmd_train(&options, &outcome);
    if (status != FL_OK) return report_failure(status);
    std::printf("trained %s for %" PRId64 " iterations (lr %.4g, %d train / %d test)\n",
                options.loss, outcome.iterations, outcome.lr, outcome.n_train,
                outcome.n_test);
    std::printf("test: MaxF %.6f  MeanF %.6f  MAE %.6f  t_o %.6f\n",
                outcome.final_eval.max_f, outcome.final_eval.mean_f,
                outcome.final_eval.mae, outcome.final_eval.t_o);
    return 0;
}

void print_summary(const char* label, const fl_eval_summary& s) {
    std::printf("%s: MaxF %.6f  MeanF %.6f  MAE %.6f  t_o %.6f\n", label, s.max_f,
                s.mean_f, s.mae, s.t_o);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaxed F-measure losses and threshold-free evaluation"};
    app.require_subcommand(1);

    auto* losscheck =
        app.add_subcommand("losscheck", "finite-difference check of analytic gradients");
    std::string lc_loss = "all";
    BetaOption lc_beta;
    int lc_size = 8, lc_trials = 100;
    uint64_t lc_seed = 0;
    losscheck->add_option("--loss", lc_loss, "floss, logfloss, ce, balanced-ce, or all")
        ->capture_default_str();
    lc_beta.attach(losscheck);
    losscheck->add_option("--size", lc_size, "map side length")->capture_default_str();
    losscheck->add_option("--trials", lc_trials, "random maps per loss")
        ->capture_default_str();
    losscheck->add_option("--seed", lc_seed, "rng seed")->capture_default_str();

    auto* surface =
        app.add_subcommand("surface", "loss surface over a two-pixel prediction");
    std::string sf_loss = "floss", sf_gt = "01", sf_out;
    BetaOption sf_beta;
    int sf_res = 101;
    surface->add_option("--loss", sf_loss, "loss to plot")->capture_default_str();
    surface->add_option("--gt", sf_gt, "ground truth pattern, 01 or 11")
        ->capture_default_str();
    sf_beta.attach(surface);
    surface->add_option("--res", sf_res, "grid resolution per axis")
        ->capture_default_str();
    surface->add_option("--out", sf_out, "output directory")->required();

    auto* synth = app.add_subcommand("synth", "generate a synthetic blob dataset");
    fl_synth_options sy;
    fl_synth_options_init(&sy);
    std::string sy_out;
    synth->add_option("--out", sy_out, "output directory")->required();
    synth->add_option("--width", sy.width, "image width")->capture_default_str();
    synth->add_option("--height", sy.height, "image height")->capture_default_str();
    synth->add_option("--n", sy.n_images, "number of images")->capture_default_str();
    synth->add_option("--blobs-min", sy.blobs_min, "minimum blobs per image")
        ->capture_default_str();
    synth->add_option("--blobs-max", sy.blobs_max, "maximum blobs per image")
        ->capture_default_str();
    synth->add_option("--noise-sigma", sy.noise_sigma, "gaussian noise level")
        ->capture_default_str();
    synth->add_option("--seed", sy.seed, "rng seed")->capture_default_str();

    auto* train = app.add_subcommand("train", "fit the linear pixel model");
    fl_train_options tr;
    fl_train_options_init(&tr);
    std::string tr_data, tr_out, tr_loss = "floss";
    train->add_option("--data", tr_data, "dataset directory from synth")->required();
    train->add_option("--out", tr_out, "run output directory")->required();
    train->add_option("--loss", tr_loss, "floss, logfloss, ce, or balanced-ce")
        ->capture_default_str();
    train->add_option("--beta2", tr.beta2, "beta^2 weighting recall against precision")
        ->capture_default_str();
    train->add_option("--lr", tr.lr, "learning rate; 0 picks the per-loss default")
        ->capture_default_str();
    train->add_option("--epochs", tr.epochs, "passes over the training split")
        ->capture_default_str();
    train->add_option("--seed", tr.seed, "rng seed for init, split, and shuffling")
        ->capture_default_str();
    train->add_option("--init-scale", tr.init_scale, "uniform weight init half-width")
        ->capture_default_str();
    train->add_option("--checkpoint-every", tr.checkpoint_every,
                      "iterations between log records")
        ->capture_default_str();
    train->add_option("--train-fraction", tr.train_fraction,
                      "fraction of images used for training")
        ->capture_default_str();

    auto* eval =
        app.add_subcommand("eval", "sweep-evaluate a directory of predictions");
    std::string ev_pred, ev_gt, ev_out;
    BetaOption ev_beta;
    eval->add_option("--pred", ev_pred, "directory of prediction .pgm files")
        ->required();
    eval->add_option("--gt", ev_gt, "directory of ground-truth .pgm files")->required();
    eval->add_option("--out", ev_out, "output directory")->required();
    ev_beta.attach(eval);

    auto* sweep = app.add_subcommand("sweep", "threshold sweep for one map pair");
    std::string sw_pred, sw_gt, sw_out;
    BetaOption sw_beta;
    sweep->add_option("--pred", sw_pred, "prediction .pgm")->required();
    sweep->add_option("--gt", sw_gt, "ground-truth .pgm")->required();
    sweep->add_option("--out", sw_out, "output directory")->required();
    sw_beta.attach(sweep);

    auto* report = app.add_subcommand("report", "compare two or more training runs");
    std::vector<std::string> rp_runs;
    std::string rp_gt, rp_out;
    report->add_option("--runs", rp_runs, "run directories from train")
        ->required()
        ->expected(2, -1);
    report->add_option("--gt", rp_gt, "directory of ground-truth .pgm files")
        ->required();
    report->add_option("--out", rp_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (*losscheck) {
        return run_losscheck(lc_loss, lc_beta.beta2, lc_size, lc_trials, lc_seed);
    }
    if (*surface) {
        const fl_status status = fl_cmd_surface(sf_loss.c_str(), sf_gt.c_str(),
                                                sf_beta.beta2, sf_res, sf_out.c_str());
        if (status != FL_OK) return report_failure(status);
        std::printf("wrote %s/surface.csv and surface.svg\n", sf_out.c_str());
        return 0;
    }
    if (*synth) {
        int n = 0;
        const fl_status status = fl_cmd_synth(&sy, sy_out.c_str(), &n);
        if (status != FL_OK) return report_failure(status);
        std::printf("wrote %d images under %s\n", n, sy_out.c_str());
        return 0;
    }
    if (*train) {
        tr.data_dir = tr_data.c_str();
        tr.out_dir = tr_out.c_str();
        tr.loss = tr_loss.c_str();
        return run_train(tr);
    }
    if (*eval) {
        fl_eval_outcome outcome;
        const fl_status status = fl_cmd_eval(ev_pred.c_str(), ev_gt.c_str(),
                                             ev_out.c_str(), ev_beta.beta2, &outcome);
        if (status != FL_OK) return report_failure(status);
        std::printf("evaluated %d pairs\n", outcome.n_pairs);
        print_summary("average-pr ", outcome.average_pr);
        print_summary("per-image-f", outcome.per_image_f);
        std::printf("per-image t_o: mean %.6f  variance %.6f\n", outcome.t_o_mean,
                    outcome.t_o_variance);
        return 0;
    }
    if (*sweep) {
        fl_eval_summary summary;
        const fl_status status = fl_cmd_sweep(sw_pred.c_str(), sw_gt.c_str(),
                                              sw_out.c_str(), sw_beta.beta2, &summary);
        if (status != FL_OK) return report_failure(status);
        print_summary("sweep", summary);
        return 0;
    }
    if (*report) {
        std::vector<const char*> dirs;
        dirs.reserve(rp_runs.size());
        for (const auto& r : rp_runs) dirs.push_back(r.c_str());
        const fl_status status = fl_cmd_report(dirs.data(),
                                               static_cast<int>(dirs.size()),
                                               rp_gt.c_str(), rp_out.c_str());
        if (status != FL_OK) return report_failure(status);
        std::printf("wrote comparison report under %s\n", rp_out.c_str());
        return 0;
    }
    return 1;
}
