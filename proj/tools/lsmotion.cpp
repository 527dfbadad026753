// lsmotion: estimate and predict motion in CNN feature space.
//
// Subcommands: verify-flow, estimate, predict, sweep, histogram, fieldviz.
// All outputs are CSV / LFT1 / PGM written under --out.

#include "lsm/block_match.hpp"
#include "lsm/experiment.hpp"
#include "lsm/flow_verify.hpp"
#include "lsm/latent_mc.hpp"
#include "lsm/metrics.hpp"
#include "lsm/tensor_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace lsm;

constexpr std::uint64_t kDefaultTextureSeed = 42;

struct CommonOpts {
    std::string net_path;     // empty = builtin reference net
    std::string weights_path; // empty = seeded
    std::string image_path;   // empty = synthesized texture
    std::uint64_t seed = 1;
    int size = 64;
    int layer = -1;
    int border = -1; // -1 auto, 0 none
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--net", opts.net_path, "network spec file (default: builtin reference net)");
    cmd->add_option("--weights", opts.weights_path, "LFW1 weight file (default: seeded init)");
    cmd->add_option("--seed", opts.seed, "seed for weight init and parameter sampling");
    cmd->add_option("--image", opts.image_path, "input image, PGM/PPM (default: synthesized texture)");
    cmd->add_option("--size", opts.size, "size of the synthesized default image")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--layer", opts.layer, "layer index to tap (-1 = final)");
    cmd->add_option("--border", opts.border,
                    "metric border cells (-1 = derive from receptive field, 0 = none)");
    cmd->add_option("--out", opts.out_dir, "output directory");
}

std::ofstream open_out(const CommonOpts& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    const std::string path = opts.out_dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

PredictSetup make_setup(const CommonOpts& opts) {
    PredictSetup setup;
    setup.image = opts.image_path.empty()
                      ? synth_texture(3, opts.size, opts.size, kDefaultTextureSeed)
                      : read_image(opts.image_path);
    setup.net = opts.net_path.empty() ? make_toy_net(setup.image.channels())
                                      : load_network(opts.net_path);
    setup.net.in_channels = setup.image.channels();
    setup.weights = opts.weights_path.empty() ? seeded_weights(setup.net, opts.seed)
                                              : read_lfw1(opts.weights_path);
    setup.layer = opts.layer;
    setup.border = opts.border;
    return setup;
}

void add_affine_flags(CLI::App* cmd, AffineParams& p) {
    cmd->add_option("--tx", p.tx, "x translation, px");
    cmd->add_option("--ty", p.ty, "y translation, px");
    cmd->add_option("--sx", p.sx, "x scale factor");
    cmd->add_option("--sy", p.sy, "y scale factor");
    cmd->add_option("--shx", p.shx, "x shear, degrees");
    cmd->add_option("--shy", p.shy, "y shear, degrees");
    cmd->add_option("--rot", p.rot, "rotation, degrees");
}

BlockMatchConfig preset_config(const std::string& preset) {
    if (preset == "input") return BlockMatchConfig::input_preset();
    if (preset == "latent") return BlockMatchConfig::latent_preset();
    throw CLI::ValidationError("--preset must be 'input' or 'latent'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"motion estimation and compensation in CNN feature space"};
    app.require_subcommand(1);

    // verify-flow
    auto* verify = app.add_subcommand(
        "verify-flow", "run the 1D+t flow-preservation checks and print a pass/fail table");
    int verify_rc = 0;
    verify->callback([&] {
        if (!print_reports(std::cout, run_standard_suite())) verify_rc = 1;
    });

    // estimate
    auto* estimate = app.add_subcommand(
        "estimate", "block-matching motion between two images, written as field.csv");
    CommonOpts est_opts;
    std::string est_target, est_preset = "input";
    int est_block = 0, est_range = -1;
    estimate->add_option("--image", est_opts.image_path, "reference image")->required();
    estimate->add_option("--target", est_target, "target image")->required();
    estimate->add_option("--preset", est_preset, "input (b=31,r=11) or latent (b=3,r=5)");
    estimate->add_option("--block", est_block, "override block size (odd)");
    estimate->add_option("--range", est_range, "override search range");
    estimate->add_option("--out", est_opts.out_dir, "output directory");
    estimate->callback([&] {
        BlockMatchConfig cfg = preset_config(est_preset);
        if (est_block > 0) cfg.block = est_block;
        if (est_range >= 0) cfg.range = est_range;
        const Tensor ref = to_gray(read_image(est_opts.image_path));
        const Tensor tgt = to_gray(read_image(est_target));
        auto csv = open_out(est_opts, "field.csv");
        write_motion_csv(csv, estimate_motion(ref, tgt, cfg));
    });

    // predict
    auto* predict = app.add_subcommand(
        "predict", "warp, forward both frames, and predict the latent tensor from motion");
    CommonOpts pred_opts;
    AffineParams pred_params;
    add_common(predict, pred_opts);
    add_affine_flags(predict, pred_params);
    predict->callback([&] {
        PredictSetup setup = make_setup(pred_opts);
        EndToEndResult res = end_to_end_predict(setup.net, setup.weights, setup.image,
                                                pred_params, setup.layer);
        Mask mask = res.prediction.valid;
        const int border = metric_border(setup);
        if (border > 0) {
            mask = interior_mask(mask, scale_motion(res.input_motion, res.prediction.scale),
                                 border);
        }
        const MetricsReport rep = nrmse(res.prediction.predicted, res.actual, mask);
        std::filesystem::create_directories(pred_opts.out_dir);
        write_lft1(pred_opts.out_dir + "/predicted.lft1", res.prediction.predicted);
        write_lft1(pred_opts.out_dir + "/actual.lft1", res.actual);
        write_mask_pgm(pred_opts.out_dir + "/mask.pgm", res.prediction.valid);
        auto csv = open_out(pred_opts, "metrics.csv");
        csv << MetricsReport::csv_header() << "\n" << rep.csv_row() << "\n";
        std::cout << "nrmse " << rep.nrmse << " over " << rep.n_valid << " elements ("
                  << rep.n_excluded << " excluded)\n";
    });

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "NRMSE across a transform parameter range, written as sweep.csv");
    CommonOpts sweep_opts;
    std::string sweep_kind = "translate-x";
    SweepSpec sweep_spec;
    add_common(sweep, sweep_opts);
    sweep->add_option("--transform", sweep_kind,
                      "translate-x|translate-y|rotate|scale|shear-x|shear-y");
    sweep->add_option("--start", sweep_spec.start, "first parameter value")->required();
    sweep->add_option("--stop", sweep_spec.stop, "last parameter value")->required();
    sweep->add_option("--step", sweep_spec.step, "parameter increment")->required();
    sweep->callback([&] {
        sweep_spec.kind = parse_transform_kind(sweep_kind);
        auto csv = open_out(sweep_opts, "sweep.csv");
        run_sweep(make_setup(sweep_opts), sweep_spec, csv);
    });

    // histogram
    auto* hist = app.add_subcommand(
        "histogram", "NRMSE over random affine transforms, samples + 50-bin histogram");
    CommonOpts hist_opts;
    HistogramSpec hist_spec;
    add_common(hist, hist_opts);
    hist->add_option("--count", hist_spec.count, "number of random transforms")->required();
    hist->add_option("--tx-bound", hist_spec.tx_bound, "translation bound, +-px");
    hist->add_option("--ty-bound", hist_spec.ty_bound, "translation bound, +-px");
    hist->add_option("--scale-min", hist_spec.scale_min, "scale lower bound");
    hist->add_option("--scale-max", hist_spec.scale_max, "scale upper bound");
    hist->add_option("--shear-bound", hist_spec.shear_bound, "shear bound, +-degrees");
    hist->add_option("--rot-bound", hist_spec.rot_bound, "rotation bound, +-degrees");
    hist->callback([&] {
        hist_spec.seed = hist_opts.seed;
        auto samples = open_out(hist_opts, "histogram_samples.csv");
        auto bins = open_out(hist_opts, "histogram_bins.csv");
        run_histogram(make_setup(hist_opts), hist_spec, samples, bins);
    });

    // fieldviz
    auto* viz = app.add_subcommand(
        "fieldviz", "input-space and per-channel latent motion fields as CSV");
    CommonOpts viz_opts;
    std::string viz_target;
    AffineParams viz_params;
    viz_params.tx = 8.0;
    add_common(viz, viz_opts);
    viz->add_option("--target", viz_target,
                    "target image (default: reference warped by the affine flags)");
    add_affine_flags(viz, viz_params);
    viz->callback([&] {
        PredictSetup setup = make_setup(viz_opts);
        const Tensor target = viz_target.empty()
                                  ? warp_image(setup.image, viz_params).image
                                  : read_image(viz_target);
        auto input_csv = open_out(viz_opts, "input_field.csv");
        auto latent_csv = open_out(viz_opts, "latent_fields.csv");
        run_fieldviz(setup, target, input_csv, latent_csv);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return verify_rc;
}
