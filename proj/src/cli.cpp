#include "levelcurve/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levelcurve/experiment.hpp"
#include "levelcurve/models_local.hpp"
#include "levelcurve/models_som.hpp"
#include "levelcurve/pnm.hpp"
#include "levelcurve/synth.hpp"

namespace levelcurve::cli {

namespace {

Rect parse_init(const std::string& s) {
    int x, y, w, h;
    if (std::sscanf(s.c_str(), "%d,%d,%d,%d", &x, &y, &w, &h) != 4)
        throw ValidationError("--init must be x,y,w,h");
    return Rect{x, y, w, h};
}

// Min-max scaled rendering of a diagnostic field.
ScalarField heat_field(const ScalarField& f) {
    double lo = f.values.front(), hi = f.values.front();
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ScalarField out(f.width, f.height);
    const double span = hi - lo;
    for (std::size_t i = 0; i < f.size(); ++i)
        out.values[i] = span > 0.0 ? 255.0 * (f.values[i] - lo) / span : 0.0;
    return out;
}

struct GenArgs {
    std::string source;
    std::string out_image;
    std::string out_truth;
    double gaussian_sd = 0.0;
    double salt_pepper = -1.0;
    std::uint32_t seed = 1;
};

int cmd_gen(const GenArgs& a) {
    const auto names = synth_preset_names();
    const bool preset = std::find(names.begin(), names.end(), a.source) != names.end();
    const SynthSpec spec = preset ? synth_preset(a.source) : load_synth_spec(a.source);
    auto [image, truth] = gen_synthetic(spec);
    if (a.gaussian_sd > 0.0) image = add_gaussian_noise(image, a.gaussian_sd, a.seed);
    if (a.salt_pepper >= 0.0) image = add_salt_pepper(image, a.salt_pepper, a.seed);
    write_pgm(a.out_image, image);
    if (!a.out_truth.empty()) write_mask(a.out_truth, truth);
    return 0;
}

struct TrainArgs {
    std::string image;
    std::string fg_mask, bg_mask;
    bool unsupervised = false;
    std::string out;
    int rows = -1, cols = -1;
    double eta0 = -1.0;
    int t_max = 10000;
    std::uint32_t seed = 1;
};

int cmd_train_som(const TrainArgs& a) {
    const VectorImage image = read_image(a.image);
    const bool supervised = !a.fg_mask.empty() || !a.bg_mask.empty();
    if (supervised == a.unsupervised)
        throw ValidationError("pass either --fg/--bg masks or --unsup");

    ExperimentConfig cfg;  // reuse the topology/schedule defaults
    cfg.params.map_rows = a.rows;
    cfg.params.map_cols = a.cols;
    cfg.params.eta0 = a.eta0;
    cfg.params.t_max_train = a.t_max;
    cfg.seed = a.seed;

    std::vector<SomMap> maps;
    if (supervised) {
        if (a.fg_mask.empty() || a.bg_mask.empty())
            throw ValidationError("supervised training needs both --fg and --bg");
        cfg.fg_mask_path = a.fg_mask;
        cfg.bg_mask_path = a.bg_mask;
        cfg.model = "csomcv";
        // Re-derive the sample sets exactly as `segment` would.
        TrainingSet fg, bg;
        {
            const Mask fgm = read_mask(a.fg_mask);
            const Mask bgm = read_mask(a.bg_mask);
            if (fgm.width != image.width() || fgm.height != image.height() ||
                bgm.width != image.width() || bgm.height != image.height())
                throw DimMismatch("training mask dimensions differ from the image");
            for (int y = 0; y < image.height(); ++y)
                for (int x = 0; x < image.width(); ++x) {
                    if (fgm.at(x, y)) fg.samples.push_back(image.pixel(x, y));
                    if (bgm.at(x, y)) bg.samples.push_back(image.pixel(x, y));
                }
        }
        SomTopology topo{a.rows > 0 ? a.rows : 3, a.cols > 0 ? a.cols : 3};
        TrainingSchedule sched =
            TrainingSchedule::thesis_default(topo, a.eta0 > 0.0 ? a.eta0 : 0.9, a.seed);
        sched.t_max = a.t_max;
        sched.tau_eta = sched.t_max;
        sched.tau_r = sched.r0 > 1.0 ? sched.t_max / std::log(sched.r0)
                                     : static_cast<double>(sched.t_max);
        auto [fg_map, bg_map] = csom_train(fg, bg, topo, sched);
        maps = {std::move(fg_map), std::move(bg_map)};
    } else {
        TrainingSet all;
        for (int y = 0; y < image.height(); ++y)
            for (int x = 0; x < image.width(); ++x) all.samples.push_back(image.pixel(x, y));
        SomTopology topo{a.rows > 0 ? a.rows : (image.dim() == 1 ? 5 : 3),
                         a.cols > 0 ? a.cols : (image.dim() == 1 ? 1 : 3)};
        TrainingSchedule sched =
            TrainingSchedule::thesis_default(topo, a.eta0 > 0.0 ? a.eta0 : 0.9, a.seed);
        sched.t_max = a.t_max;
        sched.tau_eta = sched.t_max;
        sched.tau_r = sched.r0 > 1.0 ? sched.t_max / std::log(sched.r0)
                                     : static_cast<double>(sched.t_max);
        maps = {som_fit(topo, all, sched)};
    }
    save_maps(a.out, maps);
    return 0;
}

struct SegmentArgs {
    ExperimentConfig cfg;
    std::string image;
    std::string out_mask;
    std::string init_str;
    std::string truth;
    std::string dump_dir;
    std::string diagnostic_out;
    bool sigma_given = false;
};

int cmd_segment(SegmentArgs& a) {
    a.cfg.init = parse_init(a.init_str);

    // Model-specific locality defaults when --sigma was not given.
    if (!a.sigma_given) {
        if (a.cfg.model == "soac") a.cfg.params.sigma = 0.1;
        else if (a.cfg.model == "somrac") a.cfg.params.sigma = 30.0;
        else a.cfg.params.sigma = 3.0;
    }

    const VectorImage image = read_image(a.image);
    std::optional<Mask> truth;
    if (!a.truth.empty()) {
        truth = read_mask(a.truth);
        if (truth->width != image.width() || truth->height != image.height())
            throw DimMismatch("truth dimensions differ from the image");
    }
    if (!a.cfg.init->inside(image.width(), image.height())) throw RectOutOfBounds();

    auto model = build_model(a.cfg, image, truth);

    EvolveParams params = a.cfg.evolve;
    if (!a.dump_dir.empty()) {
        std::filesystem::create_directories(a.dump_dir);
        const std::string dir = a.dump_dir;
        params.on_iteration = [dir](int iteration, const Mask& m) {
            char name[64];
            std::snprintf(name, sizeof name, "iter_%04d.pgm", iteration);
            write_mask(dir + "/" + name, m);
        };
    }

    const LevelSetField phi0 =
        init_levelset_rect(image.width(), image.height(), *a.cfg.init, params.rho);
    const SegmentationResult res = evolve(image, phi0, *model, params);
    write_mask(a.out_mask, res.mask);

    if (!a.diagnostic_out.empty()) {
        ScalarField diag;
        if (auto* soac = dynamic_cast<SoacModel*>(model.get())) {
            LevelSetField final_phi = phi0;
            final_phi.phi = ScalarField(image.width(), image.height());
            for (std::size_t i = 0; i < res.mask.size(); ++i)
                final_phi.phi.values[i] = res.mask.values[i] ? params.rho : -params.rho;
            diag = soac->diagnostic(image, final_phi);
        } else if (auto* ll = dynamic_cast<LoglikModel*>(model.get())) {
            diag = ll->diagnostic(image);
        } else {
            throw ValidationError("--diagnostic supports models soac, kde, gmm");
        }
        write_pgm(a.diagnostic_out, heat_field(diag));
    }

    std::cout << "iterations " << res.iterations << (res.converged ? " converged" : " max-iter")
              << "\n";
    if (truth) {
        const PrfResult m = prf(res.mask, *truth);
        std::printf("%.6f %.6f %.6f\n", m.precision, m.recall, m.f_measure);
    }
    return 0;
}

struct BenchArgs {
    std::string config;
    std::string preset;
    std::string out;
};

int cmd_bench(const BenchArgs& a) {
    if (a.config.empty() == a.preset.empty())
        throw ValidationError("pass exactly one of --config or --preset");
    const auto configs = a.config.empty() ? bench_preset(a.preset) : load_config_file(a.config);
    const auto records = run_batch(configs);
    std::ofstream os(a.out);
    if (!os) throw IoError("cannot open for writing: " + a.out);
    os << csv_header() << "\n";
    for (const auto& r : records) os << csv_row(r) << "\n";
    if (!os) throw IoError("write failed: " + a.out);
    return 0;
}

int cmd_score(const std::string& mask_path, const std::string& truth_path) {
    const Mask mask = read_mask(mask_path);
    const Mask truth = read_mask(truth_path);
    const PrfResult m = prf(mask, truth);
    std::printf("%.6f %.6f %.6f\n", m.precision, m.recall, m.f_measure);
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Variational level-set active-contour segmentation toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic benchmark image");
    gen_cmd->add_option("source", gen.source, "Preset name or synth spec file")->required();
    gen_cmd->add_option("-o,--output", gen.out_image, "Output image (PGM)")->required();
    gen_cmd->add_option("-t,--truth", gen.out_truth, "Ground-truth mask output (PGM)");
    gen_cmd->add_option("--gaussian-sd", gen.gaussian_sd, "Add Gaussian noise of this SD");
    gen_cmd->add_option("--salt-pepper", gen.salt_pepper, "Add salt-and-pepper noise density");
    gen_cmd->add_option("--seed", gen.seed, "Noise seed");

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train-som", "Train SOM prototypes from an image");
    train_cmd->add_option("-i,--image", train.image, "Training image (PGM/PPM)")->required();
    train_cmd->add_option("--fg", train.fg_mask, "Foreground training-pixel mask");
    train_cmd->add_option("--bg", train.bg_mask, "Background training-pixel mask");
    train_cmd->add_flag("--unsup", train.unsupervised, "Unsupervised: train one map on all pixels");
    train_cmd->add_option("-o,--output", train.out, "Output map file")->required();
    train_cmd->add_option("--rows", train.rows, "Map rows");
    train_cmd->add_option("--cols", train.cols, "Map cols");
    train_cmd->add_option("--eta0", train.eta0, "Initial learning rate");
    train_cmd->add_option("--t-max", train.t_max, "Training iterations");
    train_cmd->add_option("--seed", train.seed, "RNG seed");

    SegmentArgs seg;
    auto* seg_cmd = app.add_subcommand("segment", "Segment an image with one model");
    seg_cmd->add_option("--model", seg.cfg.model, "Model")
        ->required()
        ->check(CLI::IsMember({"cv", "sbgfrls", "gsrpf", "lrcv", "kde", "gmm", "csomcv", "soac",
                               "somcv", "somcvs", "somrac"}));
    seg_cmd->add_option("--init", seg.init_str, "Initial rectangle x,y,w,h")->required();
    seg_cmd->add_option("-i,--image", seg.image, "Input image (PGM/PPM)")->required();
    seg_cmd->add_option("-o,--output", seg.out_mask, "Output mask (PGM)")->required();
    seg_cmd->add_option("--truth", seg.truth, "Score against this truth mask");
    seg_cmd->add_option("--lambda-plus", seg.cfg.params.lambda_plus, "Inside energy weight");
    seg_cmd->add_option("--lambda-minus", seg.cfg.params.lambda_minus, "Outside energy weight");
    seg_cmd->add_option("--mu", seg.cfg.params.mu, "cv: curvature weight");
    seg_cmd->add_option("--nu", seg.cfg.params.nu, "cv: area weight");
    seg_cmd->add_option("--alpha", seg.cfg.params.alpha, "sbgfrls: balloon weight");
    auto* sig = seg_cmd->add_option("--sigma", seg.cfg.params.sigma,
                                    "Locality width (lrcv 3, soac 0.1, somrac 30)");
    seg_cmd->add_option("--sigma-star", seg.cfg.params.sigma_star, "somrac: pixel-scale width");
    seg_cmd->add_option("--beta", seg.cfg.params.beta, "kde/gmm: curvature weight");
    seg_cmd->add_option("--k", seg.cfg.params.k, "gmm: components per region");
    seg_cmd->add_option("--eta0", seg.cfg.params.eta0, "SOM learning rate");
    seg_cmd->add_option("--map-rows", seg.cfg.params.map_rows, "SOM rows");
    seg_cmd->add_option("--map-cols", seg.cfg.params.map_cols, "SOM cols");
    seg_cmd->add_option("--t-max-train", seg.cfg.params.t_max_train, "SOM training iterations");
    seg_cmd->add_option("--sigma-prime", seg.cfg.evolve.sigma_prime, "Contour smoothing width");
    seg_cmd->add_option("--dt", seg.cfg.evolve.dt, "Time step");
    seg_cmd->add_option("--eps", seg.cfg.evolve.eps, "Dirac regularization width");
    seg_cmd->add_option("--rho", seg.cfg.evolve.rho, "Binarization amplitude");
    seg_cmd->add_option("--t-max-evol", seg.cfg.evolve.t_max_evol, "Max evolution iterations");
    seg_cmd->add_option("--stable-window", seg.cfg.evolve.stable_window,
                        "Unchanged-mask iterations for convergence");
    seg_cmd->add_option("--seed", seg.cfg.seed, "RNG seed");
    seg_cmd->add_option("--map", seg.cfg.map_path, "Pretrained map file");
    seg_cmd->add_option("--fg-mask", seg.cfg.fg_mask_path, "Foreground training-pixel mask");
    seg_cmd->add_option("--bg-mask", seg.cfg.bg_mask_path, "Background training-pixel mask");
    seg_cmd->add_option("--train-image", seg.cfg.train_image, "Train on this image instead");
    seg_cmd->add_option("--dump-iterations", seg.dump_dir, "Write one mask PGM per iteration");
    seg_cmd->add_option("--diagnostic", seg.diagnostic_out,
                        "Write the model's pixel-term field (soac/kde/gmm)");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run an experiment batch to CSV");
    bench_cmd->add_option("--config", bench.config, "Experiment config file");
    bench_cmd->add_option("--preset", bench.preset, "Named experiment batch (table4_1)");
    bench_cmd->add_option("-o,--output", bench.out, "Output CSV")->required();

    std::string score_mask, score_truth;
    auto* score_cmd = app.add_subcommand("score", "Precision/recall/F of a mask vs truth");
    score_cmd->add_option("--mask", score_mask, "Mask PGM")->required();
    score_cmd->add_option("--truth", score_truth, "Truth PGM")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*gen_cmd) return cmd_gen(gen);
        if (*train_cmd) return cmd_train_som(train);
        if (*seg_cmd) {
            seg.sigma_given = sig->count() > 0;
            return cmd_segment(seg);
        }
        if (*bench_cmd) return cmd_bench(bench);
        if (*score_cmd) return cmd_score(score_mask, score_truth);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace levelcurve::cli
