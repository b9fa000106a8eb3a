#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levelcurve/evolve.hpp"
#include "levelcurve/field.hpp"
#include "levelcurve/metrics.hpp"
#include "levelcurve/som.hpp"

namespace levelcurve {

struct NoiseSpec {
    enum class Kind { none, gaussian, salt_pepper };
    Kind kind = Kind::none;
    double sd = 0.0;       // gaussian standard deviation
    double density = 0.0;  // salt-and-pepper corruption probability
    std::uint32_t seed = 1;
};

ScalarField apply_noise(const ScalarField& image, const NoiseSpec& noise);

/// Per-model numeric knobs; negative map dims / eta0 pick the model default.
struct ModelParams {
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    double mu = 0.0;          // cv curvature weight
    double nu = 0.0;          // cv area weight
    double alpha = 10.0;      // sbgfrls balloon weight
    double sigma = 3.0;       // locality width (lrcv, soac, somrac)
    double sigma_star = 0.1;  // somrac pixel-scale width
    double beta = 0.0;        // log-likelihood curvature weight
    int k = 2;                // GMM components per region
    double eta0 = -1.0;
    int map_rows = -1;
    int map_cols = -1;
    int t_max_train = 10000;
};

struct ExperimentConfig {
    std::string image;        // synthetic preset name or image file path
    std::string truth_path;   // required for scoring when image is a file
    NoiseSpec noise;
    std::string model = "cv";
    ModelParams params;
    EvolveParams evolve;
    std::optional<Rect> init; // default: centered rect of half the dimensions
    std::uint32_t seed = 1;
    std::string train_image;  // optional; default: the (noisy) test image
    std::string fg_mask_path; // supervised training pixels (nonzero = selected)
    std::string bg_mask_path;
    int train_pixels = 0;     // when > 0: sample this many per region from the truth
    std::string map_path;     // pretrained map file
};

struct RunRecord {
    std::string model;
    std::string image;
    std::uint32_t seed = 0;
    std::optional<PrfResult> metrics;
    int iterations = 0;
    bool converged = false;
    double wall_ms = 0.0;
    Mask mask;
};

Rect default_init(int width, int height);

/// Builds the configured speed model, running any training it needs.
/// `test_image` is the image the contour will evolve on; training data comes
/// from cfg.train_image when given, else from the test image.
std::unique_ptr<SpeedModel> build_model(const ExperimentConfig& cfg, const VectorImage& test_image,
                                        const std::optional<Mask>& truth);

/// End-to-end: resolve image -> noise -> train -> evolve -> score.
RunRecord run_experiment(const ExperimentConfig& cfg);

std::string csv_header();
std::string csv_row(const RunRecord& r);

/// Flat key=value config text; '#' starts a comment, unknown keys are hard
/// errors, and comma-separated values expand to the cross-product of runs in
/// file order.
std::vector<ExperimentConfig> parse_config_text(const std::string& text);
std::vector<ExperimentConfig> load_config_file(const std::string& path);

/// Named experiment batches mirroring the benchmark tables.
std::vector<ExperimentConfig> bench_preset(const std::string& name);

/// Runs a batch, fanning out across worker threads (capped by the
/// LEVELCURVE_THREADS environment variable); results keep config order.
std::vector<RunRecord> run_batch(const std::vector<ExperimentConfig>& configs);

} // namespace levelcurve
