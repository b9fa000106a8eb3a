#include "levelcurve/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "levelcurve/models_global.hpp"
#include "levelcurve/models_local.hpp"
#include "levelcurve/models_som.hpp"
#include "levelcurve/pnm.hpp"
#include "levelcurve/rng.hpp"
#include "levelcurve/synth.hpp"

namespace levelcurve {

ScalarField apply_noise(const ScalarField& image, const NoiseSpec& noise) {
    switch (noise.kind) {
    case NoiseSpec::Kind::none:
        return image;
    case NoiseSpec::Kind::gaussian:
        return add_gaussian_noise(image, noise.sd, noise.seed);
    case NoiseSpec::Kind::salt_pepper:
        return add_salt_pepper(image, noise.density, noise.seed);
    }
    return image;
}

Rect default_init(int width, int height) {
    return Rect{width / 4, height / 4, std::max(width / 2, 3), std::max(height / 2, 3)};
}

namespace {

bool is_preset(const std::string& name) {
    const auto names = synth_preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

struct ResolvedImage {
    VectorImage image;       // test image (noise applied)
    std::optional<Mask> truth;
};

ResolvedImage resolve_image(const ExperimentConfig& cfg) {
    ResolvedImage r;
    if (is_preset(cfg.image)) {
        auto [img, truth] = gen_synthetic(synth_preset(cfg.image));
        r.image = VectorImage(apply_noise(img, cfg.noise));
        r.truth = truth;
        return r;
    }
    VectorImage img = read_image(cfg.image);
    if (img.dim() == 1) {
        r.image = VectorImage(apply_noise(img.plane(0), cfg.noise));
    } else {
        std::vector<ScalarField> planes;
        NoiseSpec per = cfg.noise;
        for (int c = 0; c < img.dim(); ++c) {
            planes.push_back(apply_noise(img.channels[static_cast<std::size_t>(c)], per));
            ++per.seed;
        }
        r.image = VectorImage(std::move(planes));
    }
    if (!cfg.truth_path.empty()) r.truth = read_mask(cfg.truth_path);
    return r;
}

TrainingSet pixels_in_mask(const VectorImage& img, const Mask& sel) {
    TrainingSet set;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (sel.at(x, y)) set.samples.push_back(img.pixel(x, y));
    return set;
}

TrainingSet sample_pixels(const VectorImage& img, const Mask& sel, int n, Rng& rng) {
    std::vector<std::pair<int, int>> coords;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (sel.at(x, y)) coords.emplace_back(x, y);
    if (coords.empty()) throw EmptyTrainingSet();
    TrainingSet set;
    for (int i = 0; i < n; ++i) {
        const auto& [x, y] = coords[rng.uniform_index(static_cast<std::uint32_t>(coords.size()))];
        set.samples.push_back(img.pixel(x, y));
    }
    return set;
}

TrainingSet all_pixels(const VectorImage& img) {
    return pixels_in_mask(img, Mask(img.width(), img.height(), true));
}

std::vector<double> scalar_samples(const TrainingSet& set) {
    std::vector<double> out;
    out.reserve(set.samples.size());
    for (const auto& s : set.samples) {
        if (s.size() != 1) throw DimMismatch("scalar training samples required");
        out.push_back(s[0]);
    }
    return out;
}

SomTopology topology_for(const ExperimentConfig& cfg, int default_rows, int default_cols) {
    SomTopology t;
    t.rows = cfg.params.map_rows > 0 ? cfg.params.map_rows : default_rows;
    t.cols = cfg.params.map_cols > 0 ? cfg.params.map_cols : default_cols;
    return t;
}

TrainingSchedule schedule_for(const ExperimentConfig& cfg, const SomTopology& topo,
                              double default_eta0) {
    TrainingSchedule s = TrainingSchedule::thesis_default(
        topo, cfg.params.eta0 > 0.0 ? cfg.params.eta0 : default_eta0, cfg.seed);
    s.t_max = cfg.params.t_max_train;
    s.tau_eta = s.t_max;
    s.tau_r = s.r0 > 1.0 ? s.t_max / std::log(s.r0) : static_cast<double>(s.t_max);
    return s;
}

// Supervised sample sets for the trained models: explicit mask files win,
// otherwise `train_pixels` random pixels per region are drawn from the truth.
std::pair<TrainingSet, TrainingSet> supervised_sets(const ExperimentConfig& cfg,
                                                    const VectorImage& train_img,
                                                    const std::optional<Mask>& truth) {
    if (!cfg.fg_mask_path.empty() && !cfg.bg_mask_path.empty()) {
        return {pixels_in_mask(train_img, read_mask(cfg.fg_mask_path)),
                pixels_in_mask(train_img, read_mask(cfg.bg_mask_path))};
    }
    if (cfg.train_pixels > 0) {
        if (!truth) throw ValidationError("train_pixels needs a ground-truth mask");
        Rng rng(cfg.seed + 101);
        return {sample_pixels(train_img, *truth, cfg.train_pixels, rng),
                sample_pixels(train_img, truth->complement(), cfg.train_pixels, rng)};
    }
    throw ValidationError("model '" + cfg.model +
                          "' needs training pixels (--fg-mask/--bg-mask or train_pixels)");
}

VectorImage resolve_train_image(const ExperimentConfig& cfg, const VectorImage& test_image) {
    if (cfg.train_image.empty()) return test_image;
    if (is_preset(cfg.train_image)) {
        auto [img, truth] = gen_synthetic(synth_preset(cfg.train_image));
        return VectorImage(std::move(img));
    }
    return read_image(cfg.train_image);
}

} // namespace

namespace {

// Inert model used for pipeline checks: zero speed everywhere.
class ZeroModel : public SpeedModel {
public:
    ScalarField speed(const VectorImage& image, const LevelSetField&) override {
        return ScalarField(image.width(), image.height(), 0.0);
    }
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return "zero"; }
};

} // namespace

std::unique_ptr<SpeedModel> build_model(const ExperimentConfig& cfg, const VectorImage& test_image,
                                        const std::optional<Mask>& truth) {
    const ModelParams& p = cfg.params;

    if (cfg.model == "zero") return std::make_unique<ZeroModel>();
    if (cfg.model == "cv")
        return std::make_unique<CvModel>(CvParams{p.lambda_plus, p.lambda_minus, p.mu, p.nu});
    if (cfg.model == "sbgfrls") return std::make_unique<SbgfrlsModel>(p.alpha);
    if (cfg.model == "gsrpf") return std::make_unique<GsrpfModel>();
    if (cfg.model == "lrcv")
        return std::make_unique<LrcvModel>(LrcvParams{p.sigma, p.lambda_plus, p.lambda_minus});

    const VectorImage train_img = resolve_train_image(cfg, test_image);

    if (cfg.model == "kde" || cfg.model == "gmm") {
        const auto [fg, bg] = supervised_sets(cfg, train_img, truth);
        if (cfg.model == "kde") {
            auto m = std::make_shared<KdeModel>(kde_fit(scalar_samples(fg), scalar_samples(bg)));
            return std::make_unique<LoglikModel>(
                std::shared_ptr<const Density>(m, &m->fg),
                std::shared_ptr<const Density>(m, &m->bg), p.beta, "kde");
        }
        auto p_in = std::make_shared<GmmDensity>(gmm_fit(fg.samples, p.k, cfg.seed));
        auto p_out = std::make_shared<GmmDensity>(gmm_fit(bg.samples, p.k, cfg.seed + 1));
        return std::make_unique<LoglikModel>(std::move(p_in), std::move(p_out), p.beta, "gmm");
    }

    if (cfg.model == "csomcv" || cfg.model == "soac") {
        SomMap fg_map, bg_map;
        if (!cfg.map_path.empty()) {
            auto maps = load_maps(cfg.map_path);
            if (maps.size() != 2) throw ValidationError("model needs a 2-map (csom) file");
            fg_map = std::move(maps[0]);
            bg_map = std::move(maps[1]);
        } else {
            const auto [fg, bg] = supervised_sets(cfg, train_img, truth);
            const bool soac = cfg.model == "soac";
            const SomTopology topo = soac ? topology_for(cfg, 3, 1)
                                          : topology_for(cfg, 3, 3);
            const TrainingSchedule sched = schedule_for(cfg, topo, soac ? 0.1 : 0.9);
            std::tie(fg_map, bg_map) = csom_train(fg, bg, topo, sched);
        }
        if (cfg.model == "csomcv")
            return std::make_unique<CsomCvModel>(std::move(fg_map), std::move(bg_map),
                                                 p.lambda_plus, p.lambda_minus);
        return std::make_unique<SoacModel>(std::move(fg_map), std::move(bg_map), p.sigma,
                                           p.lambda_plus, p.lambda_minus);
    }

    if (cfg.model == "somcv" || cfg.model == "somcvs" || cfg.model == "somrac") {
        SomMap map;
        if (!cfg.map_path.empty()) {
            auto maps = load_maps(cfg.map_path);
            if (maps.size() != 1) throw ValidationError("model needs a single-map file");
            map = std::move(maps[0]);
        } else {
            SomTopology topo;
            if (cfg.model == "somrac") {
                topo = topology_for(cfg, 4, 4);
            } else {
                topo = train_img.dim() == 1 ? topology_for(cfg, 5, 1) : topology_for(cfg, 3, 3);
            }
            const TrainingSchedule sched = schedule_for(cfg, topo, 0.9);
            map = som_fit(topo, all_pixels(train_img), sched);
        }
        if (cfg.model == "somrac")
            return std::make_unique<SomRacModel>(std::move(map), p.sigma_star, p.sigma,
                                                 p.lambda_plus, p.lambda_minus);
        return std::make_unique<SomCvModel>(std::move(map), cfg.model == "somcvs", p.lambda_plus,
                                            p.lambda_minus);
    }

    throw ValidationError("unknown model: " + cfg.model);
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
    const ResolvedImage resolved = resolve_image(cfg);
    auto model = build_model(cfg, resolved.image, resolved.truth);

    const Rect init = cfg.init ? *cfg.init : default_init(resolved.image.width(),
                                                          resolved.image.height());
    const LevelSetField phi0 =
        init_levelset_rect(resolved.image.width(), resolved.image.height(), init,
                           cfg.evolve.rho);

    const auto start = std::chrono::steady_clock::now();
    const SegmentationResult res = evolve(resolved.image, phi0, *model, cfg.evolve);
    const auto stop = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.model = cfg.model;
    rec.image = cfg.image;
    rec.seed = cfg.seed;
    rec.iterations = res.iterations;
    rec.converged = res.converged;
    rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    rec.mask = res.mask;
    if (resolved.truth) rec.metrics = prf(res.mask, *resolved.truth);
    return rec;
}

std::string csv_header() {
    return "model,image,seed,precision,recall,fmeasure,iterations,wall_ms";
}

std::string csv_row(const RunRecord& r) {
    char buf[256];
    if (r.metrics) {
        std::snprintf(buf, sizeof buf, "%s,%s,%u,%.6f,%.6f,%.6f,%d,%.3f", r.model.c_str(),
                      r.image.c_str(), r.seed, r.metrics->precision, r.metrics->recall,
                      r.metrics->f_measure, r.iterations, r.wall_ms);
    } else {
        std::snprintf(buf, sizeof buf, "%s,%s,%u,nan,nan,nan,%d,%.3f", r.model.c_str(),
                      r.image.c_str(), r.seed, r.iterations, r.wall_ms);
    }
    return buf;
}

namespace {

struct KeyValues {
    std::string key;
    std::vector<std::string> values; // comma-separated alternatives
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad numeric value for '" + key + "': " + s);
    }
}

int to_int(const std::string& s, const std::string& key) {
    const double v = to_double(s, key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ValidationError("'" + key + "' must be an integer");
    return i;
}

Rect parse_rect(const std::string& s, const std::string& key) {
    const auto parts = split(s, ':');
    if (parts.size() != 4) throw ValidationError("'" + key + "' must be x:y:w:h");
    return Rect{to_int(parts[0], key), to_int(parts[1], key), to_int(parts[2], key),
                to_int(parts[3], key)};
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "image") cfg.image = value;
    else if (key == "truth") cfg.truth_path = value;
    else if (key == "model") cfg.model = value;
    else if (key == "noise") {
        if (value == "none") cfg.noise.kind = NoiseSpec::Kind::none;
        else if (value == "gaussian") cfg.noise.kind = NoiseSpec::Kind::gaussian;
        else if (value == "salt_pepper") cfg.noise.kind = NoiseSpec::Kind::salt_pepper;
        else throw ValidationError("noise must be none|gaussian|salt_pepper");
    } else if (key == "noise_sd") cfg.noise.sd = to_double(value, key);
    else if (key == "noise_density") cfg.noise.density = to_double(value, key);
    else if (key == "noise_seed") cfg.noise.seed = static_cast<std::uint32_t>(to_int(value, key));
    else if (key == "seed") {
        cfg.seed = static_cast<std::uint32_t>(to_int(value, key));
        cfg.noise.seed = cfg.seed;
    } else if (key == "init") cfg.init = parse_rect(value, key);
    else if (key == "lambda_plus") cfg.params.lambda_plus = to_double(value, key);
    else if (key == "lambda_minus") cfg.params.lambda_minus = to_double(value, key);
    else if (key == "mu") cfg.params.mu = to_double(value, key);
    else if (key == "nu") cfg.params.nu = to_double(value, key);
    else if (key == "alpha") cfg.params.alpha = to_double(value, key);
    else if (key == "sigma") cfg.params.sigma = to_double(value, key);
    else if (key == "sigma_star") cfg.params.sigma_star = to_double(value, key);
    else if (key == "beta") cfg.params.beta = to_double(value, key);
    else if (key == "k") cfg.params.k = to_int(value, key);
    else if (key == "eta0") cfg.params.eta0 = to_double(value, key);
    else if (key == "map_rows") cfg.params.map_rows = to_int(value, key);
    else if (key == "map_cols") cfg.params.map_cols = to_int(value, key);
    else if (key == "t_max_train") cfg.params.t_max_train = to_int(value, key);
    else if (key == "sigma_prime") cfg.evolve.sigma_prime = to_double(value, key);
    else if (key == "dt") cfg.evolve.dt = to_double(value, key);
    else if (key == "eps") cfg.evolve.eps = to_double(value, key);
    else if (key == "rho") cfg.evolve.rho = to_double(value, key);
    else if (key == "t_max_evol") cfg.evolve.t_max_evol = to_int(value, key);
    else if (key == "stable_window") cfg.evolve.stable_window = to_int(value, key);
    else if (key == "train_image") cfg.train_image = value;
    else if (key == "fg_mask") cfg.fg_mask_path = value;
    else if (key == "bg_mask") cfg.bg_mask_path = value;
    else if (key == "train_pixels") cfg.train_pixels = to_int(value, key);
    else if (key == "map") cfg.map_path = value;
    else throw ValidationError("unknown config key: " + key);
}

} // namespace

std::vector<ExperimentConfig> parse_config_text(const std::string& text) {
    std::vector<KeyValues> entries;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("config line is not key = value: " + line);
        KeyValues kv;
        kv.key = trim(line.substr(0, eq));
        kv.values = split(line.substr(eq + 1), ',');
        if (kv.key.empty() || kv.values.empty() || kv.values.front().empty())
            throw ValidationError("empty key or value in config line: " + line);
        entries.push_back(std::move(kv));
    }

    std::vector<ExperimentConfig> configs{ExperimentConfig{}};
    for (const auto& kv : entries) {
        std::vector<ExperimentConfig> next;
        next.reserve(configs.size() * kv.values.size());
        for (const auto& base : configs)
            for (const auto& value : kv.values) {
                ExperimentConfig c = base;
                apply_key(c, kv.key, value);
                next.push_back(std::move(c));
            }
        configs = std::move(next);
    }
    for (const auto& c : configs)
        if (c.image.empty()) throw ValidationError("config must set 'image'");
    return configs;
}

std::vector<ExperimentConfig> load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<ExperimentConfig> bench_preset(const std::string& name) {
    if (name == "table4_1") {
        return parse_config_text("image = fig4_1\n"
                                 "model = gsrpf\n"
                                 "sigma_prime = 1.4\n"
                                 "seed = 7\n"
                                 "noise = gaussian\n"
                                 "noise_sd = 10,20,30,40,50\n");
    }
    throw ValidationError("unknown bench preset: " + name);
}

std::vector<RunRecord> run_batch(const std::vector<ExperimentConfig>& configs) {
    std::vector<RunRecord> records(configs.size());
    if (configs.empty()) return records;

    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (const char* cap = std::getenv("LEVELCURVE_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1) workers = static_cast<unsigned>(v);
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            try {
                records[i] = run_experiment(configs[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return records;
}

} // namespace levelcurve
