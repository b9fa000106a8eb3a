#include "levelcurve/som.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "levelcurve/rng.hpp"

namespace levelcurve {

double TrainingSchedule::eta(int t) const { return eta0 * std::exp(-t / tau_eta); }

double TrainingSchedule::radius(int t) const { return r0 * std::exp(-t / tau_r); }

double TrainingSchedule::neighborhood(const SomTopology& topo, int bmu_idx, int n, int t) const {
    if (n == bmu_idx) return 1.0;
    const double r = radius(t);
    if (r <= 0.0) return 0.0;
    return std::exp(-topo.grid_dist2(bmu_idx, n) / (2.0 * r * r));
}

TrainingSchedule TrainingSchedule::thesis_default(const SomTopology& topo, double eta0,
                                                  std::uint32_t seed) {
    TrainingSchedule s;
    s.eta0 = eta0;
    s.r0 = std::max(topo.rows, topo.cols) / 2.0;
    s.t_max = 10000;
    s.tau_eta = s.t_max;
    s.tau_r = s.r0 > 1.0 ? s.t_max / std::log(s.r0) : static_cast<double>(s.t_max);
    s.seed = seed;
    return s;
}

TrainingSet TrainingSet::from_scalars(const std::vector<double>& values) {
    TrainingSet set;
    set.samples.reserve(values.size());
    for (double v : values) set.samples.push_back({v});
    return set;
}

SomMap som_init(const SomTopology& topology, int dim, double range_lo, double range_hi,
                std::uint32_t seed) {
    if (topology.rows < 1 || topology.cols < 1) throw ValidationError("map needs >= 1 neuron");
    if (dim < 1) throw ValidationError("prototype dimension must be >= 1");
    SomMap map;
    map.topology = topology;
    map.dim = dim;
    map.prototypes.resize(static_cast<std::size_t>(topology.neuron_count()) * dim);
    Rng rng(seed);
    for (auto& w : map.prototypes) w = rng.uniform(range_lo, range_hi);
    return map;
}

int bmu(const SomMap& map, std::span<const double> input) {
    if (static_cast<int>(input.size()) != map.dim)
        throw DimMismatch("input dimension does not match map prototypes");
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    const int n = map.topology.neuron_count();
    for (int i = 0; i < n; ++i) {
        const auto w = map.prototype(i);
        double d2 = 0.0;
        for (int c = 0; c < map.dim; ++c) {
            const double d = input[static_cast<std::size_t>(c)] - w[static_cast<std::size_t>(c)];
            d2 += d * d;
        }
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

double bmu_distance(const SomMap& map, std::span<const double> input) {
    const auto w = map.prototype(bmu(map, input));
    double d2 = 0.0;
    for (int c = 0; c < map.dim; ++c) {
        const double d = input[static_cast<std::size_t>(c)] - w[static_cast<std::size_t>(c)];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

namespace {

SomMap train_with_rng(SomMap map, const TrainingSet& data, const TrainingSchedule& schedule,
                      Rng& rng) {
    if (data.empty()) throw EmptyTrainingSet();
    if (data.dim() != map.dim) throw DimMismatch("training sample dimension does not match map");
    const int n = map.topology.neuron_count();
    for (int t = 0; t < schedule.t_max; ++t) {
        const auto& x = data.samples[rng.uniform_index(static_cast<std::uint32_t>(data.samples.size()))];
        const int b = bmu(map, x);
        const double eta_t = schedule.eta(t);
        for (int i = 0; i < n; ++i) {
            const double pull = eta_t * schedule.neighborhood(map.topology, b, i, t);
            if (pull == 0.0) continue;
            double* w = map.prototypes.data() + static_cast<std::size_t>(i) * map.dim;
            for (int c = 0; c < map.dim; ++c) w[c] += pull * (x[static_cast<std::size_t>(c)] - w[c]);
        }
    }
    return map;
}

} // namespace

SomMap som_train(SomMap map, const TrainingSet& data, const TrainingSchedule& schedule) {
    Rng rng(schedule.seed);
    return train_with_rng(std::move(map), data, schedule, rng);
}

SomMap som_fit(const SomTopology& topology, const TrainingSet& data,
               const TrainingSchedule& schedule) {
    if (data.empty()) throw EmptyTrainingSet();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : data.samples)
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    SomMap map = som_init(topology, data.dim(), lo, hi, schedule.seed);
    return som_train(std::move(map), data, schedule);
}

std::pair<SomMap, SomMap> csom_train(const TrainingSet& fg, const TrainingSet& bg,
                                     const SomTopology& topology,
                                     const TrainingSchedule& schedule) {
    if (fg.empty() || bg.empty()) throw EmptyTrainingSet();
    return {som_fit(topology, fg, schedule), som_fit(topology, bg, schedule)};
}

CsomLabel csom_classify(const SomMap& fg_map, const SomMap& bg_map,
                        std::span<const double> input) {
    return bmu_distance(fg_map, input) <= bmu_distance(bg_map, input) ? CsomLabel::foreground
                                                                      : CsomLabel::background;
}

void write_maps(std::ostream& os, const std::vector<SomMap>& maps) {
    os << "som " << maps.size() << "\n";
    char buf[64];
    for (const auto& m : maps) {
        os << m.topology.rows << " " << m.topology.cols << " " << m.dim << "\n";
        const int n = m.topology.neuron_count();
        for (int i = 0; i < n; ++i) {
            const auto w = m.prototype(i);
            for (int c = 0; c < m.dim; ++c) {
                std::snprintf(buf, sizeof buf, "%.17g", w[static_cast<std::size_t>(c)]);
                os << (c ? " " : "") << buf;
            }
            os << "\n";
        }
    }
}

std::vector<SomMap> read_maps(std::istream& is) {
    std::string magic;
    std::size_t count = 0;
    if (!(is >> magic >> count) || magic != "som")
        throw CorruptHeader("not a map file (expected 'som <count>')");
    std::vector<SomMap> maps;
    for (std::size_t k = 0; k < count; ++k) {
        SomMap m;
        if (!(is >> m.topology.rows >> m.topology.cols >> m.dim))
            throw TruncatedData("map header truncated");
        if (m.topology.rows < 1 || m.topology.cols < 1 || m.dim < 1)
            throw CorruptHeader("invalid map dimensions");
        const std::size_t total = static_cast<std::size_t>(m.topology.neuron_count()) * m.dim;
        m.prototypes.resize(total);
        for (auto& w : m.prototypes)
            if (!(is >> w)) throw TruncatedData("map prototypes truncated");
        maps.push_back(std::move(m));
    }
    return maps;
}

void save_maps(const std::string& path, const std::vector<SomMap>& maps) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_maps(os, maps);
    if (!os) throw IoError("write failed: " + path);
}

std::vector<SomMap> load_maps(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path);
    return read_maps(is);
}

} // namespace levelcurve
