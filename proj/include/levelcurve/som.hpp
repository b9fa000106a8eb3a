#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levelcurve/errors.hpp"

namespace levelcurve {

/// Output-layer grid of a Kohonen map. 1-D maps use cols = 1; the grid
/// distance between neurons is the Euclidean distance of their integer
/// coordinates, which reduces to the index difference in the 1-D case.
struct SomTopology {
    int rows = 1;
    int cols = 1;

    int neuron_count() const { return rows * cols; }
    // Squared grid distance between neurons a and b.
    double grid_dist2(int a, int b) const {
        const int dr = a / cols - b / cols;
        const int dc = a % cols - b % cols;
        return static_cast<double>(dr * dr + dc * dc);
    }
};

/// A trained (or training) map: one D-dimensional prototype per neuron,
/// stored row-major in a flat array.
struct SomMap {
    SomTopology topology;
    int dim = 1;
    std::vector<double> prototypes; // neuron_count() * dim

    std::span<const double> prototype(int n) const {
        return {prototypes.data() + static_cast<std::size_t>(n) * dim,
                static_cast<std::size_t>(dim)};
    }
};

/// Time-decay schedule of the self-organization rule:
///   eta(t) = eta0 * exp(-t / tau_eta)
///   r(t)   = r0   * exp(-t / tau_r)
///   h_bn(t) = exp(-||r_b - r_n||^2 / (2 r(t)^2))
struct TrainingSchedule {
    double eta0 = 0.9;
    double r0 = 1.0;
    double tau_eta = 10000.0;
    double tau_r = 10000.0;
    int t_max = 10000;
    std::uint32_t seed = 1;

    double eta(int t) const;
    double radius(int t) const;
    double neighborhood(const SomTopology& topo, int bmu, int n, int t) const;

    /// Dissertation preset: r0 = max(rows, cols) / 2, t_max = 10000,
    /// tau_eta = t_max, tau_r = t_max / ln(r0). When r0 <= 1 the log is
    /// non-positive and tau_r falls back to t_max.
    static TrainingSchedule thesis_default(const SomTopology& topo, double eta0 = 0.9,
                                           std::uint32_t seed = 1);
};

/// Intensity samples used to drive training; D-dimensional rows.
struct TrainingSet {
    std::vector<std::vector<double>> samples;

    static TrainingSet from_scalars(const std::vector<double>& values);
    bool empty() const { return samples.empty(); }
    int dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().size()); }
};

/// Prototypes i.i.d. uniform over [range_lo, range_hi] per component,
/// reproducible from the seed.
SomMap som_init(const SomTopology& topology, int dim, double range_lo, double range_hi,
                std::uint32_t seed);

/// Index of the neuron whose prototype is closest (Euclidean) to the input;
/// ties break to the lowest index. Throws DimMismatch.
int bmu(const SomMap& map, std::span<const double> input);

double bmu_distance(const SomMap& map, std::span<const double> input);

/// Kohonen training: t_max steps of draw-sample / find-BMU / pull-all-neurons
/// with the schedule above. Sampling is uniform with replacement. Throws
/// EmptyTrainingSet. Deterministic given (map, data order, schedule.seed).
SomMap som_train(SomMap map, const TrainingSet& data, const TrainingSchedule& schedule);

/// Convenience: random init over the data range followed by training.
SomMap som_fit(const SomTopology& topology, const TrainingSet& data,
               const TrainingSchedule& schedule);

/// Two independently trained maps (foreground, background), each with its own
/// generator seeded from schedule.seed, so swapping the inputs swaps the
/// outputs. Throws EmptyTrainingSet.
std::pair<SomMap, SomMap> csom_train(const TrainingSet& fg, const TrainingSet& bg,
                                     const SomTopology& topology,
                                     const TrainingSchedule& schedule);

enum class CsomLabel { foreground, background };

/// Minimum-quantization-error classification; a tie goes to the foreground.
CsomLabel csom_classify(const SomMap& fg_map, const SomMap& bg_map,
                        std::span<const double> input);

/// Plain-text persistence. Round-trips are lossless for the printed
/// precision (%.17g).
void write_maps(std::ostream& os, const std::vector<SomMap>& maps);
std::vector<SomMap> read_maps(std::istream& is);
void save_maps(const std::string& path, const std::vector<SomMap>& maps);
std::vector<SomMap> load_maps(const std::string& path);

} // namespace levelcurve
