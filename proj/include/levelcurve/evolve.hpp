#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levelcurve/field.hpp"
#include "levelcurve/levelset.hpp"

namespace levelcurve {

/// Which factor multiplies the speed field in the update step:
/// the regularized Dirac of phi, or ||grad phi||.
enum class EvolveMultiplier { dirac, grad_mag };

/// A per-iteration speed field S(x, phi). Implementations may keep internal
/// per-run state (the previous iteration's regional descriptors, used as the
/// fallback when a region empties out); reset() clears it between runs.
class SpeedModel {
public:
    virtual ~SpeedModel() = default;

    virtual ScalarField speed(const VectorImage& image, const LevelSetField& phi) = 0;
    virtual EvolveMultiplier multiplier() const = 0;
    virtual std::string name() const = 0;

    /// Model energy on a hard mask, when the model defines one. Only used for
    /// diagnostic traces.
    virtual std::optional<double> energy(const VectorImage& image, const Mask& mask) const {
        (void)image;
        (void)mask;
        return std::nullopt;
    }

    virtual void reset() {}
};

struct EvolveParams {
    double dt = 1.0;
    double eps = 1.0;           // Dirac regularization width
    double rho = 1.0;           // binarization amplitude
    double sigma_prime = 1.5;   // contour smoothing width
    int t_max_evol = 1000;
    int stable_window = 2;      // unchanged-mask iterations required to stop

    bool smoothing_enabled = true; // diagnostic mode only: skip step (4)
    bool record_energy = false;
    // Diagnostics hook, called once per iteration with the post-iteration mask.
    std::function<void(int iteration, const Mask&)> on_iteration;

    void validate() const;
};

struct SegmentationResult {
    Mask mask;
    int iterations = 0;
    bool converged = false;
    std::vector<double> energy_trace;        // filled when record_energy is set
    std::optional<ScalarField> speed_field;  // last iteration's speed field
};

/// True iff the last stable_window + 1 masks are identical pixelwise.
bool converged(const std::deque<Mask>& mask_history, int stable_window);

/// The shared contour-evolution loop. Per iteration:
///   (1) S = model.speed(image, phi)
///   (2) phi += dt * m * S with m = dirac_eps(phi, eps) or ||grad phi||
///   (3) phi <- rho * (H(phi) - H(-phi))
///   (4) phi <- g_sigma' * phi
///   (5) stop when the mask {phi >= 0} is unchanged for stable_window
///       consecutive iterations, or after t_max_evol iterations.
/// Throws DimMismatch when phi0 and image dimensions differ; model errors
/// propagate.
SegmentationResult evolve(const VectorImage& image, const LevelSetField& phi0, SpeedModel& model,
                          const EvolveParams& params);

SegmentationResult evolve(const ScalarField& image, const LevelSetField& phi0, SpeedModel& model,
                          const EvolveParams& params);

} // namespace levelcurve
