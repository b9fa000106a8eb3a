#include "levelcurve/evolve.hpp"

#include "levelcurve/calculus.hpp"
#include "levelcurve/kernel.hpp"

namespace levelcurve {

void EvolveParams::validate() const {
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (!(eps > 0.0)) throw NonPositiveEps();
    if (!(rho > 0.0)) throw ValidationError("rho must be > 0");
    if (!(sigma_prime > 0.0)) throw NonPositiveSigma();
    if (t_max_evol < 1) throw ValidationError("t_max_evol must be >= 1");
    if (stable_window < 1) throw ValidationError("stable_window must be >= 1");
}

bool converged(const std::deque<Mask>& mask_history, int stable_window) {
    if (static_cast<int>(mask_history.size()) < stable_window + 1) return false;
    const Mask& last = mask_history.back();
    for (int i = 2; i <= stable_window + 1; ++i)
        if (mask_history[mask_history.size() - static_cast<std::size_t>(i)] != last) return false;
    return true;
}

SegmentationResult evolve(const VectorImage& image, const LevelSetField& phi0, SpeedModel& model,
                          const EvolveParams& params) {
    params.validate();
    if (!image.same_dims(phi0.phi)) throw DimMismatch("phi0 and image dimensions differ");

    model.reset();
    const GaussianKernel smooth_kernel = gaussian_kernel(params.sigma_prime);

    LevelSetField ls = phi0;
    ls.rho = params.rho;

    SegmentationResult result;
    std::deque<Mask> history;
    history.push_back(ls.mask());

    for (int t = 0; t < params.t_max_evol; ++t) {
        ScalarField speed = model.speed(image, ls);
        if (!speed.same_dims(ls.phi)) throw DimMismatch("speed field has wrong dimensions");

        if (model.multiplier() == EvolveMultiplier::dirac) {
            for (std::size_t i = 0; i < ls.phi.size(); ++i)
                ls.phi.values[i] +=
                    params.dt * dirac_eps(ls.phi.values[i], params.eps) * speed.values[i];
        } else {
            const ScalarField grad = gradient_magnitude(ls.phi);
            for (std::size_t i = 0; i < ls.phi.size(); ++i)
                ls.phi.values[i] += params.dt * grad.values[i] * speed.values[i];
        }

        binarize_levelset(ls);
        if (params.smoothing_enabled) ls.phi = convolve(ls.phi, smooth_kernel);

        result.iterations = t + 1;
        history.push_back(ls.mask());
        while (static_cast<int>(history.size()) > params.stable_window + 1) history.pop_front();

        if (params.record_energy)
            if (auto e = model.energy(image, history.back())) result.energy_trace.push_back(*e);
        if (params.on_iteration) params.on_iteration(result.iterations, history.back());

        if (converged(history, params.stable_window)) {
            result.converged = true;
            result.speed_field = std::move(speed);
            break;
        }
        if (t + 1 == params.t_max_evol) result.speed_field = std::move(speed);
    }

    result.mask = history.back();
    return result;
}

SegmentationResult evolve(const ScalarField& image, const LevelSetField& phi0, SpeedModel& model,
                          const EvolveParams& params) {
    return evolve(VectorImage(image), phi0, model, params);
}

} // namespace levelcurve
