#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "levelcurve/evolve.hpp"
#include "levelcurve/field.hpp"
#include "levelcurve/regional.hpp"

namespace levelcurve {

struct LrcvParams {
    double sigma = 3.0; // locality width, pixels
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
};

/// S = -lambda+ (I - c+(x))^2 + lambda- (I - c-(x))^2 with the local weighted
/// means of width sigma. An empty region falls back to a constant field at
/// the global image mean.
ScalarField lrcv_speed(const ScalarField& image, const LevelSetField& phi,
                       const LrcvParams& params);

/// Discrete-sum analogue of the Chan-Vese energy with local means.
/// Throws EmptyRegion.
double lrcv_energy(const ScalarField& image, const Mask& mask, const LrcvParams& params);

/// Conditional intensity density evaluated pixelwise; implementations are
/// immutable after fitting and safe to share.
class Density {
public:
    virtual ~Density() = default;
    virtual double operator()(std::span<const double> x) const = 0;
    double at(double intensity) const { return (*this)(std::span<const double>(&intensity, 1)); }
};

/// Nonparametric kernel density over scalar training intensities, in the
/// literal form (1/|L|) sum_i K((I - I_i)/sigma) with K the standard normal
/// bump. The kernel is not divided by sigma; only log-density differences are
/// ever consumed, where the common factor cancels.
class KdeDensity : public Density {
public:
    KdeDensity(std::vector<double> samples, double bandwidth);
    double operator()(std::span<const double> x) const override;
    double bandwidth() const { return bandwidth_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    std::vector<double> samples_;
    double bandwidth_;
};

struct KdeModel {
    KdeDensity fg;
    KdeDensity bg;
};

/// Average nearest-neighbor distance within one sample set, floored at 0.5
/// intensity units. Throws TooFewSamples for fewer than two samples.
double kde_bandwidth(const std::vector<double>& samples);

/// One bandwidth per region from its own samples.
KdeModel kde_fit(const std::vector<double>& fg_samples, const std::vector<double>& bg_samples);

/// Gaussian mixture with diagonal covariance for one region.
class GmmDensity : public Density {
public:
    struct Component {
        double weight = 0.0;
        std::vector<double> mean;
        std::vector<double> var; // diagonal, floored at 1e-2
    };

    GmmDensity() = default;
    explicit GmmDensity(std::vector<Component> components);
    double operator()(std::span<const double> x) const override;

    const std::vector<Component>& components() const { return components_; }
    int dim() const { return components_.empty() ? 0 : static_cast<int>(components_.front().mean.size()); }

    /// Per-iteration log-likelihood of the restart that won; non-decreasing
    /// by EM monotonicity (verified during the fit).
    std::vector<double> ll_trace;

private:
    std::vector<Component> components_;
};

/// Expectation-maximization fit: best of 5 seeded restarts by final
/// log-likelihood; stops at relative change < 1e-8 or 500 iterations.
/// Throws TooFewSamples when sample count < K.
GmmDensity gmm_fit(const std::vector<std::vector<double>>& samples, int k, std::uint32_t seed);
GmmDensity gmm_fit(const std::vector<double>& samples, int k, std::uint32_t seed);

/// S = beta*curvature(phi) + log max(p_in(I), floor) - log max(p_out(I),
/// floor), floor = 1e-12.
ScalarField loglik_speed(const VectorImage& image, const LevelSetField& phi, const Density& p_in,
                         const Density& p_out, double beta);

/// log p_in(I) - log p_out(I), the raw per-pixel term without the curvature
/// part; used for diagnostics rendering.
ScalarField loglik_field(const VectorImage& image, const Density& p_in, const Density& p_out);

class LrcvModel : public SpeedModel {
public:
    explicit LrcvModel(LrcvParams params) : params_(params) {}
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return "lrcv"; }
    std::optional<double> energy(const VectorImage& image, const Mask& mask) const override;
    void reset() override {
        prev_in_.reset();
        prev_out_.reset();
    }

private:
    LrcvParams params_;
    std::optional<ScalarField> prev_in_, prev_out_;
};

/// Log-likelihood contour driver shared by the KDE- and GMM-backed models.
class LoglikModel : public SpeedModel {
public:
    LoglikModel(std::shared_ptr<const Density> p_in, std::shared_ptr<const Density> p_out,
                double beta, std::string name)
        : p_in_(std::move(p_in)), p_out_(std::move(p_out)), beta_(beta), name_(std::move(name)) {}

    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override {
        return loglik_speed(image, phi, *p_in_, *p_out_, beta_);
    }
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return name_; }

    ScalarField diagnostic(const VectorImage& image) const {
        return loglik_field(image, *p_in_, *p_out_);
    }

private:
    std::shared_ptr<const Density> p_in_, p_out_;
    double beta_;
    std::string name_;
};

} // namespace levelcurve
