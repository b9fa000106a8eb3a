#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "levelcurve/evolve.hpp"
#include "levelcurve/field.hpp"
#include "levelcurve/som.hpp"

namespace levelcurve {

/// Split of a trained map's prototypes into foreground and background
/// descriptor sets, recomputed from the current contour every iteration.
struct PrototypePartition {
    std::vector<std::vector<double>> fg_prototypes;
    std::vector<std::vector<double>> bg_prototypes;

    std::size_t n_plus() const { return fg_prototypes.size(); }
    std::size_t n_minus() const { return bg_prototypes.size(); }
};

/// Assign every prototype by its distance to the two region means:
/// foreground iff |w_n - mean_in| <= |w_n - mean_out| (Euclidean for vector
/// images). Exhaustive and exclusive over the map's neurons.
PrototypePartition somcv_partition(const SomMap& map, const VectorImage& image,
                                   const LevelSetField& phi);

/// S = -lambda+ sum_j ||I - w_j+||^2 + lambda- sum_j ||I - w_j-||^2 with the
/// sums over the partition sets. An empty side substitutes the single BMU
/// prototype of its region mean.
ScalarField somcv_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& map,
                        double lambda_plus = 1.0, double lambda_minus = 1.0);

/// Single-prototype variant: w_b± is the BMU prototype of each region mean,
/// S = -lambda+ ||I - w_b+||^2 + lambda- ||I - w_b-||^2.
ScalarField somcvs_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& map,
                         double lambda_plus = 1.0, double lambda_minus = 1.0);

/// Concurrent-map speed: each trained map is queried with its own region
/// mean; S = -lambda+ ||I - w_b+||^2 + lambda- ||I - w_b-||^2.
ScalarField csomcv_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& fg_map,
                         const SomMap& bg_map, double lambda_plus = 1.0,
                         double lambda_minus = 1.0);

/// Pixelwise BMU-prototype fields of the two maps queried with the local
/// weighted means of width sigma (scalar images).
std::pair<ScalarField, ScalarField> soac_descriptors(const ScalarField& image,
                                                     const LevelSetField& phi,
                                                     const SomMap& fg_map, const SomMap& bg_map,
                                                     double sigma);

ScalarField soac_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& fg_map,
                       const SomMap& bg_map, double sigma, double lambda_plus = 1.0,
                       double lambda_minus = 1.0);

/// Pixelwise descriptors of the local-global comparison:
///   wb(x)       BMU prototype for the sigma*-smoothed intensity c(x),
///   wb_plus(x)  = wb(x) where it is strictly closer to the local inside
///                mean than to the local outside mean, else 0,
///   wb_minus(x) symmetric with the strict inequality reversed.
/// At most one of the two is nonzero per pixel; on exact ties both are zero.
struct SomRacDescriptors {
    ScalarField wb;
    ScalarField wb_plus;
    ScalarField wb_minus;
};

/// Throws ParamOrder unless 0 < sigma_star < sigma.
SomRacDescriptors somrac_descriptors(const ScalarField& image, const LevelSetField& phi,
                                     const SomMap& map, double sigma_star, double sigma);

ScalarField somrac_speed(const ScalarField& image, const LevelSetField& phi, const SomMap& map,
                         double sigma_star, double sigma, double lambda_plus = 1.0,
                         double lambda_minus = 1.0);

class CsomCvModel : public SpeedModel {
public:
    CsomCvModel(SomMap fg_map, SomMap bg_map, double lambda_plus = 1.0, double lambda_minus = 1.0)
        : fg_(std::move(fg_map)), bg_(std::move(bg_map)), lp_(lambda_plus), lm_(lambda_minus) {}
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return "csomcv"; }
    void reset() override { prev_.reset(); }

private:
    SomMap fg_, bg_;
    double lp_, lm_;
    std::optional<std::pair<std::vector<double>, std::vector<double>>> prev_;
};

class SoacModel : public SpeedModel {
public:
    SoacModel(SomMap fg_map, SomMap bg_map, double sigma, double lambda_plus = 1.0,
              double lambda_minus = 1.0)
        : fg_(std::move(fg_map)), bg_(std::move(bg_map)), sigma_(sigma), lp_(lambda_plus),
          lm_(lambda_minus) {}
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return "soac"; }
    void reset() override {
        prev_in_.clear();
        prev_out_.clear();
    }

    /// e_SOAC, the raw pixel term of the current contour; equals the speed
    /// field (the model has no curvature or area terms).
    ScalarField diagnostic(const VectorImage& image, const LevelSetField& phi) {
        return speed(image, phi);
    }

private:
    SomMap fg_, bg_;
    double sigma_, lp_, lm_;
    std::vector<std::optional<ScalarField>> prev_in_, prev_out_; // per channel
};

/// SOMCV (prototype-set sums) and SOMCV_s (single BMU prototypes) share one
/// driver; `simplified` selects the latter.
class SomCvModel : public SpeedModel {
public:
    SomCvModel(SomMap map, bool simplified, double lambda_plus = 1.0, double lambda_minus = 1.0)
        : map_(std::move(map)), simplified_(simplified), lp_(lambda_plus), lm_(lambda_minus) {}
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return simplified_ ? "somcvs" : "somcv"; }
    void reset() override { prev_.reset(); }

private:
    SomMap map_;
    bool simplified_;
    double lp_, lm_;
    std::optional<std::pair<std::vector<double>, std::vector<double>>> prev_;
};

class SomRacModel : public SpeedModel {
public:
    SomRacModel(SomMap map, double sigma_star, double sigma, double lambda_plus = 1.0,
                double lambda_minus = 1.0);
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return "somrac"; }
    void reset() override {
        prev_in_.reset();
        prev_out_.reset();
        wb_cache_.reset();
    }

private:
    SomMap map_;
    double sigma_star_, sigma_, lp_, lm_;
    std::optional<ScalarField> prev_in_, prev_out_;
    std::optional<ScalarField> wb_cache_; // wb(x) does not depend on the contour
};

} // namespace levelcurve
