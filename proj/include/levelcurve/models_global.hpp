#pragma once

#include <optional>
#include <vector>

#include "levelcurve/evolve.hpp"
#include "levelcurve/field.hpp"
#include "levelcurve/levelset.hpp"

namespace levelcurve {

/// sign with sign(0) = +1, mirroring H(0) = 1.
inline double sign_pos(double x) { return x >= 0.0 ? 1.0 : -1.0; }

struct CvParams {
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    double mu = 0.0; // curvature weight
    double nu = 0.0; // area weight
};

/// Discrete Chan-Vese energy on a hard mask:
/// lambda+ sum_in (I-c+)^2 + lambda- sum_out (I-c-)^2 + mu*Length + nu*Area,
/// where Length counts 4-neighbor zero-crossing edges and Area counts
/// foreground pixels. Length/Area enter only when mu/nu are nonzero.
/// Throws EmptyRegion when either side is empty.
double cv_energy(const ScalarField& image, const Mask& mask, const CvParams& params);

/// S = mu*curvature(phi) - nu - lambda+ (I-c+)^2 + lambda- (I-c-)^2; an empty
/// region falls back to the global image mean.
ScalarField cv_speed(const ScalarField& image, const LevelSetField& phi, const CvParams& params);

/// Normalized signed pressure force:
/// spf = (I - (c+ + c-)/2) / max_x |I - (c+ + c-)/2|; identically zero on
/// constant images. S = alpha * spf.
ScalarField sbgfrls_speed(const ScalarField& image, const LevelSetField& phi, double alpha);

struct GsrpfState {
    double c_plus = 0.0;  // mean inside
    double m_plus = 0.0;  // median inside
    double c_minus = 0.0; // mean outside
};

/// Mean/median inside (phi >= 0) and mean outside; an empty side falls back
/// to the global image statistics.
GsrpfState gsrpf_descriptors(const ScalarField& image, const LevelSetField& phi);

/// Intensity threshold (c+^2 + m+^2 - 2c-^2) / (2c+ + 2m+ - 4c-), defined
/// when the denominator clears the degeneracy floor.
std::optional<double> gsrpf_threshold(const GsrpfState& state);

/// spf = sign(2c+ + 2m+ - 4c-) * sign(I - threshold) in {-1, 0, +1};
/// identically zero when the descriptors are degenerate.
ScalarField gsrpf_spf(const ScalarField& image, const GsrpfState& state);

/// alpha(I) = (I - threshold)^2; identically zero when degenerate.
ScalarField gsrpf_alpha(const ScalarField& image, const GsrpfState& state);

/// S = alpha(I) * spf(I), the per-pixel product.
ScalarField gsrpf_speed(const ScalarField& image, const LevelSetField& phi);

/// lambda+ sum_in (|I-c+|^2 + |I-m+|^2) + 2*lambda- sum_out |I-c-|^2, with
/// the literal factor 2 on the outside term. Throws EmptyRegion.
double gsrpf_energy(const ScalarField& image, const Mask& mask, double lambda_plus,
                    double lambda_minus);

class CvModel : public SpeedModel {
public:
    explicit CvModel(CvParams params = {}) : params_(params) {}
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::dirac; }
    std::string name() const override { return "cv"; }
    std::optional<double> energy(const VectorImage& image, const Mask& mask) const override;
    void reset() override { prev_ = std::nullopt; }

private:
    CvParams params_;
    std::optional<std::pair<double, double>> prev_; // (c+, c-) of the previous iteration
};

class SbgfrlsModel : public SpeedModel {
public:
    explicit SbgfrlsModel(double alpha = 10.0) : alpha_(alpha) {}
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::grad_mag; }
    std::string name() const override { return "sbgfrls"; }
    void reset() override { prev_ = std::nullopt; }

private:
    double alpha_;
    std::optional<std::pair<double, double>> prev_;
};

class GsrpfModel : public SpeedModel {
public:
    GsrpfModel() = default;
    ScalarField speed(const VectorImage& image, const LevelSetField& phi) override;
    EvolveMultiplier multiplier() const override { return EvolveMultiplier::grad_mag; }
    std::string name() const override { return "gsrpf"; }
    std::optional<double> energy(const VectorImage& image, const Mask& mask) const override;
    void reset() override {
        prev_ = std::nullopt;
        history.clear();
    }

    /// When set, every per-iteration descriptor triple is appended to
    /// `history` (one entry per speed() call).
    bool record_states = false;
    std::vector<GsrpfState> history;

private:
    std::optional<GsrpfState> prev_;
};

} // namespace levelcurve
