#include "levelcurve/models_global.hpp"

#include <cmath>

#include "levelcurve/calculus.hpp"
#include "levelcurve/regional.hpp"

namespace levelcurve {

namespace {

constexpr double kGsrpfDenomFloor = 1e-9 * 255.0;

double global_mean(const ScalarField& image) {
    double s = 0.0;
    for (double v : image.values) s += v;
    return s / static_cast<double>(image.size());
}

std::optional<double> masked_mean(const ScalarField& image, const Mask& mask) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < image.size(); ++i)
        if (mask.values[i]) {
            sum += image.values[i];
            ++n;
        }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

// Both region means, with the evolve-loop fallback: an empty side reuses the
// previous iteration's value, or the global image mean on the first call.
std::pair<double, double> means_with_fallback(const ScalarField& image, const Mask& in_mask,
                                              std::optional<std::pair<double, double>>& prev) {
    const auto in = masked_mean(image, in_mask);
    const auto out = masked_mean(image, in_mask.complement());
    std::pair<double, double> result;
    result.first = in ? *in : (prev ? prev->first : global_mean(image));
    result.second = out ? *out : (prev ? prev->second : global_mean(image));
    prev = result;
    return result;
}

const ScalarField& scalar_plane(const VectorImage& image, const char* model) {
    if (image.dim() != 1)
        throw DimMismatch(std::string(model) + " is defined for scalar images only");
    return image.plane(0);
}

int edge_count(const Mask& mask) {
    int edges = 0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (x + 1 < mask.width && mask.at(x, y) != mask.at(x + 1, y)) ++edges;
            if (y + 1 < mask.height && mask.at(x, y) != mask.at(x, y + 1)) ++edges;
        }
    return edges;
}

} // namespace

double cv_energy(const ScalarField& image, const Mask& mask, const CvParams& params) {
    const auto c_in = masked_mean(image, mask);
    const auto c_out = masked_mean(image, mask.complement());
    if (!c_in || !c_out) throw EmptyRegion();
    double e = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double d = image.values[i] - (mask.values[i] ? *c_in : *c_out);
        e += (mask.values[i] ? params.lambda_plus : params.lambda_minus) * d * d;
    }
    if (params.mu != 0.0) e += params.mu * edge_count(mask);
    if (params.nu != 0.0) e += params.nu * static_cast<double>(mask.count());
    return e;
}

namespace {

ScalarField cv_speed_impl(const ScalarField& image, const LevelSetField& phi,
                          const CvParams& params,
                          std::optional<std::pair<double, double>>& prev) {
    const auto [c_in, c_out] = means_with_fallback(image, phi.mask(), prev);
    ScalarField s(image.width, image.height);
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double din = image.values[i] - c_in;
        const double dout = image.values[i] - c_out;
        s.values[i] = -params.nu - params.lambda_plus * din * din +
                      params.lambda_minus * dout * dout;
    }
    if (params.mu != 0.0) {
        const ScalarField kappa = curvature(phi.phi);
        for (std::size_t i = 0; i < s.size(); ++i) s.values[i] += params.mu * kappa.values[i];
    }
    return s;
}

} // namespace

ScalarField cv_speed(const ScalarField& image, const LevelSetField& phi, const CvParams& params) {
    std::optional<std::pair<double, double>> none;
    return cv_speed_impl(image, phi, params, none);
}

namespace {

ScalarField sbgfrls_speed_impl(const ScalarField& image, const LevelSetField& phi, double alpha,
                               std::optional<std::pair<double, double>>& prev) {
    const auto [c_in, c_out] = means_with_fallback(image, phi.mask(), prev);
    const double mid = 0.5 * (c_in + c_out);
    double max_abs = 0.0;
    for (double v : image.values) max_abs = std::max(max_abs, std::abs(v - mid));
    ScalarField s(image.width, image.height);
    if (max_abs == 0.0) return s; // constant image: no pressure force
    for (std::size_t i = 0; i < image.size(); ++i)
        s.values[i] = alpha * (image.values[i] - mid) / max_abs;
    return s;
}

} // namespace

ScalarField sbgfrls_speed(const ScalarField& image, const LevelSetField& phi, double alpha) {
    std::optional<std::pair<double, double>> none;
    return sbgfrls_speed_impl(image, phi, alpha, none);
}

namespace {

GsrpfState gsrpf_descriptors_impl(const ScalarField& image, const LevelSetField& phi,
                                  std::optional<GsrpfState>& prev) {
    const Mask in_mask = phi.mask();
    const Mask out_mask = in_mask.complement();
    GsrpfState s;
    const auto c_in = masked_mean(image, in_mask);
    const auto c_out = masked_mean(image, out_mask);
    if (c_in) {
        s.c_plus = *c_in;
        s.m_plus = region_median(image, in_mask);
    } else if (prev) {
        s.c_plus = prev->c_plus;
        s.m_plus = prev->m_plus;
    } else {
        s.c_plus = global_mean(image);
        s.m_plus = region_median(image, Mask(image.width, image.height, true));
    }
    s.c_minus = c_out ? *c_out : (prev ? prev->c_minus : global_mean(image));
    prev = s;
    return s;
}

} // namespace

GsrpfState gsrpf_descriptors(const ScalarField& image, const LevelSetField& phi) {
    std::optional<GsrpfState> none;
    return gsrpf_descriptors_impl(image, phi, none);
}

std::optional<double> gsrpf_threshold(const GsrpfState& state) {
    const double denom = 2.0 * state.c_plus + 2.0 * state.m_plus - 4.0 * state.c_minus;
    if (std::abs(denom) < kGsrpfDenomFloor) return std::nullopt;
    const double num = state.c_plus * state.c_plus + state.m_plus * state.m_plus -
                       2.0 * state.c_minus * state.c_minus;
    return num / denom;
}

ScalarField gsrpf_spf(const ScalarField& image, const GsrpfState& state) {
    ScalarField s(image.width, image.height);
    const auto threshold = gsrpf_threshold(state);
    if (!threshold) return s; // degenerate descriptors: no force
    const double denom = 2.0 * state.c_plus + 2.0 * state.m_plus - 4.0 * state.c_minus;
    const double spf1 = sign_pos(denom);
    for (std::size_t i = 0; i < image.size(); ++i)
        s.values[i] = spf1 * sign_pos(image.values[i] - *threshold);
    return s;
}

ScalarField gsrpf_alpha(const ScalarField& image, const GsrpfState& state) {
    ScalarField a(image.width, image.height);
    const auto threshold = gsrpf_threshold(state);
    if (!threshold) return a;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double d = image.values[i] - *threshold;
        a.values[i] = d * d;
    }
    return a;
}

namespace {

ScalarField gsrpf_force(const ScalarField& image, const GsrpfState& state) {
    ScalarField s = gsrpf_spf(image, state);
    const ScalarField a = gsrpf_alpha(image, state);
    for (std::size_t i = 0; i < s.size(); ++i) s.values[i] *= a.values[i];
    return s;
}

} // namespace

ScalarField gsrpf_speed(const ScalarField& image, const LevelSetField& phi) {
    return gsrpf_force(image, gsrpf_descriptors(image, phi));
}

double gsrpf_energy(const ScalarField& image, const Mask& mask, double lambda_plus,
                    double lambda_minus) {
    const auto c_in = masked_mean(image, mask);
    const auto c_out = masked_mean(image, mask.complement());
    if (!c_in || !c_out) throw EmptyRegion();
    const double m_in = region_median(image, mask);
    double e = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double v = image.values[i];
        if (mask.values[i]) {
            e += lambda_plus * ((v - *c_in) * (v - *c_in) + (v - m_in) * (v - m_in));
        } else {
            e += 2.0 * lambda_minus * (v - *c_out) * (v - *c_out);
        }
    }
    return e;
}

ScalarField CvModel::speed(const VectorImage& image, const LevelSetField& phi) {
    return cv_speed_impl(scalar_plane(image, "cv"), phi, params_, prev_);
}

std::optional<double> CvModel::energy(const VectorImage& image, const Mask& mask) const {
    if (image.dim() != 1) return std::nullopt;
    try {
        return cv_energy(image.plane(0), mask, params_);
    } catch (const EmptyRegion&) {
        return std::nullopt;
    }
}

ScalarField SbgfrlsModel::speed(const VectorImage& image, const LevelSetField& phi) {
    return sbgfrls_speed_impl(scalar_plane(image, "sbgfrls"), phi, alpha_, prev_);
}

ScalarField GsrpfModel::speed(const VectorImage& image, const LevelSetField& phi) {
    const ScalarField& plane = scalar_plane(image, "gsrpf");
    const GsrpfState state = gsrpf_descriptors_impl(plane, phi, prev_);
    if (record_states) history.push_back(state);
    return gsrpf_force(plane, state);
}

std::optional<double> GsrpfModel::energy(const VectorImage& image, const Mask& mask) const {
    if (image.dim() != 1) return std::nullopt;
    try {
        return gsrpf_energy(image.plane(0), mask, 1.0, 1.0);
    } catch (const EmptyRegion&) {
        return std::nullopt;
    }
}

} // namespace levelcurve
