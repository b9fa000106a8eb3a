#include "levelcurve/models_local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levelcurve/calculus.hpp"
#include "levelcurve/rng.hpp"

namespace levelcurve {

namespace {

constexpr double kDensityFloor = 1e-12;
constexpr double kVarianceFloor = 1e-2;
constexpr double kInvSqrt2Pi = 0.39894228040143267794; // 1/sqrt(2*pi)

double global_mean(const ScalarField& image) {
    double s = 0.0;
    for (double v : image.values) s += v;
    return s / static_cast<double>(image.size());
}

// Local mean field with the evolve-loop fallback: an emptied region reuses
// the previous iteration's field, or a constant field at the global image
// mean on the first call.
ScalarField local_mean_with_fallback(const ScalarField& image, const Mask& mask, double sigma,
                                     std::optional<ScalarField>& prev) {
    try {
        ScalarField f = local_weighted_mean(image, mask, sigma).values;
        prev = f;
        return f;
    } catch (const EmptyRegion&) {
        if (prev) return *prev;
        ScalarField f(image.width, image.height, global_mean(image));
        prev = f;
        return f;
    }
}

ScalarField lrcv_speed_impl(const ScalarField& image, const LevelSetField& phi,
                            const LrcvParams& params, std::optional<ScalarField>& prev_in,
                            std::optional<ScalarField>& prev_out) {
    const Mask in_mask = phi.mask();
    const ScalarField c_in = local_mean_with_fallback(image, in_mask, params.sigma, prev_in);
    const ScalarField c_out =
        local_mean_with_fallback(image, in_mask.complement(), params.sigma, prev_out);
    ScalarField s(image.width, image.height);
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double din = image.values[i] - c_in.values[i];
        const double dout = image.values[i] - c_out.values[i];
        s.values[i] = -params.lambda_plus * din * din + params.lambda_minus * dout * dout;
    }
    return s;
}

} // namespace

ScalarField lrcv_speed(const ScalarField& image, const LevelSetField& phi,
                       const LrcvParams& params) {
    std::optional<ScalarField> none_in, none_out;
    return lrcv_speed_impl(image, phi, params, none_in, none_out);
}

double lrcv_energy(const ScalarField& image, const Mask& mask, const LrcvParams& params) {
    if (mask.count() == 0 || mask.count() == mask.size()) throw EmptyRegion();
    const ScalarField c_in = local_weighted_mean(image, mask, params.sigma).values;
    const ScalarField c_out = local_weighted_mean(image, mask.complement(), params.sigma).values;
    double e = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double d =
            image.values[i] - (mask.values[i] ? c_in.values[i] : c_out.values[i]);
        e += (mask.values[i] ? params.lambda_plus : params.lambda_minus) * d * d;
    }
    return e;
}

KdeDensity::KdeDensity(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
    if (samples_.empty()) throw TooFewSamples("KDE needs at least one sample");
    if (!(bandwidth_ > 0.0)) throw ValidationError("KDE bandwidth must be > 0");
}

double KdeDensity::operator()(std::span<const double> x) const {
    if (x.size() != 1) throw DimMismatch("KDE density is scalar-only");
    double acc = 0.0;
    for (double s : samples_) {
        const double u = (x[0] - s) / bandwidth_;
        acc += kInvSqrt2Pi * std::exp(-0.5 * u * u);
    }
    return acc / static_cast<double>(samples_.size());
}

double kde_bandwidth(const std::vector<double>& samples) {
    if (samples.size() < 2) throw TooFewSamples("bandwidth needs >= 2 samples");
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < samples.size(); ++j)
            if (j != i) nearest = std::min(nearest, std::abs(samples[i] - samples[j]));
        total += nearest;
    }
    return std::max(total / static_cast<double>(samples.size()), 0.5);
}

KdeModel kde_fit(const std::vector<double>& fg_samples, const std::vector<double>& bg_samples) {
    return {KdeDensity(fg_samples, kde_bandwidth(fg_samples)),
            KdeDensity(bg_samples, kde_bandwidth(bg_samples))};
}

GmmDensity::GmmDensity(std::vector<Component> components) : components_(std::move(components)) {}

double GmmDensity::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim()) throw DimMismatch("GMM dimension mismatch");
    double acc = 0.0;
    for (const auto& c : components_) {
        double logp = 0.0;
        for (std::size_t d = 0; d < c.mean.size(); ++d) {
            const double diff = x[d] - c.mean[d];
            logp += -0.5 * diff * diff / c.var[d] - 0.5 * std::log(2.0 * M_PI * c.var[d]);
        }
        acc += c.weight * std::exp(logp);
    }
    return acc;
}

namespace {

double gmm_log_likelihood(const GmmDensity& g, const std::vector<std::vector<double>>& samples) {
    double ll = 0.0;
    for (const auto& s : samples) ll += std::log(std::max(g(s), kDensityFloor));
    return ll;
}

GmmDensity gmm_fit_once(const std::vector<std::vector<double>>& samples, int k, Rng& rng,
                        std::vector<double>& ll_trace) {
    const std::size_t n = samples.size();
    const std::size_t dim = samples.front().size();

    // Initialize: means at random distinct samples, shared sample variance.
    std::vector<double> var0(dim, 0.0), mean0(dim, 0.0);
    for (const auto& s : samples)
        for (std::size_t d = 0; d < dim; ++d) mean0[d] += s[d];
    for (auto& m : mean0) m /= static_cast<double>(n);
    for (const auto& s : samples)
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = s[d] - mean0[d];
            var0[d] += diff * diff;
        }
    for (auto& v : var0) v = std::max(v / static_cast<double>(n), kVarianceFloor);

    std::vector<GmmDensity::Component> comps(static_cast<std::size_t>(k));
    for (auto& c : comps) {
        c.weight = 1.0 / k;
        c.mean = samples[rng.uniform_index(static_cast<std::uint32_t>(n))];
        c.var = var0;
    }
    GmmDensity model(comps);

    ll_trace.clear();
    double prev_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> resp(static_cast<std::size_t>(k));
    for (int iter = 0; iter < 500; ++iter) {
        // E step
        std::vector<double> weight_sum(static_cast<std::size_t>(k), 0.0);
        std::vector<std::vector<double>> mean_sum(static_cast<std::size_t>(k),
                                                  std::vector<double>(dim, 0.0));
        std::vector<std::vector<double>> sq_sum(static_cast<std::size_t>(k),
                                                std::vector<double>(dim, 0.0));
        double ll = 0.0;
        for (const auto& s : samples) {
            double total = 0.0;
            for (int c = 0; c < k; ++c) {
                const auto& comp = model.components()[static_cast<std::size_t>(c)];
                double logp = 0.0;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = s[d] - comp.mean[d];
                    logp += -0.5 * diff * diff / comp.var[d] -
                            0.5 * std::log(2.0 * M_PI * comp.var[d]);
                }
                resp[static_cast<std::size_t>(c)] = comp.weight * std::exp(logp);
                total += resp[static_cast<std::size_t>(c)];
            }
            total = std::max(total, kDensityFloor);
            ll += std::log(total);
            for (int c = 0; c < k; ++c) {
                const double r = resp[static_cast<std::size_t>(c)] / total;
                weight_sum[static_cast<std::size_t>(c)] += r;
                for (std::size_t d = 0; d < dim; ++d) {
                    mean_sum[static_cast<std::size_t>(c)][d] += r * s[d];
                    sq_sum[static_cast<std::size_t>(c)][d] += r * s[d] * s[d];
                }
            }
        }
        ll_trace.push_back(ll);
        // M step
        std::vector<GmmDensity::Component> next(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c) {
            auto& comp = next[static_cast<std::size_t>(c)];
            const double w = weight_sum[static_cast<std::size_t>(c)];
            comp.weight = w / static_cast<double>(n);
            comp.mean.resize(dim);
            comp.var.resize(dim);
            if (w < kDensityFloor) {
                comp = model.components()[static_cast<std::size_t>(c)];
                comp.weight = kDensityFloor;
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                comp.mean[d] = mean_sum[static_cast<std::size_t>(c)][d] / w;
                const double ex2 = sq_sum[static_cast<std::size_t>(c)][d] / w;
                comp.var[d] = std::max(ex2 - comp.mean[d] * comp.mean[d], kVarianceFloor);
            }
        }
        model = GmmDensity(std::move(next));

        if (iter > 0) {
            if (ll + 1e-9 * (1.0 + std::abs(ll)) < prev_ll)
                throw std::logic_error("EM log-likelihood decreased");
            if (std::abs(ll - prev_ll) < 1e-8 * (1.0 + std::abs(prev_ll))) break;
        }
        prev_ll = ll;
    }
    model.ll_trace = ll_trace;
    return model;
}

} // namespace

GmmDensity gmm_fit(const std::vector<std::vector<double>>& samples, int k, std::uint32_t seed) {
    if (k < 1) throw ValidationError("K must be >= 1");
    if (samples.size() < static_cast<std::size_t>(k))
        throw TooFewSamples("GMM needs at least K samples");
    Rng rng(seed);
    GmmDensity best;
    double best_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    for (int restart = 0; restart < 5; ++restart) {
        GmmDensity candidate = gmm_fit_once(samples, k, rng, trace);
        const double ll = gmm_log_likelihood(candidate, samples);
        if (ll > best_ll) {
            best_ll = ll;
            best = std::move(candidate);
        }
    }
    return best;
}

GmmDensity gmm_fit(const std::vector<double>& samples, int k, std::uint32_t seed) {
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (double v : samples) rows.push_back({v});
    return gmm_fit(rows, k, seed);
}

ScalarField loglik_field(const VectorImage& image, const Density& p_in, const Density& p_out) {
    ScalarField s(image.width(), image.height());
    std::vector<double> px(static_cast<std::size_t>(image.dim()));
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < image.dim(); ++c)
                px[static_cast<std::size_t>(c)] = image.channels[static_cast<std::size_t>(c)].at(x, y);
            s.at(x, y) = std::log(std::max(p_in(px), kDensityFloor)) -
                         std::log(std::max(p_out(px), kDensityFloor));
        }
    return s;
}

ScalarField loglik_speed(const VectorImage& image, const LevelSetField& phi, const Density& p_in,
                         const Density& p_out, double beta) {
    ScalarField s = loglik_field(image, p_in, p_out);
    if (beta != 0.0) {
        const ScalarField kappa = curvature(phi.phi);
        for (std::size_t i = 0; i < s.size(); ++i) s.values[i] += beta * kappa.values[i];
    }
    return s;
}

ScalarField LrcvModel::speed(const VectorImage& image, const LevelSetField& phi) {
    if (image.dim() != 1) throw DimMismatch("lrcv is defined for scalar images only");
    return lrcv_speed_impl(image.plane(0), phi, params_, prev_in_, prev_out_);
}

std::optional<double> LrcvModel::energy(const VectorImage& image, const Mask& mask) const {
    if (image.dim() != 1) return std::nullopt;
    try {
        return lrcv_energy(image.plane(0), mask, params_);
    } catch (const EmptyRegion&) {
        return std::nullopt;
    }
}

} // namespace levelcurve
