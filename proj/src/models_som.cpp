#include "levelcurve/models_som.hpp"

#include <cmath>

#include "levelcurve/regional.hpp"

namespace levelcurve {

namespace {

std::vector<double> global_means(const VectorImage& image) {
    std::vector<double> m(static_cast<std::size_t>(image.dim()), 0.0);
    for (int c = 0; c < image.dim(); ++c) {
        double s = 0.0;
        for (double v : image.channels[static_cast<std::size_t>(c)].values) s += v;
        m[static_cast<std::size_t>(c)] = s / static_cast<double>(image.plane(0).size());
    }
    return m;
}

std::optional<std::vector<double>> masked_means(const VectorImage& image, const Mask& mask) {
    if (mask.count() == 0) return std::nullopt;
    std::vector<double> m;
    m.reserve(static_cast<std::size_t>(image.dim()));
    for (const auto& ch : image.channels) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < ch.size(); ++i)
            if (mask.values[i]) {
                sum += ch.values[i];
                ++n;
            }
        m.push_back(sum / static_cast<double>(n));
    }
    return m;
}

// Region mean vectors with the evolve-loop fallback.
std::pair<std::vector<double>, std::vector<double>> region_means_with_fallback(
    const VectorImage& image, const Mask& in_mask,
    std::optional<std::pair<std::vector<double>, std::vector<double>>>& prev) {
    auto in = masked_means(image, in_mask);
    auto out = masked_means(image, in_mask.complement());
    std::pair<std::vector<double>, std::vector<double>> result;
    result.first = in ? *in : (prev ? prev->first : global_means(image));
    result.second = out ? *out : (prev ? prev->second : global_means(image));
    prev = result;
    return result;
}

std::vector<double> proto_of(const SomMap& map, std::span<const double> input) {
    const auto w = map.prototype(bmu(map, input));
    return {w.begin(), w.end()};
}

double dist2_to(const VectorImage& image, std::span<const double> w, int x, int y) {
    double d2 = 0.0;
    for (int c = 0; c < image.dim(); ++c) {
        const double d = image.channels[static_cast<std::size_t>(c)].at(x, y) -
                         w[static_cast<std::size_t>(c)];
        d2 += d * d;
    }
    return d2;
}

ScalarField two_descriptor_speed(const VectorImage& image, std::span<const double> w_plus,
                                 std::span<const double> w_minus, double lp, double lm) {
    ScalarField s(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            s.at(x, y) = -lp * dist2_to(image, w_plus, x, y) + lm * dist2_to(image, w_minus, x, y);
    return s;
}

double euclid(std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

PrototypePartition partition_from_means(const SomMap& map, std::span<const double> mean_in,
                                        std::span<const double> mean_out) {
    PrototypePartition p;
    const int n = map.topology.neuron_count();
    for (int i = 0; i < n; ++i) {
        const auto w = map.prototype(i);
        if (euclid(w, mean_in) <= euclid(w, mean_out))
            p.fg_prototypes.push_back({w.begin(), w.end()});
        else
            p.bg_prototypes.push_back({w.begin(), w.end()});
    }
    return p;
}

ScalarField partition_speed(const VectorImage& image, const PrototypePartition& part,
                            std::span<const double> mean_in, std::span<const double> mean_out,
                            const SomMap& map, double lp, double lm) {
    // An empty side substitutes the single-BMU descriptor of its region mean.
    std::vector<std::vector<double>> fg = part.fg_prototypes;
    std::vector<std::vector<double>> bg = part.bg_prototypes;
    if (fg.empty()) fg.push_back(proto_of(map, mean_in));
    if (bg.empty()) bg.push_back(proto_of(map, mean_out));

    ScalarField s(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            double e_in = 0.0, e_out = 0.0;
            for (const auto& w : fg) e_in += dist2_to(image, w, x, y);
            for (const auto& w : bg) e_out += dist2_to(image, w, x, y);
            s.at(x, y) = -lp * e_in + lm * e_out;
        }
    return s;
}

} // namespace

PrototypePartition somcv_partition(const SomMap& map, const VectorImage& image,
                                   const LevelSetField& phi) {
    std::optional<std::pair<std::vector<double>, std::vector<double>>> none;
    const auto [mean_in, mean_out] = region_means_with_fallback(image, phi.mask(), none);
    return partition_from_means(map, mean_in, mean_out);
}

ScalarField somcv_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& map,
                        double lambda_plus, double lambda_minus) {
    std::optional<std::pair<std::vector<double>, std::vector<double>>> none;
    const auto [mean_in, mean_out] = region_means_with_fallback(image, phi.mask(), none);
    const PrototypePartition part = partition_from_means(map, mean_in, mean_out);
    return partition_speed(image, part, mean_in, mean_out, map, lambda_plus, lambda_minus);
}

ScalarField somcvs_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& map,
                         double lambda_plus, double lambda_minus) {
    std::optional<std::pair<std::vector<double>, std::vector<double>>> none;
    const auto [mean_in, mean_out] = region_means_with_fallback(image, phi.mask(), none);
    return two_descriptor_speed(image, proto_of(map, mean_in), proto_of(map, mean_out),
                                lambda_plus, lambda_minus);
}

ScalarField csomcv_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& fg_map,
                         const SomMap& bg_map, double lambda_plus, double lambda_minus) {
    std::optional<std::pair<std::vector<double>, std::vector<double>>> none;
    const auto [mean_in, mean_out] = region_means_with_fallback(image, phi.mask(), none);
    return two_descriptor_speed(image, proto_of(fg_map, mean_in), proto_of(bg_map, mean_out),
                                lambda_plus, lambda_minus);
}

namespace {

// Per-channel local means of one region with the whole-region fallback.
std::vector<ScalarField> local_means_with_fallback(const VectorImage& image, const Mask& mask,
                                                   double sigma,
                                                   std::vector<std::optional<ScalarField>>& prev) {
    if (prev.size() != static_cast<std::size_t>(image.dim()))
        prev.assign(static_cast<std::size_t>(image.dim()), std::nullopt);
    std::vector<ScalarField> out;
    out.reserve(prev.size());
    for (int c = 0; c < image.dim(); ++c) {
        const ScalarField& plane = image.channels[static_cast<std::size_t>(c)];
        auto& slot = prev[static_cast<std::size_t>(c)];
        try {
            ScalarField f = local_weighted_mean(plane, mask, sigma).values;
            slot = f;
            out.push_back(std::move(f));
        } catch (const EmptyRegion&) {
            if (slot) {
                out.push_back(*slot);
            } else {
                double s = 0.0;
                for (double v : plane.values) s += v;
                ScalarField f(plane.width, plane.height, s / static_cast<double>(plane.size()));
                slot = f;
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

ScalarField soac_speed_impl(const VectorImage& image, const LevelSetField& phi,
                            const SomMap& fg_map, const SomMap& bg_map, double sigma, double lp,
                            double lm, std::vector<std::optional<ScalarField>>& prev_in,
                            std::vector<std::optional<ScalarField>>& prev_out) {
    const Mask in_mask = phi.mask();
    const auto c_in = local_means_with_fallback(image, in_mask, sigma, prev_in);
    const auto c_out = local_means_with_fallback(image, in_mask.complement(), sigma, prev_out);

    ScalarField s(image.width(), image.height());
    std::vector<double> q(static_cast<std::size_t>(image.dim()));
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < image.dim(); ++c)
                q[static_cast<std::size_t>(c)] = c_in[static_cast<std::size_t>(c)].at(x, y);
            const auto w_plus = fg_map.prototype(bmu(fg_map, q));
            for (int c = 0; c < image.dim(); ++c)
                q[static_cast<std::size_t>(c)] = c_out[static_cast<std::size_t>(c)].at(x, y);
            const auto w_minus = bg_map.prototype(bmu(bg_map, q));
            s.at(x, y) = -lp * dist2_to(image, w_plus, x, y) + lm * dist2_to(image, w_minus, x, y);
        }
    return s;
}

} // namespace

std::pair<ScalarField, ScalarField> soac_descriptors(const ScalarField& image,
                                                     const LevelSetField& phi,
                                                     const SomMap& fg_map, const SomMap& bg_map,
                                                     double sigma) {
    const VectorImage vimg(image);
    const Mask in_mask = phi.mask();
    std::vector<std::optional<ScalarField>> none_in, none_out;
    const auto c_in = local_means_with_fallback(vimg, in_mask, sigma, none_in);
    const auto c_out = local_means_with_fallback(vimg, in_mask.complement(), sigma, none_out);

    ScalarField w_plus(image.width, image.height);
    ScalarField w_minus(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            const double qi = c_in[0].at(x, y);
            const double qo = c_out[0].at(x, y);
            w_plus.at(x, y) = fg_map.prototype(bmu(fg_map, std::span<const double>(&qi, 1)))[0];
            w_minus.at(x, y) = bg_map.prototype(bmu(bg_map, std::span<const double>(&qo, 1)))[0];
        }
    return {w_plus, w_minus};
}

ScalarField soac_speed(const VectorImage& image, const LevelSetField& phi, const SomMap& fg_map,
                       const SomMap& bg_map, double sigma, double lambda_plus,
                       double lambda_minus) {
    std::vector<std::optional<ScalarField>> none_in, none_out;
    return soac_speed_impl(image, phi, fg_map, bg_map, sigma, lambda_plus, lambda_minus, none_in,
                           none_out);
}

namespace {

ScalarField somrac_wb_field(const ScalarField& image, const SomMap& map, double sigma_star) {
    const ScalarField c_star = local_full_mean(image, sigma_star).values;
    ScalarField wb(image.width, image.height);
    for (std::size_t i = 0; i < c_star.size(); ++i) {
        const double q = c_star.values[i];
        wb.values[i] = map.prototype(bmu(map, std::span<const double>(&q, 1)))[0];
    }
    return wb;
}

SomRacDescriptors somrac_descriptors_impl(const ScalarField& image, const LevelSetField& phi,
                                          const SomMap& map, double sigma_star, double sigma,
                                          const ScalarField* wb_cached,
                                          std::optional<ScalarField>& prev_in,
                                          std::optional<ScalarField>& prev_out) {
    if (!(sigma_star > 0.0) || !(sigma > 0.0)) throw NonPositiveSigma();
    if (!(sigma_star < sigma)) throw ParamOrder("sigma_star must be < sigma");
    if (map.dim != 1) throw DimMismatch("somrac is defined for scalar images only");

    SomRacDescriptors d;
    d.wb = wb_cached ? *wb_cached : somrac_wb_field(image, map, sigma_star);

    const Mask in_mask = phi.mask();
    const VectorImage vimg(image);
    std::vector<std::optional<ScalarField>> pin{prev_in}, pout{prev_out};
    const ScalarField c_in = local_means_with_fallback(vimg, in_mask, sigma, pin)[0];
    const ScalarField c_out = local_means_with_fallback(vimg, in_mask.complement(), sigma, pout)[0];
    prev_in = pin[0];
    prev_out = pout[0];

    d.wb_plus = ScalarField(image.width, image.height);
    d.wb_minus = ScalarField(image.width, image.height);
    // Ties leave both descriptors at zero. Exact equality of the two local
    // means is destroyed by rounding in the convolution ratios, so the tie
    // test carries a small absolute tolerance.
    const double tie_tol = 1e-9;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double a_plus = std::abs(d.wb.values[i] - c_in.values[i]);
        const double a_minus = std::abs(d.wb.values[i] - c_out.values[i]);
        if (std::abs(a_plus - a_minus) <= tie_tol) continue;
        if (a_plus < a_minus)
            d.wb_plus.values[i] = d.wb.values[i];
        else
            d.wb_minus.values[i] = d.wb.values[i];
    }
    return d;
}

} // namespace

SomRacDescriptors somrac_descriptors(const ScalarField& image, const LevelSetField& phi,
                                     const SomMap& map, double sigma_star, double sigma) {
    std::optional<ScalarField> none_in, none_out;
    return somrac_descriptors_impl(image, phi, map, sigma_star, sigma, nullptr, none_in, none_out);
}

ScalarField somrac_speed(const ScalarField& image, const LevelSetField& phi, const SomMap& map,
                         double sigma_star, double sigma, double lambda_plus,
                         double lambda_minus) {
    const SomRacDescriptors d = somrac_descriptors(image, phi, map, sigma_star, sigma);
    ScalarField s(image.width, image.height);
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double din = image.values[i] - d.wb_plus.values[i];
        const double dout = image.values[i] - d.wb_minus.values[i];
        s.values[i] = -lambda_plus * din * din + lambda_minus * dout * dout;
    }
    return s;
}

ScalarField CsomCvModel::speed(const VectorImage& image, const LevelSetField& phi) {
    const auto [mean_in, mean_out] = region_means_with_fallback(image, phi.mask(), prev_);
    return two_descriptor_speed(image, proto_of(fg_, mean_in), proto_of(bg_, mean_out), lp_, lm_);
}

ScalarField SoacModel::speed(const VectorImage& image, const LevelSetField& phi) {
    return soac_speed_impl(image, phi, fg_, bg_, sigma_, lp_, lm_, prev_in_, prev_out_);
}

ScalarField SomCvModel::speed(const VectorImage& image, const LevelSetField& phi) {
    const auto [mean_in, mean_out] = region_means_with_fallback(image, phi.mask(), prev_);
    if (simplified_)
        return two_descriptor_speed(image, proto_of(map_, mean_in), proto_of(map_, mean_out), lp_,
                                    lm_);
    const PrototypePartition part = partition_from_means(map_, mean_in, mean_out);
    return partition_speed(image, part, mean_in, mean_out, map_, lp_, lm_);
}

SomRacModel::SomRacModel(SomMap map, double sigma_star, double sigma, double lambda_plus,
                         double lambda_minus)
    : map_(std::move(map)), sigma_star_(sigma_star), sigma_(sigma), lp_(lambda_plus),
      lm_(lambda_minus) {
    if (!(sigma_star_ > 0.0) || !(sigma_ > 0.0)) throw NonPositiveSigma();
    if (!(sigma_star_ < sigma_)) throw ParamOrder("sigma_star must be < sigma");
}

ScalarField SomRacModel::speed(const VectorImage& image, const LevelSetField& phi) {
    if (image.dim() != 1) throw DimMismatch("somrac is defined for scalar images only");
    const ScalarField& plane = image.plane(0);
    if (!wb_cache_) wb_cache_ = somrac_wb_field(plane, map_, sigma_star_);
    const SomRacDescriptors d = somrac_descriptors_impl(plane, phi, map_, sigma_star_, sigma_,
                                                        &*wb_cache_, prev_in_, prev_out_);
    ScalarField s(plane.width, plane.height);
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const double din = plane.values[i] - d.wb_plus.values[i];
        const double dout = plane.values[i] - d.wb_minus.values[i];
        s.values[i] = -lp_ * din * din + lm_ * dout * dout;
    }
    return s;
}

} // namespace levelcurve
