#include "levelcurve/regional.hpp"

#include <algorithm>
#include <cmath>

namespace levelcurve {

double region_mean(const ScalarField& image, const Mask& mask) {
    if (!image.same_dims(ScalarField(mask.width, mask.height)))
        throw DimMismatch("image and mask dimensions differ");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < image.size(); ++i)
        if (mask.values[i]) {
            sum += image.values[i];
            ++n;
        }
    if (n == 0) throw EmptyRegion();
    return sum / static_cast<double>(n);
}

std::vector<double> region_mean(const VectorImage& image, const Mask& mask) {
    std::vector<double> means;
    means.reserve(image.channels.size());
    for (const auto& ch : image.channels) means.push_back(region_mean(ch, mask));
    return means;
}

double region_median(const ScalarField& image, const Mask& mask) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < image.size(); ++i)
        if (mask.values[i]) vals.push_back(image.values[i]);
    if (vals.empty()) throw EmptyRegion();
    std::sort(vals.begin(), vals.end());
    const std::size_t n = vals.size();
    if (n % 2 == 1) return vals[n / 2];
    return 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

RegionDescriptor region_descriptor(const ScalarField& image, const Mask& mask) {
    RegionDescriptor d;
    d.mean = region_mean(image, mask);
    d.median = region_median(image, mask);
    d.pixel_count = mask.count();
    return d;
}

LocalMeanField local_weighted_mean(const ScalarField& image, const Mask& mask, double sigma) {
    if (!(sigma > 0.0)) throw NonPositiveSigma();
    const double global = region_mean(image, mask); // throws EmptyRegion up front

    // Offsets beyond the largest image extent never touch a domain pixel, so
    // the kernel can be truncated there without changing the sums.
    int radius = static_cast<int>(std::ceil(4.0 * sigma));
    radius = std::min(radius, std::max(image.width, image.height) - 1);
    const GaussianKernel k = gaussian_kernel(sigma, radius);

    ScalarField masked(image.width, image.height);
    ScalarField indicator(image.width, image.height);
    for (std::size_t i = 0; i < image.size(); ++i) {
        indicator.values[i] = mask.values[i] ? 1.0 : 0.0;
        masked.values[i] = mask.values[i] ? image.values[i] : 0.0;
    }
    const ScalarField num = convolve_zero_pad(masked, k);
    const ScalarField den = convolve_zero_pad(indicator, k);

    LocalMeanField out;
    out.sigma = sigma;
    out.values = ScalarField(image.width, image.height);
    const double den_floor = 1e-12;
    for (std::size_t i = 0; i < image.size(); ++i)
        out.values.values[i] = den.values[i] < den_floor ? global : num.values[i] / den.values[i];
    return out;
}

LocalMeanField local_full_mean(const ScalarField& image, double sigma) {
    return local_weighted_mean(image, Mask(image.width, image.height, true), sigma);
}

} // namespace levelcurve
