#include "levelcurve/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace levelcurve {

GaussianKernel gaussian_kernel(double sigma, int radius) {
    if (!(sigma > 0.0)) throw NonPositiveSigma();
    if (radius < 0) radius = static_cast<int>(std::ceil(4.0 * sigma));
    radius = std::max(radius, 0);

    GaussianKernel k;
    k.sigma = sigma;
    k.radius = radius;
    k.taps.resize(static_cast<std::size_t>(2 * radius + 1));

    double sum = 0.0;
    for (int o = -radius; o <= radius; ++o) {
        const double v = std::exp(-(static_cast<double>(o) * o) / (2.0 * sigma * sigma));
        k.taps[static_cast<std::size_t>(o + radius)] = v;
        sum += v;
    }
    for (auto& t : k.taps) t /= sum;
    return k;
}

namespace {

enum class Pad { replicate, zero };

ScalarField separable_pass(const ScalarField& f, const GaussianKernel& k, bool horizontal, Pad pad) {
    ScalarField out(f.width, f.height);
    const int r = k.radius;
    const int n = horizontal ? f.width : f.height;
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const int c = horizontal ? x : y;
            double acc = 0.0;
            for (int o = -r; o <= r; ++o) {
                int s = c - o;
                if (pad == Pad::replicate) {
                    s = std::clamp(s, 0, n - 1);
                } else if (s < 0 || s >= n) {
                    continue;
                }
                const double v = horizontal ? f.at(s, y) : f.at(x, s);
                acc += k.tap(o) * v;
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

} // namespace

ScalarField convolve(const ScalarField& field, const GaussianKernel& kernel) {
    return separable_pass(separable_pass(field, kernel, true, Pad::replicate), kernel, false,
                          Pad::replicate);
}

ScalarField convolve_zero_pad(const ScalarField& field, const GaussianKernel& kernel) {
    return separable_pass(separable_pass(field, kernel, true, Pad::zero), kernel, false, Pad::zero);
}

} // namespace levelcurve
