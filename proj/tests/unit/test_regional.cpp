#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levelcurve/kernel.hpp"
#include "levelcurve/regional.hpp"
#include "levelcurve/rng.hpp"

using namespace levelcurve;

namespace {

ScalarField row_image(const std::vector<double>& v) {
    ScalarField f(static_cast<int>(v.size()), 1);
    f.values = v;
    return f;
}

Mask row_mask(const std::vector<int>& v) {
    Mask m(static_cast<int>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.values[i] = v[i] ? 1 : 0;
    return m;
}

// Direct per-pixel weighted sum over domain pixels in the mask.
ScalarField brute_local_mean(const ScalarField& img, const Mask& mask, double sigma,
                             double fallback) {
    const GaussianKernel k =
        gaussian_kernel(sigma, std::min(static_cast<int>(std::ceil(4.0 * sigma)),
                                        std::max(img.width, img.height) - 1));
    ScalarField out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double num = 0.0, den = 0.0;
            for (int j = -k.radius; j <= k.radius; ++j)
                for (int i = -k.radius; i <= k.radius; ++i) {
                    const int sx = x - i, sy = y - j;
                    if (sx < 0 || sx >= img.width || sy < 0 || sy >= img.height) continue;
                    if (!mask.at(sx, sy)) continue;
                    const double w = k.tap(i) * k.tap(j);
                    num += w * img.at(sx, sy);
                    den += w;
                }
            out.at(x, y) = den < 1e-12 ? fallback : num / den;
        }
    return out;
}

} // namespace

TEST_CASE("region mean basics") {
    CHECK(region_mean(ScalarField(4, 3, 7.0), Mask(4, 3, true)) == 7.0);
    CHECK(region_mean(row_image({1, 2, 3, 4}), row_mask({1, 1, 0, 0})) == doctest::Approx(1.5));
    CHECK_THROWS_AS(region_mean(row_image({1, 2}), row_mask({0, 0})), EmptyRegion);
}

TEST_CASE("region mean per channel") {
    VectorImage img(std::vector<ScalarField>{row_image({10, 20}), row_image({30, 50})});
    const auto m = region_mean(img, row_mask({1, 1}));
    CHECK(m[0] == doctest::Approx(15.0));
    CHECK(m[1] == doctest::Approx(40.0));
}

TEST_CASE("region median rules") {
    CHECK(region_median(row_image({100, 150, 200}), row_mask({1, 1, 1})) == 150.0);
    CHECK(region_median(row_image({100, 200}), row_mask({1, 1})) == 150.0);
    CHECK(region_median(row_image({0, 0, 255, 255, 255}), row_mask({1, 1, 1, 1, 1})) == 255.0);
    CHECK_THROWS_AS(region_median(row_image({1}), row_mask({0})), EmptyRegion);
}

TEST_CASE("region statistics are permutation invariant") {
    const ScalarField a = row_image({5, 1, 9, 3, 7});
    const ScalarField b = row_image({9, 7, 5, 3, 1});
    const Mask all = row_mask({1, 1, 1, 1, 1});
    CHECK(region_mean(a, all) == doctest::Approx(region_mean(b, all)));
    CHECK(region_median(a, all) == region_median(b, all));
}

TEST_CASE("local weighted mean of a constant image is that constant") {
    Mask m(6, 5);
    m.at(1, 1) = 1;
    m.at(4, 3) = 1;
    const LocalMeanField f = local_weighted_mean(ScalarField(6, 5, 42.0), m, 1.0);
    for (double v : f.values.values) CHECK(v == doctest::Approx(42.0));
}

TEST_CASE("large-sigma local mean approaches the region mean") {
    Rng rng(9);
    ScalarField img(8, 6);
    for (auto& v : img.values) v = rng.uniform(0.0, 255.0);
    Mask m(8, 6);
    for (std::size_t i = 0; i < m.size(); ++i) m.values[i] = rng.uniform() < 0.5 ? 1 : 0;
    m.values[0] = 1;
    const double target = region_mean(img, m);
    const double diag = std::sqrt(8.0 * 8.0 + 6.0 * 6.0);
    const LocalMeanField f = local_weighted_mean(img, m, 1e5 * diag);
    for (double v : f.values.values) CHECK(v == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("local weighted mean matches the brute-force oracle") {
    ScalarField img(5, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) img.at(x, y) = x < 3 ? 50.0 : 200.0;
    Mask m(5, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) m.at(x, y) = (x + y) % 2 == 0 ? 1 : 0;
    const double fallback = region_mean(img, m);
    const LocalMeanField fast = local_weighted_mean(img, m, 1.0);
    const ScalarField slow = brute_local_mean(img, m, 1.0, fallback);
    for (std::size_t i = 0; i < fast.values.size(); ++i)
        CHECK(fast.values.values[i] == doctest::Approx(slow.values[i]).epsilon(1e-10));
}

TEST_CASE("local mean values stay within the masked intensity range") {
    Rng rng(13);
    ScalarField img(10, 10);
    for (auto& v : img.values) v = rng.uniform(0.0, 255.0);
    Mask m(10, 10);
    for (auto& v : m.values) v = rng.uniform() < 0.4 ? 1 : 0;
    m.values[55] = 1;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.values[i]) {
            lo = std::min(lo, img.values[i]);
            hi = std::max(hi, img.values[i]);
        }
    const LocalMeanField f = local_weighted_mean(img, m, 2.0);
    for (double v : f.values.values) {
        CHECK(v >= lo - 1e-9);
        CHECK(v <= hi + 1e-9);
    }
}

TEST_CASE("empty mask is rejected") {
    CHECK_THROWS_AS(local_weighted_mean(ScalarField(4, 4, 1.0), Mask(4, 4), 1.0), EmptyRegion);
    CHECK_THROWS_AS(local_weighted_mean(ScalarField(4, 4, 1.0), Mask(4, 4, true), 0.0),
                    NonPositiveSigma);
}

TEST_CASE("tiny-sigma full mean approximates the image") {
    Rng rng(21);
    ScalarField img(9, 9);
    for (auto& v : img.values) v = rng.uniform(0.0, 255.0);
    const LocalMeanField f = local_full_mean(img, 0.1);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(std::abs(f.values.values[i] - img.values[i]) < 1e-3);
}

TEST_CASE("full-domain local mean equals the convolution ratio") {
    ScalarField img(11, 7);
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 11; ++x) img.at(x, y) = x < 5 ? 30.0 : 220.0; // step edge
    const double sigma = 2.0;
    const GaussianKernel k =
        gaussian_kernel(sigma, std::min(static_cast<int>(std::ceil(4.0 * sigma)), 10));
    const ScalarField num = convolve_zero_pad(img, k);
    const ScalarField den = convolve_zero_pad(ScalarField(11, 7, 1.0), k);
    const LocalMeanField f = local_full_mean(img, sigma);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(f.values.values[i] == doctest::Approx(num.values[i] / den.values[i]).epsilon(1e-9));
}
