#include <doctest.h>

#include <cmath>

#include "levelcurve/kernel.hpp"
#include "levelcurve/rng.hpp"

using namespace levelcurve;

namespace {

// Direct double-loop 2-D convolution with replicate padding.
ScalarField brute_convolve_replicate(const ScalarField& f, const GaussianKernel& k) {
    ScalarField out(f.width, f.height);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            double acc = 0.0;
            for (int j = -k.radius; j <= k.radius; ++j)
                for (int i = -k.radius; i <= k.radius; ++i) {
                    const int sx = std::clamp(x - i, 0, f.width - 1);
                    const int sy = std::clamp(y - j, 0, f.height - 1);
                    acc += k.tap(i) * k.tap(j) * f.at(sx, sy);
                }
            out.at(x, y) = acc;
        }
    return out;
}

ScalarField brute_convolve_zero(const ScalarField& f, const GaussianKernel& k) {
    ScalarField out(f.width, f.height);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            double acc = 0.0;
            for (int j = -k.radius; j <= k.radius; ++j)
                for (int i = -k.radius; i <= k.radius; ++i) {
                    const int sx = x - i;
                    const int sy = y - j;
                    if (sx < 0 || sx >= f.width || sy < 0 || sy >= f.height) continue;
                    acc += k.tap(i) * k.tap(j) * f.at(sx, sy);
                }
            out.at(x, y) = acc;
        }
    return out;
}

double two_d_tap_sum(const GaussianKernel& k) {
    double s = 0.0;
    for (int j = -k.radius; j <= k.radius; ++j)
        for (int i = -k.radius; i <= k.radius; ++i) s += k.tap(i) * k.tap(j);
    return s;
}

} // namespace

TEST_CASE("gaussian kernel is normalized and symmetric") {
    const GaussianKernel k = gaussian_kernel(0.5, 2);
    CHECK(k.radius == 2);
    CHECK(two_d_tap_sum(k) == doctest::Approx(1.0).epsilon(1e-9));
    for (int o = 1; o <= k.radius; ++o) CHECK(k.tap(o) == k.tap(-o));
}

TEST_CASE("default radius is ceil(4 sigma)") {
    CHECK(gaussian_kernel(1.5).radius == 6);
    CHECK(gaussian_kernel(0.1).radius == 1);
    CHECK(gaussian_kernel(30.0).radius == 120);
}

TEST_CASE("non-positive sigma is rejected") {
    CHECK_THROWS_AS(gaussian_kernel(-1.0), NonPositiveSigma);
    CHECK_THROWS_AS(gaussian_kernel(0.0), NonPositiveSigma);
}

TEST_CASE("kernel normalization holds across sigmas") {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const double sigma = rng.uniform(0.05, 40.0);
        CHECK(two_d_tap_sum(gaussian_kernel(sigma)) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("constant fields are fixed points of convolution") {
    const ScalarField f(9, 7, 7.0);
    const ScalarField out = convolve(f, gaussian_kernel(1.5));
    for (double v : out.values) CHECK(v == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("unit impulse reproduces the kernel taps") {
    const GaussianKernel k = gaussian_kernel(1.0);
    ScalarField f(17, 17, 0.0);
    f.at(8, 8) = 1.0;
    const ScalarField out = convolve(f, k);
    for (int j = -k.radius; j <= k.radius; ++j)
        for (int i = -k.radius; i <= k.radius; ++i)
            CHECK(out.at(8 + i, 8 + j) == doctest::Approx(k.tap(i) * k.tap(j)).epsilon(1e-12));
}

TEST_CASE("separable convolution matches the double-loop oracle") {
    Rng rng(42);
    ScalarField f(3, 3);
    for (auto& v : f.values) v = rng.uniform(0.0, 255.0);
    const GaussianKernel k = gaussian_kernel(0.5);
    const ScalarField fast = convolve(f, k);
    const ScalarField slow = brute_convolve_replicate(f, k);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(fast.values[i] == doctest::Approx(slow.values[i]).epsilon(1e-12));
}

TEST_CASE("replicate and zero-padded convolutions match their oracles on larger fields") {
    Rng rng(11);
    ScalarField f(13, 9);
    for (auto& v : f.values) v = rng.uniform(0.0, 255.0);
    const GaussianKernel k = gaussian_kernel(1.7);

    const ScalarField rep = convolve(f, k);
    const ScalarField rep_oracle = brute_convolve_replicate(f, k);
    const ScalarField zero = convolve_zero_pad(f, k);
    const ScalarField zero_oracle = brute_convolve_zero(f, k);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(rep.values[i] == doctest::Approx(rep_oracle.values[i]).epsilon(1e-10));
        CHECK(zero.values[i] == doctest::Approx(zero_oracle.values[i]).epsilon(1e-10));
    }
}
