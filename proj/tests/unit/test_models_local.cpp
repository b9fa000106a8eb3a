#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levelcurve/calculus.hpp"
#include "levelcurve/kernel.hpp"
#include "levelcurve/models_global.hpp"
#include "levelcurve/models_local.hpp"
#include "levelcurve/rng.hpp"

using namespace levelcurve;

namespace {

ScalarField row_image(const std::vector<double>& v) {
    ScalarField f(static_cast<int>(v.size()), 1);
    f.values = v;
    return f;
}

LevelSetField phi_from_mask(const Mask& m, double rho = 1.0) {
    LevelSetField ls;
    ls.rho = rho;
    ls.phi = ScalarField(m.width, m.height);
    for (std::size_t i = 0; i < m.size(); ++i) ls.phi.values[i] = m.values[i] ? rho : -rho;
    return ls;
}

} // namespace

TEST_CASE("lrcv speed vanishes on constant images with equal weights") {
    const ScalarField img(6, 6, 80.0);
    Mask in(6, 6);
    for (int y = 2; y < 4; ++y)
        for (int x = 2; x < 4; ++x) in.at(x, y) = 1;
    const ScalarField s = lrcv_speed(img, phi_from_mask(in), LrcvParams{2.0, 1.0, 1.0});
    for (double v : s.values) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("lrcv reduces to chan-vese in the large-sigma limit") {
    Rng rng(17);
    ScalarField img(9, 7);
    for (auto& v : img.values) v = rng.uniform(0.0, 255.0);
    Mask in(9, 7);
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 4; ++x) in.at(x, y) = 1;
    const LevelSetField phi = phi_from_mask(in);

    const double diag = std::sqrt(9.0 * 9.0 + 7.0 * 7.0);
    const LrcvParams p{1e5 * diag, 1.0, 1.0};
    const ScalarField local = lrcv_speed(img, phi, p);
    const ScalarField global = cv_speed(img, phi, CvParams{});
    for (std::size_t i = 0; i < local.size(); ++i)
        CHECK(local.values[i] == doctest::Approx(global.values[i]).epsilon(1e-6));

    const double e_local = lrcv_energy(img, in, p);
    const double e_global = cv_energy(img, in, CvParams{});
    CHECK(e_local == doctest::Approx(e_global).epsilon(1e-6));
}

TEST_CASE("lrcv speed matches a per-pixel oracle on an inhomogeneous image") {
    ScalarField img(5, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) img.at(x, y) = 20.0 * x + 5.0 * y; // ramp
    Mask in(5, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 2; ++x) in.at(x, y) = 1;
    const LevelSetField phi = phi_from_mask(in);
    const LrcvParams p{1.5, 2.0, 3.0};
    const ScalarField s = lrcv_speed(img, phi, p);

    const ScalarField c_in = local_weighted_mean(img, in, p.sigma).values;
    const ScalarField c_out = local_weighted_mean(img, in.complement(), p.sigma).values;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double din = img.values[i] - c_in.values[i];
        const double dout = img.values[i] - c_out.values[i];
        CHECK(s.values[i] == doctest::Approx(-2.0 * din * din + 3.0 * dout * dout));
    }
}

TEST_CASE("lrcv energy cases") {
    const ScalarField c(4, 4, 50.0);
    Mask half(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 2; ++x) half.at(x, y) = 1;
    CHECK(lrcv_energy(c, half, LrcvParams{2.0, 1.0, 1.0}) == doctest::Approx(0.0));

    // Toy hand-sum.
    const ScalarField img = row_image({10, 30, 50, 60});
    Mask in(4, 1);
    in.values = {1, 1, 0, 0};
    const LrcvParams p{0.8, 1.0, 1.0};
    const ScalarField ci = local_weighted_mean(img, in, p.sigma).values;
    const ScalarField co = local_weighted_mean(img, in.complement(), p.sigma).values;
    double expected = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double d = img.values[i] - (in.values[i] ? ci.values[i] : co.values[i]);
        expected += d * d;
    }
    CHECK(lrcv_energy(img, in, p) == doctest::Approx(expected));
}

TEST_CASE("kde bandwidth is the mean nearest-neighbor distance") {
    CHECK(kde_bandwidth({0.0, 10.0, 20.0}) == doctest::Approx(10.0));
    CHECK(kde_bandwidth({5.0, 5.0, 5.0}) == 0.5); // floored
    CHECK_THROWS_AS(kde_bandwidth({1.0}), TooFewSamples);
}

TEST_CASE("kde density shape") {
    const KdeDensity d({100.0, 100.0, 100.0}, 5.0);
    double best_i = -1.0, best_v = -1.0;
    for (int i = 0; i <= 255; ++i) {
        const double v = d.at(i);
        if (v > best_v) {
            best_v = v;
            best_i = i;
        }
    }
    CHECK(best_i == 100.0);

    const KdeDensity sym({80.0, 120.0}, 7.0);
    for (double a : {5.0, 12.0, 31.0}) CHECK(sym.at(100.0 - a) == doctest::Approx(sym.at(100.0 + a)));
}

TEST_CASE("kde density equals the hand-evaluated kernel sum") {
    const std::vector<double> samples{10.0, 40.0, 90.0};
    const double bw = 12.0;
    const KdeDensity d(samples, bw);
    const double x = 0.0;
    double expected = 0.0;
    for (double s : samples) {
        const double u = (x - s) / bw;
        expected += std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
    }
    expected /= 3.0;
    CHECK(d.at(x) == doctest::Approx(expected));
}

TEST_CASE("kde density integrates to a constant independent of shift") {
    // Consistency: the literal kernel form integrates to sigma * |L| / |L|
    // regardless of where the samples sit.
    auto integral = [](const KdeDensity& d) {
        const double a = -10.0 * d.bandwidth(), b = 265.0;
        const int n = 20000;
        const double h = (b - a) / n;
        double acc = 0.5 * (d.at(a) + d.at(b));
        for (int i = 1; i < n; ++i) acc += d.at(a + i * h);
        return acc * h;
    };
    const KdeDensity d1({50.0, 60.0}, 4.0);
    const KdeDensity d2({150.0, 160.0}, 4.0);
    const double i1 = integral(d1);
    CHECK(i1 > 0.0);
    CHECK(i1 == doctest::Approx(integral(d2)).epsilon(1e-6));
}

TEST_CASE("kde fit uses one bandwidth per region") {
    const KdeModel m = kde_fit({0.0, 10.0, 20.0}, {100.0, 101.0});
    CHECK(m.fg.bandwidth() == doctest::Approx(10.0));
    CHECK(m.bg.bandwidth() == doctest::Approx(1.0));
    CHECK_THROWS_AS(kde_fit({1.0}, {2.0, 3.0}), TooFewSamples);
}

TEST_CASE("gmm fit separates two clusters") {
    Rng rng(4);
    std::vector<double> samples;
    for (int i = 0; i < 150; ++i) {
        samples.push_back(50.0 + rng.normal() * 3.0);
        samples.push_back(200.0 + rng.normal() * 3.0);
    }
    const GmmDensity g = gmm_fit(samples, 2, 11);
    REQUIRE(g.components().size() == 2);
    std::vector<double> means{g.components()[0].mean[0], g.components()[1].mean[0]};
    std::sort(means.begin(), means.end());
    CHECK(std::abs(means[0] - 50.0) <= 5.0);
    CHECK(std::abs(means[1] - 200.0) <= 5.0);
    double wsum = 0.0;
    for (const auto& c : g.components()) wsum += c.weight;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gmm with one component is the sample mean and variance") {
    const std::vector<double> samples{10.0, 20.0, 30.0, 40.0};
    const GmmDensity g = gmm_fit(samples, 1, 3);
    REQUIRE(g.components().size() == 1);
    CHECK(g.components()[0].mean[0] == doctest::Approx(25.0));
    CHECK(g.components()[0].var[0] == doctest::Approx(125.0)); // population variance
    CHECK(g.components()[0].weight == doctest::Approx(1.0));
}

TEST_CASE("gmm on identical samples floors the variance") {
    const std::vector<double> samples(20, 42.0);
    const GmmDensity g = gmm_fit(samples, 2, 9);
    for (const auto& c : g.components()) {
        CHECK(c.mean[0] == doctest::Approx(42.0));
        CHECK(c.var[0] == doctest::Approx(0.01));
    }
    CHECK_THROWS_AS(gmm_fit(std::vector<double>{1.0}, 2, 1), TooFewSamples);
}

TEST_CASE("EM log-likelihood never decreases") {
    Rng rng(6);
    std::vector<double> samples;
    for (int i = 0; i < 80; ++i) samples.push_back(rng.uniform(0.0, 255.0));
    const GmmDensity g = gmm_fit(samples, 2, 21);
    REQUIRE(g.ll_trace.size() >= 2);
    for (std::size_t i = 1; i < g.ll_trace.size(); ++i)
        CHECK(g.ll_trace[i] >= g.ll_trace[i - 1] - 1e-9 * (1.0 + std::abs(g.ll_trace[i - 1])));
}

TEST_CASE("log-likelihood speed basics") {
    const ScalarField img = row_image({50.0, 120.0, 200.0});
    const LevelSetField phi = phi_from_mask([&] {
        Mask m(3, 1);
        m.values = {1, 0, 0};
        return m;
    }());

    const KdeDensity same({100.0, 140.0}, 10.0);
    const ScalarField zero = loglik_speed(VectorImage(img), phi, same, same, 0.0);
    for (double v : zero.values) CHECK(v == doctest::Approx(0.0));

    const KdeDensity p_in({50.0, 55.0}, 5.0);
    const KdeDensity p_out({200.0, 205.0}, 5.0);
    const ScalarField s = loglik_speed(VectorImage(img), phi, p_in, p_out, 0.0);
    CHECK(s.values[0] > 0.0); // deep in the foreground mode
    CHECK(s.values[2] < 0.0);

    // Antisymmetry under swapping the densities at beta = 0.
    const ScalarField swapped = loglik_speed(VectorImage(img), phi, p_out, p_in, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(swapped.values[i] == doctest::Approx(-s.values[i]));

    // Matches the floored log-ratio oracle.
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double expected = std::log(std::max(p_in.at(img.values[i]), 1e-12)) -
                                std::log(std::max(p_out.at(img.values[i]), 1e-12));
        CHECK(s.values[i] == doctest::Approx(expected));
    }
}

TEST_CASE("loglik diagnostic equals speed minus the curvature term") {
    Rng rng(19);
    ScalarField img(6, 6);
    for (auto& v : img.values) v = rng.uniform(0.0, 255.0);
    Mask in(6, 6);
    for (int y = 2; y < 5; ++y)
        for (int x = 1; x < 4; ++x) in.at(x, y) = 1;
    const LevelSetField phi = phi_from_mask(in);

    auto p_in = std::make_shared<KdeDensity>(std::vector<double>{60.0, 80.0}, 8.0);
    auto p_out = std::make_shared<KdeDensity>(std::vector<double>{180.0, 220.0}, 8.0);
    const double beta = 2.5;
    LoglikModel model(p_in, p_out, beta, "kde");

    const ScalarField speed = model.speed(VectorImage(img), phi);
    const ScalarField diag = model.diagnostic(VectorImage(img));
    const ScalarField kappa = curvature(phi.phi);
    for (std::size_t i = 0; i < speed.size(); ++i)
        CHECK(diag.values[i] == doctest::Approx(speed.values[i] - beta * kappa.values[i]));
}
