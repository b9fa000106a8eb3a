#include <doctest.h>

#include <cmath>

#include "levelcurve/calculus.hpp"
#include "levelcurve/rng.hpp"

using namespace levelcurve;

TEST_CASE("gradient magnitude of constant and planar fields") {
    const ScalarField c(7, 5, 3.25);
    for (double v : gradient_magnitude(c).values) CHECK(v == 0.0);

    ScalarField plane(9, 9);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x) plane.at(x, y) = 3.0 * x;
    const ScalarField g = gradient_magnitude(plane);
    for (double v : g.values) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("gradient magnitude matches the stencil oracle on a random field") {
    Rng rng(5);
    ScalarField f(5, 5);
    for (auto& v : f.values) v = rng.uniform(-10.0, 10.0);
    const ScalarField g = gradient_magnitude(f);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
            double gx, gy;
            if (x == 0) gx = f.at(1, y) - f.at(0, y);
            else if (x == 4) gx = f.at(4, y) - f.at(3, y);
            else gx = 0.5 * (f.at(x + 1, y) - f.at(x - 1, y));
            if (y == 0) gy = f.at(x, 1) - f.at(x, 0);
            else if (y == 4) gy = f.at(x, 4) - f.at(x, 3);
            else gy = 0.5 * (f.at(x, y + 1) - f.at(x, y - 1));
            CHECK(g.at(x, y) == doctest::Approx(std::sqrt(gx * gx + gy * gy)));
        }
}

TEST_CASE("gradient magnitude is nonnegative") {
    Rng rng(6);
    ScalarField f(8, 8);
    for (auto& v : f.values) v = rng.uniform(-100.0, 100.0);
    for (double v : gradient_magnitude(f).values) CHECK(v >= 0.0);
}

TEST_CASE("curvature of flat fields is zero") {
    ScalarField plane(9, 9);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x) plane.at(x, y) = 2.0 * x - y;
    const ScalarField k = curvature(plane);
    for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 7; ++x) CHECK(std::abs(k.at(x, y)) < 1e-6);

    const ScalarField c(6, 6, 4.0);
    for (double v : curvature(c).values) CHECK(v == 0.0); // guarded division
}

TEST_CASE("curvature of a signed-distance circle is 1/r near the circle") {
    for (const int r : {10, 20}) {
        const int n = 2 * r + 21;
        const double cx = (n - 1) / 2.0, cy = (n - 1) / 2.0;
        // Signed distance, positive outside: div(grad phi/|grad phi|) = 1/dist.
        ScalarField phi(n, n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                phi.at(x, y) = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy)) - r;
        const ScalarField k = curvature(phi);
        // Ring of pixels within one pixel of the circle.
        for (int y = 1; y < n - 1; ++y)
            for (int x = 1; x < n - 1; ++x)
                if (std::abs(phi.at(x, y)) <= 1.0)
                    CHECK(k.at(x, y) == doctest::Approx(1.0 / r).epsilon(0.10));
    }
}
