#include <doctest.h>

#include <cmath>

#include "levelcurve/levelset.hpp"
#include "levelcurve/rng.hpp"

using namespace levelcurve;

TEST_CASE("heaviside puts the zero level in the foreground") {
    CHECK(heaviside(0.0) == 1.0);
    CHECK(heaviside(-0.001) == 0.0);
    CHECK(heaviside(5.0) == 1.0);
}

TEST_CASE("regularized dirac values") {
    const double pi = 3.14159265358979323846;
    CHECK(dirac_eps(0.0, 1.0) == doctest::Approx(1.0 / pi));
    CHECK(dirac_eps(2.0, 2.0) == doctest::Approx(1.0 / (2.0 * pi * 2.0)));
    CHECK(dirac_eps(3.5, 1.2) == dirac_eps(-3.5, 1.2));
    CHECK_THROWS_AS(dirac_eps(0.0, 0.0), NonPositiveEps);
    CHECK_THROWS_AS(dirac_eps(0.0, -1.0), NonPositiveEps);
}

TEST_CASE("dirac integrates to one") {
    // Trapezoid over [-1000 eps, 1000 eps].
    for (double eps : {0.5, 1.0, 3.0}) {
        const int n = 2000000;
        const double a = -1000.0 * eps, b = 1000.0 * eps;
        const double h = (b - a) / n;
        double acc = 0.5 * (dirac_eps(a, eps) + dirac_eps(b, eps));
        for (int i = 1; i < n; ++i) acc += dirac_eps(a + i * h, eps);
        acc *= h;
        CHECK(acc == doctest::Approx(1.0).epsilon(1e-2));
    }
}

TEST_CASE("rect initialization: interior, boundary ring, exterior") {
    const LevelSetField ls = init_levelset_rect(10, 10, Rect{2, 2, 5, 5}, 1.0);
    int zeros = 0, plus = 0, minus = 0;
    for (double v : ls.phi.values) {
        if (v == 0.0) ++zeros;
        else if (v == 1.0) ++plus;
        else if (v == -1.0) ++minus;
    }
    CHECK(zeros == 16); // perimeter of a 5x5 block
    CHECK(plus == 9);
    CHECK(minus == 100 - 25);
}

TEST_CASE("rect initialization: full domain minus border") {
    const LevelSetField ls = init_levelset_rect(8, 6, Rect{0, 0, 8, 6}, 2.5);
    for (int y = 1; y < 5; ++y)
        for (int x = 1; x < 7; ++x) CHECK(ls.phi.at(x, y) == 2.5);
    CHECK(ls.phi.at(0, 0) == 0.0);
}

TEST_CASE("rect outside the domain is rejected") {
    CHECK_THROWS_AS(init_levelset_rect(10, 10, Rect{6, 6, 5, 5}, 1.0), RectOutOfBounds);
    CHECK_THROWS_AS(init_levelset_rect(10, 10, Rect{-1, 0, 5, 5}, 1.0), RectOutOfBounds);
}

TEST_CASE("binarize snaps to the three-valued form") {
    LevelSetField ls;
    ls.rho = 2.0;
    ls.phi = ScalarField(2, 1);
    ls.phi.at(0, 0) = -3.0;
    ls.phi.at(1, 0) = 0.2;
    binarize_levelset(ls);
    CHECK(ls.phi.at(0, 0) == -2.0);
    CHECK(ls.phi.at(1, 0) == 2.0);

    ls.phi.at(0, 0) = 0.0;
    binarize_levelset(ls);
    CHECK(ls.phi.at(0, 0) == 0.0); // rho * (H(0) - H(-0)) = 0
}

TEST_CASE("binarize preserves the foreground mask and is idempotent") {
    Rng rng(3);
    LevelSetField ls;
    ls.rho = 1.5;
    ls.phi = ScalarField(12, 9);
    for (auto& v : ls.phi.values) v = rng.uniform(-4.0, 4.0);
    const Mask before = ls.mask();
    binarize_levelset(ls);
    CHECK(ls.mask() == before);
    const ScalarField once = ls.phi;
    binarize_levelset(ls);
    CHECK(ls.phi == once); // all values nonzero almost surely
}
