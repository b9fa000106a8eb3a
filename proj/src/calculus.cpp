#include "levelcurve/calculus.hpp"

#include <cmath>

namespace levelcurve {

namespace {

// Central difference in the interior, one-sided at the borders; zero when the
// field is a single pixel wide in that direction.
double diff_x(const ScalarField& f, int x, int y) {
    if (f.width == 1) return 0.0;
    if (x == 0) return f.at(1, y) - f.at(0, y);
    if (x == f.width - 1) return f.at(x, y) - f.at(x - 1, y);
    return 0.5 * (f.at(x + 1, y) - f.at(x - 1, y));
}

double diff_y(const ScalarField& f, int x, int y) {
    if (f.height == 1) return 0.0;
    if (y == 0) return f.at(x, 1) - f.at(x, 0);
    if (y == f.height - 1) return f.at(x, y) - f.at(x, y - 1);
    return 0.5 * (f.at(x, y + 1) - f.at(x, y - 1));
}

} // namespace

ScalarField gradient_magnitude(const ScalarField& field) {
    ScalarField out(field.width, field.height);
    for (int y = 0; y < field.height; ++y)
        for (int x = 0; x < field.width; ++x) {
            const double gx = diff_x(field, x, y);
            const double gy = diff_y(field, x, y);
            out.at(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    return out;
}

ScalarField curvature(const ScalarField& phi) {
    const double floor = 1e-8;
    ScalarField nx(phi.width, phi.height);
    ScalarField ny(phi.width, phi.height);
    for (int y = 0; y < phi.height; ++y)
        for (int x = 0; x < phi.width; ++x) {
            const double gx = diff_x(phi, x, y);
            const double gy = diff_y(phi, x, y);
            const double norm = std::sqrt(gx * gx + gy * gy) + floor;
            nx.at(x, y) = gx / norm;
            ny.at(x, y) = gy / norm;
        }
    ScalarField out(phi.width, phi.height);
    for (int y = 0; y < phi.height; ++y)
        for (int x = 0; x < phi.width; ++x)
            out.at(x, y) = diff_x(nx, x, y) + diff_y(ny, x, y);
    return out;
}

} // namespace levelcurve
