#include "levelcurve/levelset.hpp"

#include <cmath>

namespace levelcurve {

double dirac_eps(double z, double eps) {
    if (!(eps > 0.0)) throw NonPositiveEps();
    const double pi = 3.14159265358979323846;
    return (1.0 / pi) * eps / (eps * eps + z * z);
}

LevelSetField init_levelset_rect(int width, int height, const Rect& rect, double rho) {
    if (!(rho > 0.0)) throw ValidationError("rho must be > 0");
    if (!rect.inside(width, height)) throw RectOutOfBounds();

    LevelSetField ls;
    ls.rho = rho;
    ls.phi = ScalarField(width, height, -rho);
    for (int y = rect.y; y < rect.y + rect.h; ++y) {
        for (int x = rect.x; x < rect.x + rect.w; ++x) {
            const bool boundary = x == rect.x || x == rect.x + rect.w - 1 || y == rect.y ||
                                  y == rect.y + rect.h - 1;
            ls.phi.at(x, y) = boundary ? 0.0 : rho;
        }
    }
    return ls;
}

void binarize_levelset(LevelSetField& ls) {
    for (auto& v : ls.phi.values) v = ls.rho * (heaviside(v) - heaviside(-v));
}

} // namespace levelcurve
