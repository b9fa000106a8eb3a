#pragma once

#include "levelcurve/field.hpp"

namespace levelcurve {

/// Step function with H(0) = 1, so the zero level set belongs to the
/// foreground {phi >= 0}.
inline double heaviside(double z) { return z >= 0.0 ? 1.0 : 0.0; }

/// Smooth approximation of the Dirac delta: (1/pi) * eps / (eps^2 + z^2).
/// Throws NonPositiveEps.
double dirac_eps(double z, double eps);

/// Signed field whose zero level set is the contour; foreground is
/// {phi >= 0}. rho is the amplitude restored by each binarization step.
struct LevelSetField {
    ScalarField phi;
    double rho = 1.0;

    Mask mask() const { return threshold_mask(phi, 0.0); }
};

/// Binary initialization: +rho strictly inside the rectangle, 0 on its
/// one-pixel boundary ring, -rho outside. Throws RectOutOfBounds.
LevelSetField init_levelset_rect(int width, int height, const Rect& rect, double rho);

/// phi <- rho * (H(phi) - H(-phi)), i.e. the three-valued {-rho, 0, +rho}
/// snap. The foreground mask {phi >= 0} is preserved pixelwise.
void binarize_levelset(LevelSetField& ls);

} // namespace levelcurve
