#pragma once

#include "levelcurve/field.hpp"

namespace levelcurve {

/// ||grad phi|| with central differences in the interior and one-sided
/// differences on the borders. Constant fields map to zero everywhere.
ScalarField gradient_magnitude(const ScalarField& field);

/// div(grad phi / ||grad phi||), the mean curvature of the level sets.
/// The norm is guarded by an additive 1e-8 floor, so constant and planar
/// fields give zero instead of 0/0.
ScalarField curvature(const ScalarField& phi);

} // namespace levelcurve
