#pragma once

#include <vector>

#include "levelcurve/field.hpp"

namespace levelcurve {

/// Truncated, renormalized separable Gaussian. The 1-D taps sum to one, so
/// the implied 2-D kernel (outer product) integrates to one as well.
struct GaussianKernel {
    double sigma = 0.0;
    int radius = 0;
    std::vector<double> taps; // size 2*radius+1, symmetric about the center

    double tap(int offset) const { return taps[static_cast<std::size_t>(offset + radius)]; }
};

/// Build g_sigma truncated at `radius` taps per side. The default radius is
/// ceil(4*sigma); a smaller explicit radius is allowed and renormalized.
/// Throws NonPositiveSigma.
GaussianKernel gaussian_kernel(double sigma, int radius = -1);

/// Separable 2-D convolution with replicate (Neumann) border handling.
/// Constant fields are exact fixed points.
ScalarField convolve(const ScalarField& field, const GaussianKernel& kernel);

/// Separable 2-D convolution where everything outside the domain counts as
/// zero. This is the accumulation used by the masked ratio forms of the local
/// regional descriptors, where the sums run over domain pixels only.
ScalarField convolve_zero_pad(const ScalarField& field, const GaussianKernel& kernel);

} // namespace levelcurve
