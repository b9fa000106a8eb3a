#pragma once

#include <optional>
#include <vector>

#include "levelcurve/field.hpp"
#include "levelcurve/kernel.hpp"

namespace levelcurve {

/// Summary statistics of one region of a scalar image.
struct RegionDescriptor {
    double mean = 0.0;
    double median = 0.0;
    std::size_t pixel_count = 0;
};

/// Arithmetic mean of the masked intensities. Throws EmptyRegion.
double region_mean(const ScalarField& image, const Mask& mask);

/// Per-channel means of a vector image over one mask. Throws EmptyRegion.
std::vector<double> region_mean(const VectorImage& image, const Mask& mask);

/// Median of the masked intensities; an even count averages the two middle
/// values. Throws EmptyRegion.
double region_median(const ScalarField& image, const Mask& mask);

RegionDescriptor region_descriptor(const ScalarField& image, const Mask& mask);

/// One Gaussian-weighted mean per pixel, restricted to a region.
struct LocalMeanField {
    ScalarField values;
    double sigma = 0.0;
};

/// Local weighted mean of Eq-style ratio form: per pixel x,
/// sum_{y in mask} g_sigma(x-y) I(y) / sum_{y in mask} g_sigma(x-y),
/// with both sums running over domain pixels only. Pixels whose weighted mask
/// mass falls below 1e-12 fall back to the region's global mean. Throws
/// EmptyRegion when the whole mask is empty, NonPositiveSigma for sigma <= 0.
LocalMeanField local_weighted_mean(const ScalarField& image, const Mask& mask, double sigma);

/// Same ratio with mask = the whole domain.
LocalMeanField local_full_mean(const ScalarField& image, double sigma);

} // namespace levelcurve
