#pragma once

#include <array>
#include <vector>

#include "levelcurve/field.hpp"

namespace levelcurve {

/// 256-bin histogram over round(I) clamped to [0, 255].
std::array<std::int64_t, 256> histogram256(const ScalarField& image);

/// Otsu threshold: the integer t in [0, 255] maximizing the between-class
/// variance of the split {I <= t} / {I > t}; ties take the lowest t.
/// Throws ConstantImage when fewer than two histogram bins are occupied.
int otsu(const ScalarField& image);

struct MultiOtsuResult {
    std::vector<int> thresholds;  // ascending; class c is (t_{c-1}, t_c]
    std::vector<int> labels;      // per pixel, 0..t_count
};

/// Multi-level Otsu: the ordered threshold tuple maximizing the multi-class
/// between-class variance, found by exhaustive search over tuples with
/// cumulative-moment lookup tables. t_count = 1 reduces to otsu().
/// Throws ConstantImage when the image has <= t_count distinct bins.
MultiOtsuResult multi_otsu(const ScalarField& image, int t_count);

/// Foreground mask of the selected label classes.
Mask merge_classes(const MultiOtsuResult& result, int width, int height,
                   const std::vector<int>& classes);

} // namespace levelcurve
