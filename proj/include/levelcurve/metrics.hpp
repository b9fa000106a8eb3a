#pragma once

#include "levelcurve/field.hpp"

namespace levelcurve {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Throws DimMismatch.
ConfusionCounts confusion(const Mask& mask, const Mask& truth);

struct PrfResult {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    bool degenerate = false; // a zero denominator was forced to 0
};

/// Foreground-positive pixel metrics: P = tp/(tp+fp), R = tp/(tp+fn),
/// F = 2PR/(P+R). Zero denominators yield 0 with the degenerate flag set.
PrfResult prf(const Mask& mask, const Mask& truth);

} // namespace levelcurve
