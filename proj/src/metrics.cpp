#include "levelcurve/metrics.hpp"

namespace levelcurve {

ConfusionCounts confusion(const Mask& mask, const Mask& truth) {
    if (mask.width != truth.width || mask.height != truth.height)
        throw DimMismatch("mask and truth dimensions differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const bool m = mask.values[i] != 0;
        const bool t = truth.values[i] != 0;
        if (m && t)
            ++c.tp;
        else if (m && !t)
            ++c.fp;
        else if (!m && t)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

PrfResult prf(const Mask& mask, const Mask& truth) {
    const ConfusionCounts c = confusion(mask, truth);
    PrfResult r;
    if (c.tp + c.fp == 0) {
        r.degenerate = true;
    } else {
        r.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    }
    if (c.tp + c.fn == 0) {
        r.degenerate = true;
    } else {
        r.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    }
    if (r.precision + r.recall == 0.0) {
        r.degenerate = true;
    } else {
        r.f_measure = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    }
    return r;
}

} // namespace levelcurve
