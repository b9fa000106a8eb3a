#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "levelcurve/errors.hpp"

namespace levelcurve {

/// W x H raster of real values, row-major. Intensities live in [0,255] for
/// 8-bit images; derived fields (level sets, speeds) are unbounded.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw ValidationError("field dimensions must be >= 1");
    }

    double& at(int x, int y) {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return values[static_cast<std::size_t>(y) * width + x];
    }
    double at(int x, int y) const {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return values[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t size() const { return values.size(); }
    bool same_dims(const ScalarField& o) const { return width == o.width && height == o.height; }

    bool operator==(const ScalarField& o) const = default;
};

/// Binary pixel mask with the same indexing as ScalarField.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;

    Mask() = default;
    Mask(int w, int h, bool fill = false)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    bool at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x] != 0; }

    std::size_t size() const { return values.size(); }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : values) n += (v != 0);
        return n;
    }

    Mask complement() const {
        Mask out = *this;
        for (auto& v : out.values) v = v ? 0 : 1;
        return out;
    }

    bool operator==(const Mask& o) const = default;
};

/// Multi-channel raster (D planes of identical dimensions). D = 1 wraps a
/// plain scalar image so every speed model shares one interface; D = 3 covers
/// the RGB experiments.
struct VectorImage {
    std::vector<ScalarField> channels;

    VectorImage() = default;
    explicit VectorImage(ScalarField plane) { channels.push_back(std::move(plane)); }
    explicit VectorImage(std::vector<ScalarField> planes) : channels(std::move(planes)) {
        if (channels.empty()) throw ValidationError("vector image needs at least one channel");
        for (const auto& c : channels)
            if (!c.same_dims(channels.front())) throw DimMismatch("channel dimensions differ");
    }

    int width() const { return channels.front().width; }
    int height() const { return channels.front().height; }
    int dim() const { return static_cast<int>(channels.size()); }

    const ScalarField& plane(int i = 0) const { return channels[static_cast<std::size_t>(i)]; }

    /// Intensity vector at one pixel.
    std::vector<double> pixel(int x, int y) const {
        std::vector<double> v(channels.size());
        for (std::size_t i = 0; i < channels.size(); ++i) v[i] = channels[i].at(x, y);
        return v;
    }

    bool same_dims(const ScalarField& f) const {
        return width() == f.width && height() == f.height;
    }
};

/// Axis-aligned pixel rectangle, half-open: x in [x, x+w), y in [y, y+h).
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool inside(int domain_w, int domain_h) const {
        return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= domain_w && y + h <= domain_h;
    }
};

inline Mask threshold_mask(const ScalarField& f, double level = 0.0) {
    Mask m(f.width, f.height);
    for (std::size_t i = 0; i < f.size(); ++i) m.values[i] = f.values[i] >= level ? 1 : 0;
    return m;
}

} // namespace levelcurve
