#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "levelcurve/field.hpp"

namespace levelcurve {

/// One painted shape of a synthetic benchmark image.
struct SynthShape {
    enum class Kind { rect, disc };
    Kind kind = Kind::rect;
    // rect: x, y, w, h   disc: cx, cy, r (fourth value unused)
    int a = 0, b = 0, c = 0, d = 0;
    double intensity = 0.0;

    static SynthShape rect(int x, int y, int w, int h, double intensity) {
        return {Kind::rect, x, y, w, h, intensity};
    }
    static SynthShape disc(int cx, int cy, int r, double intensity) {
        return {Kind::disc, cx, cy, r, 0, intensity};
    }
};

struct SynthSpec {
    int width = 0;
    int height = 0;
    double background = 0.0;
    std::vector<SynthShape> shapes;
    /// Linear illumination drift: ramp_x * x / (width - 1) is added to every
    /// pixel after painting, then the image is clamped to [0, 255]. Models
    /// intensity inhomogeneity; zero by default.
    double ramp_x = 0.0;
};

/// Paint the shapes over the background; the truth mask is their union.
/// Throws ShapeOutOfBounds when a shape leaves the canvas.
std::pair<ScalarField, Mask> gen_synthetic(const SynthSpec& spec);

/// Named benchmark layouts. Throws ValidationError for unknown names.
SynthSpec synth_preset(const std::string& name);
std::vector<std::string> synth_preset_names();

/// Flat key=value description of a SynthSpec ('#' comments, unknown keys are
/// hard errors). Keys: width, height, background, ramp_x, and one `shape`
/// line per shape: `shape = rect x y w h intensity` or
/// `shape = disc cx cy r intensity`.
SynthSpec parse_synth_spec(const std::string& text);
SynthSpec load_synth_spec(const std::string& path);

/// I + N(0, sd^2) per pixel, clamped to [0, 255]; sd = 0 is the identity.
ScalarField add_gaussian_noise(const ScalarField& image, double sd, std::uint32_t seed);

/// Each pixel independently replaced by 0 or 255 (equal odds) with
/// probability `density`.
ScalarField add_salt_pepper(const ScalarField& image, double density, std::uint32_t seed);

} // namespace levelcurve
