#include "levelcurve/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levelcurve/rng.hpp"

namespace levelcurve {

namespace {

bool shape_inside(const SynthShape& s, int w, int h) {
    switch (s.kind) {
    case SynthShape::Kind::rect:
        return Rect{s.a, s.b, s.c, s.d}.inside(w, h);
    case SynthShape::Kind::disc:
        return s.c >= 1 && s.a - s.c >= 0 && s.b - s.c >= 0 && s.a + s.c < w && s.b + s.c < h;
    }
    return false;
}

void paint(const SynthShape& s, ScalarField& img, Mask& truth) {
    if (s.kind == SynthShape::Kind::rect) {
        for (int y = s.b; y < s.b + s.d; ++y)
            for (int x = s.a; x < s.a + s.c; ++x) {
                img.at(x, y) = s.intensity;
                truth.at(x, y) = 1;
            }
    } else {
        const std::int64_t r2 = static_cast<std::int64_t>(s.c) * s.c;
        for (int y = s.b - s.c; y <= s.b + s.c; ++y)
            for (int x = s.a - s.c; x <= s.a + s.c; ++x) {
                const std::int64_t dx = x - s.a;
                const std::int64_t dy = y - s.b;
                if (dx * dx + dy * dy <= r2) {
                    img.at(x, y) = s.intensity;
                    truth.at(x, y) = 1;
                }
            }
    }
}

} // namespace

std::pair<ScalarField, Mask> gen_synthetic(const SynthSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw ValidationError("canvas dimensions must be >= 1");
    ScalarField img(spec.width, spec.height, spec.background);
    Mask truth(spec.width, spec.height);
    for (const auto& s : spec.shapes) {
        if (!shape_inside(s, spec.width, spec.height)) throw ShapeOutOfBounds();
        paint(s, img, truth);
    }
    if (spec.ramp_x != 0.0 && spec.width > 1) {
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x)
                img.at(x, y) = std::clamp(
                    img.at(x, y) + spec.ramp_x * x / static_cast<double>(spec.width - 1), 0.0,
                    255.0);
    }
    return {std::move(img), std::move(truth)};
}

SynthSpec synth_preset(const std::string& name) {
    SynthSpec s;
    if (name == "fig4_1") {
        // 123x80, multi-tone foreground of vertical bands over a dark
        // background. The 100 tone dominates the foreground mass (a wide band
        // plus three narrow fingers), so the inside median sits well below
        // the inside mean; the fingers are the narrow regions that separate
        // quadratic from normalized pressure forces under noise.
        s.width = 123;
        s.height = 80;
        s.background = 30.0;
        const int y0 = 14, fg_h = 52;
        s.shapes.push_back(SynthShape::rect(22, y0, 32, fg_h, 100.0));
        int x = 59;
        for (int i = 0; i < 3; ++i) {
            s.shapes.push_back(SynthShape::rect(x, y0, 4, fg_h, 100.0));
            x += 9;
        }
        s.shapes.push_back(SynthShape::rect(x, y0, 8, fg_h, 150.0));
        s.shapes.push_back(SynthShape::rect(x + 8, y0, 16, fg_h, 200.0));
    } else if (name == "fig6_1") {
        // 90x122, three discs of 100/150/200 on a 120 background; the
        // 100-tone disc carries most of the foreground area.
        s.width = 90;
        s.height = 122;
        s.background = 120.0;
        s.shapes.push_back(SynthShape::disc(32, 36, 17, 100.0));
        s.shapes.push_back(SynthShape::disc(64, 64, 12, 150.0));
        s.shapes.push_back(SynthShape::disc(36, 92, 12, 200.0));
    } else if (name == "fig7_3a") {
        // 140x100, six vertical bands of 80..230 over a dark background.
        s.width = 140;
        s.height = 100;
        s.background = 30.0;
        const double tones[6] = {80, 100, 140, 170, 200, 230};
        const int x0 = 13, y0 = 18, band_w = 19, fg_h = 64;
        for (int i = 0; i < 6; ++i)
            s.shapes.push_back(SynthShape::rect(x0 + i * band_w, y0, band_w, fg_h, tones[i]));
    } else if (name == "bin64") {
        // 64x61 two-tone image: one bright disc.
        s.width = 64;
        s.height = 61;
        s.background = 50.0;
        s.shapes.push_back(SynthShape::disc(32, 30, 18, 200.0));
    } else if (name == "inhom127") {
        // 127x96 two-tone image; a linear illumination ramp is added on top,
        // which makes the global intensity ranges of the two regions overlap.
        s.width = 127;
        s.height = 96;
        s.background = 60.0;
        s.ramp_x = 120.0;
        s.shapes.push_back(SynthShape::disc(52, 48, 27, 130.0));
    } else if (name == "two100") {
        // 100x100, two bright objects on a dark background.
        s.width = 100;
        s.height = 100;
        s.background = 70.0;
        s.shapes.push_back(SynthShape::disc(32, 36, 16, 160.0));
        s.shapes.push_back(SynthShape::disc(69, 64, 12, 160.0));
    } else {
        throw ValidationError("unknown synthetic preset: " + name);
    }
    return s;
}

std::vector<std::string> synth_preset_names() {
    return {"fig4_1", "fig6_1", "fig7_3a", "bin64", "inhom127", "two100"};
}

namespace {

std::string trim_ws(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

SynthSpec parse_synth_spec(const std::string& text) {
    SynthSpec spec;
    std::istringstream ss(text);
    std::string line;
    bool have_dims = false;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim_ws(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("spec line is not key = value: " + line);
        const std::string key = trim_ws(line.substr(0, eq));
        const std::string value = trim_ws(line.substr(eq + 1));
        try {
            if (key == "width") spec.width = std::stoi(value);
            else if (key == "height") spec.height = std::stoi(value);
            else if (key == "background") spec.background = std::stod(value);
            else if (key == "ramp_x") spec.ramp_x = std::stod(value);
            else if (key == "shape") {
                std::istringstream vs(value);
                std::string kind;
                vs >> kind;
                int a, b, c;
                double intensity;
                if (kind == "rect") {
                    int d;
                    if (!(vs >> a >> b >> c >> d >> intensity))
                        throw ValidationError("shape rect needs: x y w h intensity");
                    spec.shapes.push_back(SynthShape::rect(a, b, c, d, intensity));
                } else if (kind == "disc") {
                    if (!(vs >> a >> b >> c >> intensity))
                        throw ValidationError("shape disc needs: cx cy r intensity");
                    spec.shapes.push_back(SynthShape::disc(a, b, c, intensity));
                } else {
                    throw ValidationError("shape kind must be rect or disc: " + kind);
                }
            } else {
                throw ValidationError("unknown spec key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ValidationError("bad value for '" + key + "': " + value);
        }
        if (key == "width" || key == "height") have_dims = true;
    }
    if (!have_dims || spec.width < 1 || spec.height < 1)
        throw ValidationError("spec must set width and height");
    for (const auto& s : spec.shapes)
        if (s.intensity < 0.0 || s.intensity > 255.0)
            throw ValidationError("shape intensity must be in [0, 255]");
    return spec;
}

SynthSpec load_synth_spec(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open spec: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_synth_spec(ss.str());
}

ScalarField add_gaussian_noise(const ScalarField& image, double sd, std::uint32_t seed) {
    if (sd < 0.0) throw ValidationError("noise sd must be >= 0");
    ScalarField out = image;
    if (sd == 0.0) return out;
    Rng rng(seed);
    for (auto& v : out.values) v = std::clamp(v + sd * rng.normal(), 0.0, 255.0);
    return out;
}

ScalarField add_salt_pepper(const ScalarField& image, double density, std::uint32_t seed) {
    if (density < 0.0 || density > 1.0) throw ValidationError("density must be in [0, 1]");
    ScalarField out = image;
    Rng rng(seed);
    for (auto& v : out.values)
        if (rng.uniform() < density) v = rng.uniform() < 0.5 ? 0.0 : 255.0;
    return out;
}

} // namespace levelcurve
