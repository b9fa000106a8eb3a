#include "levelcurve/pnm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace levelcurve {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& is) {
    std::string tok;
    int c;
    while ((c = is.get()) != EOF) {
        if (c == '#') {
            while ((c = is.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_positive(const std::string& tok, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw CorruptHeader(std::string("bad ") + what + " field");
    const long v = std::stol(tok);
    if (v < 1 || v > 1 << 20) throw CorruptHeader(std::string("bad ") + what + " value");
    return static_cast<int>(v);
}

} // namespace

VectorImage read_image(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);

    char m0 = 0, m1 = 0;
    is.get(m0);
    is.get(m1);
    if (!is || m0 != 'P') throw CorruptHeader("missing netpbm magic");
    if (m1 != '5' && m1 != '6')
        throw UnsupportedFormat(std::string("unsupported netpbm type P") + m1 +
                                " (only binary P5/P6)");
    const int channels = m1 == '5' ? 1 : 3;

    const int width = parse_positive(next_token(is), "width");
    const int height = parse_positive(next_token(is), "height");
    const std::string maxval_tok = next_token(is);
    if (maxval_tok.empty()) throw CorruptHeader("missing maxval");
    if (maxval_tok != "255") throw UnsupportedFormat("maxval " + maxval_tok + " (only 255)");
    // The single whitespace separating the header from the raster was already
    // consumed by the tokenizer.

    const std::size_t n = static_cast<std::size_t>(width) * height * channels;
    std::vector<unsigned char> raw(n);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) throw TruncatedData("raster data truncated");

    std::vector<ScalarField> planes(static_cast<std::size_t>(channels),
                                    ScalarField(width, height));
    std::size_t idx = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < channels; ++c)
                planes[static_cast<std::size_t>(c)].at(x, y) = static_cast<double>(raw[idx++]);
    return VectorImage(std::move(planes));
}

namespace {

unsigned char to_byte(double v) {
    return static_cast<unsigned char>(std::clamp(static_cast<int>(std::lround(v)), 0, 255));
}

void write_header(std::ofstream& os, const char* magic, int w, int h) {
    os << magic << "\n" << w << " " << h << "\n255\n";
}

} // namespace

void write_pgm(const std::string& path, const ScalarField& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_header(os, "P5", field.width, field.height);
    std::vector<unsigned char> raw(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) raw[i] = to_byte(field.values[i]);
    os.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!os) throw IoError("write failed: " + path);
}

void write_ppm(const std::string& path, const VectorImage& image) {
    if (image.dim() != 3) throw ValidationError("P6 output needs exactly 3 channels");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_header(os, "P6", image.width(), image.height());
    std::vector<unsigned char> raw(static_cast<std::size_t>(image.width()) * image.height() * 3);
    std::size_t idx = 0;
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            for (int c = 0; c < 3; ++c)
                raw[idx++] = to_byte(image.channels[static_cast<std::size_t>(c)].at(x, y));
    os.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!os) throw IoError("write failed: " + path);
}

void write_mask(const std::string& path, const Mask& mask) {
    ScalarField f(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.size(); ++i) f.values[i] = mask.values[i] ? 255.0 : 0.0;
    write_pgm(path, f);
}

Mask read_mask(const std::string& path) {
    const VectorImage img = read_image(path);
    if (img.dim() != 1) throw UnsupportedFormat("mask must be a single-channel PGM: " + path);
    Mask m(img.width(), img.height());
    for (std::size_t i = 0; i < m.size(); ++i) m.values[i] = img.plane(0).values[i] != 0.0 ? 1 : 0;
    return m;
}

} // namespace levelcurve
