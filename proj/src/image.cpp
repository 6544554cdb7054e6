#include "exprclone/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace exprclone {

RasterImage RasterImage::make(int width, int height, int channels, double fill) {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
        throw ImageError("make image: bad dimensions " + std::to_string(width) + "x" +
                         std::to_string(height) + "x" + std::to_string(channels));
    }
    RasterImage img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.samples.assign(static_cast<size_t>(width) * height * channels, fill);
    return img;
}

namespace {

// Reads the next header token, skipping whitespace and `#` comments.
std::string next_header_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

int header_int(std::istream& in, const std::string& path, const char* what) {
    const std::string tok = next_header_token(in);
    try {
        size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ImageError(path + ": bad " + what + " in header");
    }
}

} // namespace

RasterImage read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageError("cannot open image: " + path);

    const std::string magic = next_header_token(in);
    int channels = 0;
    if (magic == "P5") {
        channels = 1;
    } else if (magic == "P6") {
        channels = 3;
    } else {
        throw ImageError(path + ": unsupported format `" + magic + "` (need binary PGM/PPM)");
    }
    const int width = header_int(in, path, "width");
    const int height = header_int(in, path, "height");
    const int maxval = header_int(in, path, "maxval");
    if (width < 1 || height < 1) throw ImageError(path + ": bad dimensions");
    if (maxval != 255) throw ImageError(path + ": maxval must be 255, got " + std::to_string(maxval));
    // exactly one whitespace byte separates header from raster data; it was
    // consumed by the token reader already.

    const size_t count = static_cast<size_t>(width) * height * channels;
    std::vector<std::uint8_t> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (static_cast<size_t>(in.gcount()) != count) {
        throw ImageError(path + ": truncated raster data");
    }

    RasterImage img = RasterImage::make(width, height, channels);
    for (size_t i = 0; i < count; ++i) img.samples[i] = static_cast<double>(raw[i]);
    return img;
}

void write_image(const std::string& path, const RasterImage& img) {
    if (img.width < 1 || img.height < 1 || (img.channels != 1 && img.channels != 3)) {
        throw ImageError("write image: empty or malformed image");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageError("cannot write image: " + path);
    out << (img.channels == 1 ? "P5" : "P6") << "\n"
        << img.width << " " << img.height << "\n255\n";
    const size_t count = img.samples.size();
    std::vector<std::uint8_t> raw(count);
    for (size_t i = 0; i < count; ++i) {
        const double v = std::clamp(img.samples[i], 0.0, 255.0);
        raw[i] = static_cast<std::uint8_t>(std::llround(v));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(count));
    if (!out) throw ImageError("short write: " + path);
}

double luminance(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

RasterImage to_gray(const RasterImage& img) {
    if (img.channels == 1) return img;
    RasterImage out = RasterImage::make(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(x, y) = luminance(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
        }
    }
    return out;
}

RasterImage fit_to_dims(const RasterImage& img, int width, int height) {
    if (width < 1 || height < 1) throw ImageError("fit_to_dims: bad target dimensions");
    if (img.width == width && img.height == height) return img;

    // center crop
    const int crop_w = std::min(img.width, width);
    const int crop_h = std::min(img.height, height);
    const int off_x = (img.width - crop_w) / 2;
    const int off_y = (img.height - crop_h) / 2;

    // edge pad
    const int pad_left = (width - crop_w) / 2;
    const int pad_top = (height - crop_h) / 2;

    RasterImage out = RasterImage::make(width, height, img.channels);
    for (int y = 0; y < height; ++y) {
        const int sy = off_y + std::clamp(y - pad_top, 0, crop_h - 1);
        for (int x = 0; x < width; ++x) {
            const int sx = off_x + std::clamp(x - pad_left, 0, crop_w - 1);
            for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = img.at(sx, sy, c);
        }
    }
    return out;
}

} // namespace exprclone
