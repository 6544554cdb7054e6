#pragma once

#include <string>
#include <vector>

#include "exprclone/error.hpp"
#include "exprclone/geometry.hpp"

namespace exprclone {

// Gray (1 channel) or RGB (3 channel) raster. Samples live on the 0..255
// scale but are kept as doubles so intermediate stages never quantize;
// rounding to 8 bits happens only when a file is written.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> samples; // row-major, channel-interleaved

    static RasterImage make(int width, int height, int channels, double fill = 0.0);

    double& at(int x, int y, int c = 0) {
        return samples[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return samples[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    ImageSize size() const { return {width, height}; }
};

// Binary PGM (P5) / PPM (P6), 8-bit, maxval 255, bit-exact round trips.
RasterImage read_image(const std::string& path);
void write_image(const std::string& path, const RasterImage& img);

// Luminance 0.299 R + 0.587 G + 0.114 B; gray images pass through as a copy.
RasterImage to_gray(const RasterImage& img);

double luminance(double r, double g, double b);

// Center-crop then edge-pad to the requested dimensions (used to feed
// arbitrary candidates into a fixed-dimension PCA basis).
RasterImage fit_to_dims(const RasterImage& img, int width, int height);

} // namespace exprclone
