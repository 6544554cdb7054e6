#pragma once

#include <cstdint>
#include <vector>

#include "exprclone/image.hpp"
#include "exprclone/mesh.hpp"

namespace exprclone {

// Slack on normalized barycentric coordinates when testing triangle
// membership; keeps shared edges hole-free.
inline constexpr double kInsideEps = 1e-9;

// Sub-pixel sampling offsets this close to a grid line snap onto it, so that
// identity and integer-shift warps reproduce source samples exactly.
inline constexpr double kSampleSnapEps = 1e-9;

struct Barycentric {
    double u = 0.0; // weight of (b - a)
    double v = 0.0; // weight of (c - a)
    bool inside = false;
};

// Coordinates of p in triangle (a, b, c): p = a + u (b-a) + v (c-a).
Barycentric barycentric(Vec2 a, Vec2 b, Vec2 c, Vec2 p);

// Bilinear sample with clamped borders (channel c).
double bilinear_sample(const RasterImage& img, int c, double x, double y);

// Per-pixel index of the containing triangle, -1 where no triangle covers the
// pixel. Pixels on shared edges resolve to the lowest triangle index, so the
// map is independent of any parallel split. The _serial variant is the plain
// reference implementation kept for tests and benchmarks.
std::vector<std::int32_t> rasterize_triangle_map(const TriangleMesh& mesh, int width, int height);
std::vector<std::int32_t> rasterize_triangle_map_serial(const TriangleMesh& mesh, int width,
                                                        int height);

// Piecewise-affine warp: destination pixels inside a dst triangle sample the
// source at the barycentric-equivalent position (bilinear); uncovered pixels
// copy the source pixel at the same coordinates. Output dimensions follow the
// destination mesh's image size.
RasterImage piecewise_affine_warp(const RasterImage& src, const TriangleMesh& src_mesh,
                                  const TriangleMesh& dst_mesh);
RasterImage piecewise_affine_warp_serial(const RasterImage& src, const TriangleMesh& src_mesh,
                                         const TriangleMesh& dst_mesh);

} // namespace exprclone
