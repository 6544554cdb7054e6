#include "exprclone/warp.hpp"

#include <algorithm>
#include <cmath>

namespace exprclone {

namespace {

// Inflation (px) of triangle bounding boxes used for candidate pruning; must
// exceed the geometric slack implied by kInsideEps.
constexpr double kBBoxInflate = 1e-5;

struct TriBounds {
    int x0, x1, y0, y1; // inclusive pixel range, already clipped
};

TriBounds triangle_pixel_bounds(const TriangleMesh& mesh, const std::array<int, 3>& t, int width,
                                int height) {
    const Vec2 a = mesh.vertices.pos(t[0]);
    const Vec2 b = mesh.vertices.pos(t[1]);
    const Vec2 c = mesh.vertices.pos(t[2]);
    const double min_x = std::min({a.x, b.x, c.x}) - kBBoxInflate;
    const double max_x = std::max({a.x, b.x, c.x}) + kBBoxInflate;
    const double min_y = std::min({a.y, b.y, c.y}) - kBBoxInflate;
    const double max_y = std::max({a.y, b.y, c.y}) + kBBoxInflate;
    TriBounds bb;
    bb.x0 = std::max(0, static_cast<int>(std::ceil(min_x)));
    bb.x1 = std::min(width - 1, static_cast<int>(std::floor(max_x)));
    bb.y0 = std::max(0, static_cast<int>(std::ceil(min_y)));
    bb.y1 = std::min(height - 1, static_cast<int>(std::floor(max_y)));
    return bb;
}

void require_connectivity_match(const TriangleMesh& src_mesh, const TriangleMesh& dst_mesh) {
    if (src_mesh.vertices.size() != dst_mesh.vertices.size() ||
        src_mesh.triangles != dst_mesh.triangles) {
        throw GeometryError("warp: source and destination meshes have mismatched connectivity");
    }
}

} // namespace

Barycentric barycentric(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
    const Vec2 e0 = b - a;
    const Vec2 e1 = c - a;
    const Vec2 w = p - a;
    const double d = cross(e0, e1);
    Barycentric bc;
    if (d == 0.0) return bc; // degenerate triangles are rejected upstream
    bc.u = cross(w, e1) / d;
    bc.v = cross(e0, w) / d;
    bc.inside = bc.u >= -kInsideEps && bc.v >= -kInsideEps && bc.u + bc.v <= 1.0 + kInsideEps;
    return bc;
}

double bilinear_sample(const RasterImage& img, int c, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    int x0 = std::min(static_cast<int>(std::floor(x)), img.width - 2);
    int y0 = std::min(static_cast<int>(std::floor(y)), img.height - 2);
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    double fx = x - x0;
    double fy = y - y0;
    if (fx < kSampleSnapEps) fx = 0.0;
    if (fx > 1.0 - kSampleSnapEps) fx = 1.0;
    if (fy < kSampleSnapEps) fy = 0.0;
    if (fy > 1.0 - kSampleSnapEps) fy = 1.0;
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double s00 = img.at(x0, y0, c);
    const double s10 = img.at(x1, y0, c);
    const double s01 = img.at(x0, y1, c);
    const double s11 = img.at(x1, y1, c);
    return (1.0 - fx) * (1.0 - fy) * s00 + fx * (1.0 - fy) * s10 + (1.0 - fx) * fy * s01 +
           fx * fy * s11;
}

std::vector<std::int32_t> rasterize_triangle_map(const TriangleMesh& mesh, int width, int height) {
    std::vector<std::int32_t> map(static_cast<size_t>(width) * height, -1);

    // bucket candidate triangles per row, ascending triangle index
    const int tri_count = static_cast<int>(mesh.triangles.size());
    std::vector<TriBounds> bounds(static_cast<size_t>(tri_count));
    std::vector<std::vector<std::int32_t>> rows(static_cast<size_t>(height));
    for (int t = 0; t < tri_count; ++t) {
        bounds[static_cast<size_t>(t)] =
            triangle_pixel_bounds(mesh, mesh.triangles[static_cast<size_t>(t)], width, height);
        const TriBounds& bb = bounds[static_cast<size_t>(t)];
        for (int y = bb.y0; y <= bb.y1; ++y) rows[static_cast<size_t>(y)].push_back(t);
    }

#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        std::int32_t* out_row = map.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
            for (std::int32_t t : rows[static_cast<size_t>(y)]) {
                const TriBounds& bb = bounds[static_cast<size_t>(t)];
                if (x < bb.x0 || x > bb.x1) continue;
                const auto& tri = mesh.triangles[static_cast<size_t>(t)];
                if (barycentric(mesh.vertices.pos(tri[0]), mesh.vertices.pos(tri[1]),
                                mesh.vertices.pos(tri[2]), p)
                        .inside) {
                    out_row[x] = t;
                    break;
                }
            }
        }
    }
    return map;
}

std::vector<std::int32_t> rasterize_triangle_map_serial(const TriangleMesh& mesh, int width,
                                                        int height) {
    std::vector<std::int32_t> map(static_cast<size_t>(width) * height, -1);
    const int tri_count = static_cast<int>(mesh.triangles.size());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
            for (int t = 0; t < tri_count; ++t) {
                const auto& tri = mesh.triangles[static_cast<size_t>(t)];
                if (barycentric(mesh.vertices.pos(tri[0]), mesh.vertices.pos(tri[1]),
                                mesh.vertices.pos(tri[2]), p)
                        .inside) {
                    map[static_cast<size_t>(y) * width + x] = t;
                    break;
                }
            }
        }
    }
    return map;
}

namespace {

template <typename MapFn>
RasterImage warp_impl(const RasterImage& src, const TriangleMesh& src_mesh,
                      const TriangleMesh& dst_mesh, MapFn map_fn, bool parallel) {
    require_connectivity_match(src_mesh, dst_mesh);
    if (!(src.size() == src_mesh.vertices.image_size())) {
        throw ImageError("warp: source image dimensions disagree with source mesh");
    }
    const ImageSize out_size = dst_mesh.vertices.image_size();
    const int width = out_size.width;
    const int height = out_size.height;
    const int channels = src.channels;
    RasterImage out = RasterImage::make(width, height, channels);

    const std::vector<std::int32_t> map = map_fn(dst_mesh, width, height);

#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::int32_t t = map[static_cast<size_t>(y) * width + x];
            if (t < 0) {
                // background passthrough
                const int sx = std::clamp(x, 0, src.width - 1);
                const int sy = std::clamp(y, 0, src.height - 1);
                for (int c = 0; c < channels; ++c) out.at(x, y, c) = src.at(sx, sy, c);
                continue;
            }
            const auto& tri = dst_mesh.triangles[static_cast<size_t>(t)];
            const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
            const Barycentric bc =
                barycentric(dst_mesh.vertices.pos(tri[0]), dst_mesh.vertices.pos(tri[1]),
                            dst_mesh.vertices.pos(tri[2]), p);
            const Vec2 sa = src_mesh.vertices.pos(tri[0]);
            const Vec2 sb = src_mesh.vertices.pos(tri[1]);
            const Vec2 sc = src_mesh.vertices.pos(tri[2]);
            const Vec2 sp = sa + bc.u * (sb - sa) + bc.v * (sc - sa);
            for (int c = 0; c < channels; ++c) out.at(x, y, c) = bilinear_sample(src, c, sp.x, sp.y);
        }
    }
    return out;
}

} // namespace

RasterImage piecewise_affine_warp(const RasterImage& src, const TriangleMesh& src_mesh,
                                  const TriangleMesh& dst_mesh) {
    return warp_impl(src, src_mesh, dst_mesh,
                     [](const TriangleMesh& m, int w, int h) { return rasterize_triangle_map(m, w, h); },
                     true);
}

RasterImage piecewise_affine_warp_serial(const RasterImage& src, const TriangleMesh& src_mesh,
                                         const TriangleMesh& dst_mesh) {
    return warp_impl(
        src, src_mesh, dst_mesh,
        [](const TriangleMesh& m, int w, int h) { return rasterize_triangle_map_serial(m, w, h); },
        false);
}

} // namespace exprclone
