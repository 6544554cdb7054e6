#include <doctest.h>

#include <random>

#include "exprclone/warp.hpp"
#include "face_synth.hpp"
#include "support.hpp"

using namespace exprclone;
using testsupport::points_only;

namespace {

RasterImage smooth_test_image(int w, int h) {
    RasterImage img = RasterImage::make(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.at(x, y) = 100.0 + 80.0 * std::sin(x * 0.05) * std::cos(y * 0.04) +
                           40.0 * (static_cast<double>(x) / w);
        }
    }
    return img;
}

} // namespace

TEST_SUITE("warp") {

TEST_CASE("identity warp reproduces the input exactly") {
    const auto set = points_only({{8, 8}, {120, 10}, {118, 120}, {12, 118}, {60, 70}}, {128, 128});
    const TriangleMesh mesh = delaunay_triangulate(set);
    const RasterImage img = smooth_test_image(128, 128);
    const RasterImage out = piecewise_affine_warp(img, mesh, mesh);
    CHECK(testsupport::max_abs_diff(out, img) == 0.0);
}

TEST_CASE("integer translation is exact on covered pixels") {
    const auto set = points_only({{8, 8}, {100, 10}, {98, 100}, {12, 98}}, {128, 128});
    const TriangleMesh mesh = delaunay_triangulate(set);
    std::vector<Vec2> moved;
    for (int i = 0; i < set.size(); ++i) moved.push_back(set.pos(i) + Vec2{5, 0});
    const TriangleMesh shifted = mesh_with_positions(mesh, set.with_positions(moved));

    const RasterImage img = smooth_test_image(128, 128);
    const RasterImage out = piecewise_affine_warp(img, mesh, shifted);
    const auto coverage = rasterize_triangle_map(shifted, 128, 128);
    for (int y = 0; y < 128; ++y) {
        for (int x = 0; x < 128; ++x) {
            if (coverage[static_cast<size_t>(y) * 128 + x] < 0) continue;
            REQUIRE(out.at(x, y) == img.at(x - 5, y));
        }
    }
}

TEST_CASE("a pixel at a destination vertex samples the source vertex") {
    // dst vertex at integer coordinates, source vertex anywhere
    const auto src = points_only({{10.25, 12.5}, {90.75, 14.25}, {50.5, 88.25}}, {128, 128});
    const auto dst = points_only({{20, 16}, {100, 20}, {60, 90}}, {128, 128});
    const TriangleMesh src_mesh = delaunay_triangulate(src);
    const TriangleMesh dst_mesh = mesh_with_positions(src_mesh, dst);
    const RasterImage img = smooth_test_image(128, 128);
    const RasterImage out = piecewise_affine_warp(img, src_mesh, dst_mesh);
    for (int v = 0; v < 3; ++v) {
        const Vec2 dp = dst.pos(v);
        const Vec2 sp = src.pos(v);
        REQUIRE(out.at(static_cast<int>(dp.x), static_cast<int>(dp.y)) ==
                bilinear_sample(img, 0, sp.x, sp.y));
    }
}

TEST_CASE("connectivity mismatch is rejected") {
    const auto a = points_only({{8, 8}, {100, 10}, {98, 100}, {12, 98}}, {128, 128});
    const auto b = points_only({{8, 8}, {100, 10}, {98, 100}}, {128, 128});
    const TriangleMesh ma = delaunay_triangulate(a);
    const TriangleMesh mb = delaunay_triangulate(b);
    const RasterImage img = smooth_test_image(128, 128);
    CHECK_THROWS_WITH_AS(piecewise_affine_warp(img, ma, mb), doctest::Contains("connectivity"),
                         GeometryError);
}

TEST_CASE("background passthrough outside the hull") {
    const auto set = points_only({{40, 40}, {90, 42}, {88, 90}, {42, 88}}, {128, 128});
    const TriangleMesh mesh = delaunay_triangulate(set);
    std::vector<Vec2> moved;
    for (int i = 0; i < set.size(); ++i) moved.push_back(set.pos(i) + Vec2{3, 2});
    const TriangleMesh dst = mesh_with_positions(mesh, set.with_positions(moved));
    const RasterImage img = smooth_test_image(128, 128);
    const RasterImage out = piecewise_affine_warp(img, mesh, dst);
    const auto coverage = rasterize_triangle_map(dst, 128, 128);
    CHECK(coverage[0] == -1);
    CHECK(out.at(0, 0) == img.at(0, 0));
    CHECK(out.at(127, 127) == img.at(127, 127));
}

TEST_CASE("round trip A->B->A keeps PSNR above 35 dB inside the mesh") {
    const synth::FaceParams pa = synth::target_neutral_params();
    const synth::FaceParams pb = synth::lerp_params(pa, synth::source_smile_params(), 0.35);
    const FeaturePointSet a_pts = synth::synth_landmarks(pa);
    const FeaturePointSet b_pts = synth::synth_landmarks(pb);
    // same connectivity on both (reference triangulation of A)
    const TriangleMesh mesh_a = delaunay_triangulate(a_pts);
    const TriangleMesh mesh_b = mesh_with_positions(mesh_a, b_pts);
    const RasterImage img = synth::synth_face_image(pa);
    const RasterImage there = piecewise_affine_warp(img, mesh_a, mesh_b);
    const RasterImage back = piecewise_affine_warp(there, mesh_b, mesh_a);
    const auto coverage = rasterize_triangle_map(mesh_a, img.width, img.height);
    CHECK(testsupport::psnr(img, back, coverage) > 35.0);
}

TEST_CASE("triangle map covers shared edges without holes") {
    std::mt19937 rng(21);
    const auto pts = testsupport::random_points(rng, 20, 4.0, 124.0, 3.0);
    const auto set = points_only(pts, {128, 128});
    const TriangleMesh mesh = delaunay_triangulate(set);
    const auto map = rasterize_triangle_map(mesh, 128, 128);
    // every pixel whose center lies strictly inside some triangle must be mapped
    for (int y = 0; y < 128; ++y) {
        for (int x = 0; x < 128; ++x) {
            const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
            bool inside_any = false;
            for (const auto& t : mesh.triangles) {
                if (barycentric(set.pos(t[0]), set.pos(t[1]), set.pos(t[2]), p).inside) {
                    inside_any = true;
                    break;
                }
            }
            REQUIRE(inside_any == (map[static_cast<size_t>(y) * 128 + x] >= 0));
        }
    }
}

} // TEST_SUITE
