#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "exprclone/face_model.hpp"
#include "exprclone/image.hpp"
#include "exprclone/mesh.hpp"

namespace testsupport {

using exprclone::FeaturePoint;
using exprclone::FeaturePointSet;
using exprclone::ImageSize;
using exprclone::Organ;
using exprclone::RasterImage;
using exprclone::TriangleMesh;
using exprclone::Vec2;

inline FeaturePointSet make_set(const std::vector<std::pair<Organ, Vec2>>& pts, ImageSize size) {
    std::vector<FeaturePoint> fps;
    int id = 0;
    for (const auto& [organ, pos] : pts) fps.push_back({id++, organ, pos});
    return FeaturePointSet(std::move(fps), size);
}

inline FeaturePointSet points_only(const std::vector<Vec2>& pts, ImageSize size) {
    std::vector<std::pair<Organ, Vec2>> raw;
    for (const Vec2& p : pts) raw.emplace_back(Organ::contour, p);
    return make_set(raw, size);
}

// Uniform random points with pairwise separation, away from the border.
inline std::vector<Vec2> random_points(std::mt19937& rng, int n, double lo, double hi,
                                       double min_sep = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<Vec2> pts;
    while (static_cast<int>(pts.size()) < n) {
        const Vec2 p{dist(rng), dist(rng)};
        bool ok = true;
        for (const Vec2& q : pts) {
            if (exprclone::distance(p, q) < min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(p);
    }
    return pts;
}

// ---- independent Delaunay oracle -----------------------------------------

// Strict convex hull vertex count (Andrew monotone chain).
inline int convex_hull_size(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    const int n = static_cast<int>(pts.size());
    std::vector<Vec2> hull(2 * static_cast<size_t>(n));
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && exprclone::triangle_area2(hull[static_cast<size_t>(k - 2)],
                                                   hull[static_cast<size_t>(k - 1)],
                                                   pts[static_cast<size_t>(i)]) <= 0) {
            --k;
        }
        hull[static_cast<size_t>(k++)] = pts[static_cast<size_t>(i)];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && exprclone::triangle_area2(hull[static_cast<size_t>(k - 2)],
                                                       hull[static_cast<size_t>(k - 1)],
                                                       pts[static_cast<size_t>(i)]) <= 0) {
            --k;
        }
        hull[static_cast<size_t>(k++)] = pts[static_cast<size_t>(i)];
    }
    return k - 1;
}

// All Delaunay triangles by exhaustive enumeration: every non-degenerate
// triple whose circumcircle holds no other point strictly inside.
inline std::vector<std::array<int, 3>> brute_force_delaunay(const std::vector<Vec2>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<std::array<int, 3>> tris;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                Vec2 a = pts[static_cast<size_t>(i)];
                Vec2 b = pts[static_cast<size_t>(j)];
                Vec2 c = pts[static_cast<size_t>(k)];
                int jj = j, kk = k;
                if (exprclone::triangle_area2(a, b, c) < 0) {
                    std::swap(b, c);
                    std::swap(jj, kk);
                }
                if (exprclone::triangle_area2(a, b, c) <= 2e-9) continue;
                bool empty = true;
                for (int m = 0; m < n && empty; ++m) {
                    if (m == i || m == j || m == k) continue;
                    if (exprclone::incircle_det(a, b, c, pts[static_cast<size_t>(m)]) > 1e-9) {
                        empty = false;
                    }
                }
                if (empty) tris.push_back({i, jj, kk});
            }
        }
    }
    return tris;
}

// Checks the empty-circumcircle property of a produced mesh by brute force.
inline bool passes_empty_circumcircle(const TriangleMesh& mesh, double tol = 1e-9) {
    const int n = mesh.vertices.size();
    for (const auto& t : mesh.triangles) {
        const Vec2 a = mesh.vertices.pos(t[0]);
        const Vec2 b = mesh.vertices.pos(t[1]);
        const Vec2 c = mesh.vertices.pos(t[2]);
        for (int m = 0; m < n; ++m) {
            if (m == t[0] || m == t[1] || m == t[2]) continue;
            if (exprclone::incircle_det(a, b, c, mesh.vertices.pos(m)) > tol) return false;
        }
    }
    return true;
}

// ---- image helpers --------------------------------------------------------

inline double max_abs_diff(const RasterImage& a, const RasterImage& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
    }
    return worst;
}

inline double psnr(const RasterImage& a, const RasterImage& b,
                   const std::vector<std::int32_t>& coverage) {
    double se = 0.0;
    size_t count = 0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (coverage[static_cast<size_t>(y) * a.width + x] < 0) continue;
            for (int c = 0; c < a.channels; ++c) {
                const double d = a.at(x, y, c) - b.at(x, y, c);
                se += d * d;
                ++count;
            }
        }
    }
    if (count == 0 || se == 0.0) return 1e9;
    const double mse = se / static_cast<double>(count);
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline bool same_positions(const FeaturePointSet& a, const FeaturePointSet& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i) {
        if (a.pos(i) != b.pos(i)) return false;
    }
    return true;
}

inline double max_pos_diff(const FeaturePointSet& a, const FeaturePointSet& b) {
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        worst = std::max(worst, exprclone::distance(a.pos(i), b.pos(i)));
    }
    return worst;
}

} // namespace testsupport
