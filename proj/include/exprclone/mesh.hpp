#pragma once

#include <array>
#include <vector>

#include "exprclone/face_model.hpp"
#include "exprclone/geometry.hpp"

namespace exprclone {

// Triangles below this area (px^2) are treated as degenerate.
inline constexpr double kDegenerateTriangleArea = 1e-9;

// Tolerance on the in-circle determinant for the Delaunay predicate.
inline constexpr double kInCircleTol = 1e-9;

// Triangulation over a feature point set. Triangle vertex triples keep a
// positive orientation (triangle_area2 > 0) on the set they were built from,
// start with their smallest vertex id, and the list is sorted
// lexicographically, so identical inputs always produce identical meshes.
struct TriangleMesh {
    FeaturePointSet vertices;
    std::vector<std::array<int, 3>> triangles;
};

// In-circle determinant: positive when `d` lies strictly inside the
// circumcircle of the positively oriented triangle (a, b, c).
double incircle_det(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// Delaunay triangulation (incremental hull sweep + Lawson flips). Covers the
// convex hull of the points. Exactly cocircular quads resolve to the diagonal
// with the lexicographically smaller vertex-id pair. Throws GeometryError on
// all-collinear or coincident input points.
TriangleMesh delaunay_triangulate(const FeaturePointSet& set);

// Reuses a reference mesh's connectivity with new vertex positions. Throws
// GeometryError when any triangle collapses (|area| <= kDegenerateTriangleArea).
TriangleMesh mesh_with_positions(const TriangleMesh& ref, const FeaturePointSet& positions);

// Vertices sharing a triangle edge with `vid`, sorted ascending.
std::vector<int> neighbors_of(const TriangleMesh& mesh, int vid);

} // namespace exprclone
