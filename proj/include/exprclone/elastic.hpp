#pragma once

#include <vector>

#include "exprclone/face_model.hpp"
#include "exprclone/mesh.hpp"

namespace exprclone {

// Grid step and window dilation for the equilibrium search.
inline constexpr double kSolveGridStep = 0.25;
inline constexpr double kSolveWindowDilation = 1.0;

// Distances below this give a zero unit vector (no force direction).
inline constexpr double kZeroDistance = 1e-12;

// Hooke-law system for one clone: each feature point hangs on springs to its
// mesh neighbors (anchored at their global-warp positions, rest length equal
// to the global-configuration distance) and on one spring to its local-warp
// position (rest length zero).
struct SpringSystem {
    std::vector<Vec2> global_pos;                  // A, per point
    std::vector<Vec2> local_pos;                   // A', per point
    std::vector<std::vector<int>> neighbor_ids;    // from the reference mesh
    std::vector<std::vector<double>> rest_lengths; // |A_i - A_j| per neighbor
    double k_neighbor = 1.0;                       // k_N
    double k_local = 1.0;                          // k_A'
};

SpringSystem build_spring_system(const FeaturePointSet& global_pts,
                                 const FeaturePointSet& local_pts, const TriangleMesh& ref_mesh,
                                 double k_neighbor, double k_local);

// Net spring force on point i at position p, neighbors pinned at their
// global positions.
Vec2 net_force(const SpringSystem& sys, int i, Vec2 p);

struct SearchWindow {
    Vec2 lo;
    Vec2 hi;
};

struct PointSolution {
    Vec2 p_opt;
    double residual = 0.0; // net-force magnitude at p_opt
    SearchWindow window;
};

// Exhaustive grid search over the bounding box of {A_i, A'_i} dilated by
// kSolveWindowDilation, step kSolveGridStep; A_i and A'_i themselves are
// always candidates. Ties break toward the candidate closer to A_i, then by
// lexicographic (x, y).
PointSolution solve_point(const SpringSystem& sys, int i);

struct SolveReport {
    std::vector<PointSolution> points;
};

// Solves every point independently (k_N = 1, k_A' = lambda_k) and returns
// the balanced point set. Points are independent, so the parallel kernel is
// bit-identical to the serial reference.
FeaturePointSet solve_all(const FeaturePointSet& global_pts, const FeaturePointSet& local_pts,
                          const TriangleMesh& ref_mesh, double lambda_k,
                          SolveReport* report = nullptr);
FeaturePointSet solve_all_serial(const FeaturePointSet& global_pts,
                                 const FeaturePointSet& local_pts, const TriangleMesh& ref_mesh,
                                 double lambda_k, SolveReport* report = nullptr);

} // namespace exprclone
