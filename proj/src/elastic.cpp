#include "exprclone/elastic.hpp"

#include <algorithm>
#include <cmath>

namespace exprclone {

SpringSystem build_spring_system(const FeaturePointSet& global_pts,
                                 const FeaturePointSet& local_pts, const TriangleMesh& ref_mesh,
                                 double k_neighbor, double k_local) {
    require_same_schema(global_pts, local_pts, "build_spring_system");
    require_same_schema(global_pts, ref_mesh.vertices, "build_spring_system(mesh)");
    if (k_neighbor < 0.0 || k_local < 0.0 || (k_neighbor == 0.0 && k_local == 0.0)) {
        throw GeometryError("spring system: elasticity coefficients must be >= 0, not both zero");
    }
    const int n = global_pts.size();
    SpringSystem sys;
    sys.k_neighbor = k_neighbor;
    sys.k_local = k_local;
    sys.global_pos.resize(static_cast<size_t>(n));
    sys.local_pos.resize(static_cast<size_t>(n));
    sys.neighbor_ids.resize(static_cast<size_t>(n));
    sys.rest_lengths.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        sys.global_pos[static_cast<size_t>(i)] = global_pts.pos(i);
        sys.local_pos[static_cast<size_t>(i)] = local_pts.pos(i);
        sys.neighbor_ids[static_cast<size_t>(i)] = neighbors_of(ref_mesh, i);
    }
    for (int i = 0; i < n; ++i) {
        auto& rests = sys.rest_lengths[static_cast<size_t>(i)];
        for (int j : sys.neighbor_ids[static_cast<size_t>(i)]) {
            rests.push_back(distance(sys.global_pos[static_cast<size_t>(i)],
                                     sys.global_pos[static_cast<size_t>(j)]));
        }
    }
    return sys;
}

Vec2 net_force(const SpringSystem& sys, int i, Vec2 p) {
    Vec2 f{0.0, 0.0};
    const auto& nbrs = sys.neighbor_ids[static_cast<size_t>(i)];
    const auto& rests = sys.rest_lengths[static_cast<size_t>(i)];
    for (size_t j = 0; j < nbrs.size(); ++j) {
        const Vec2 to_b = sys.global_pos[static_cast<size_t>(nbrs[j])] - p;
        const double len = norm(to_b);
        if (len < kZeroDistance) continue; // unit vector defined as zero
        const double scale = sys.k_neighbor * ((len - rests[j]) / len);
        f.x += scale * to_b.x;
        f.y += scale * to_b.y;
    }
    // magnitude k |p - A'| times the unit vector toward A' collapses to
    // k (A' - p); the rest length of the local spring is zero
    const Vec2 to_a = sys.local_pos[static_cast<size_t>(i)] - p;
    if (norm(to_a) >= kZeroDistance) {
        f.x += sys.k_local * to_a.x;
        f.y += sys.k_local * to_a.y;
    }
    return f;
}

PointSolution solve_point(const SpringSystem& sys, int i) {
    const Vec2 a = sys.global_pos[static_cast<size_t>(i)];
    const Vec2 al = sys.local_pos[static_cast<size_t>(i)];
    SearchWindow win;
    win.lo = Vec2{std::min(a.x, al.x) - kSolveWindowDilation,
                  std::min(a.y, al.y) - kSolveWindowDilation};
    win.hi = Vec2{std::max(a.x, al.x) + kSolveWindowDilation,
                  std::max(a.y, al.y) + kSolveWindowDilation};

    Vec2 best{};
    double best_r2 = -1.0;
    double best_da2 = 0.0;
    auto consider = [&](Vec2 p) {
        const Vec2 f = net_force(sys, i, p);
        const double r2 = f.x * f.x + f.y * f.y;
        const Vec2 da = p - a;
        const double da2 = da.x * da.x + da.y * da.y;
        if (best_r2 < 0.0 || r2 < best_r2 ||
            (r2 == best_r2 && (da2 < best_da2 || (da2 == best_da2 && (p.x < best.x || (p.x == best.x && p.y < best.y)))))) {
            best = p;
            best_r2 = r2;
            best_da2 = da2;
        }
    };

    const int nx = static_cast<int>(std::floor((win.hi.x - win.lo.x) / kSolveGridStep + 1e-9)) + 1;
    const int ny = static_cast<int>(std::floor((win.hi.y - win.lo.y) / kSolveGridStep + 1e-9)) + 1;
    for (int iy = 0; iy < ny; ++iy) {
        const double y = win.lo.y + iy * kSolveGridStep;
        for (int ix = 0; ix < nx; ++ix) {
            consider(Vec2{win.lo.x + ix * kSolveGridStep, y});
        }
    }
    consider(a);
    consider(al);

    PointSolution sol;
    sol.p_opt = best;
    sol.residual = std::sqrt(best_r2);
    sol.window = win;
    return sol;
}

namespace {

FeaturePointSet solve_all_impl(const FeaturePointSet& global_pts, const FeaturePointSet& local_pts,
                               const TriangleMesh& ref_mesh, double lambda_k, SolveReport* report,
                               bool parallel) {
    if (lambda_k < 0.0) throw GeometryError("solve_all: lambda_k must be >= 0");
    const SpringSystem sys = build_spring_system(global_pts, local_pts, ref_mesh, 1.0, lambda_k);
    const int n = global_pts.size();
    std::vector<PointSolution> solutions(static_cast<size_t>(n));

#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        solutions[static_cast<size_t>(i)] = solve_point(sys, i);
    }

    std::vector<Vec2> positions(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) positions[static_cast<size_t>(i)] = solutions[static_cast<size_t>(i)].p_opt;
    if (report) report->points = std::move(solutions);
    return global_pts.with_positions(positions);
}

} // namespace

FeaturePointSet solve_all(const FeaturePointSet& global_pts, const FeaturePointSet& local_pts,
                          const TriangleMesh& ref_mesh, double lambda_k, SolveReport* report) {
    return solve_all_impl(global_pts, local_pts, ref_mesh, lambda_k, report, true);
}

FeaturePointSet solve_all_serial(const FeaturePointSet& global_pts,
                                 const FeaturePointSet& local_pts, const TriangleMesh& ref_mesh,
                                 double lambda_k, SolveReport* report) {
    return solve_all_impl(global_pts, local_pts, ref_mesh, lambda_k, report, false);
}

} // namespace exprclone
