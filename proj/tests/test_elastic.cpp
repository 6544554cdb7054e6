#include <doctest.h>

#include <cmath>

#include "exprclone/elastic.hpp"
#include "exprclone/local_reshape.hpp"
#include "exprclone/global_warp.hpp"
#include "face_synth.hpp"
#include "support.hpp"

using namespace exprclone;
using testsupport::points_only;

namespace {

// 1D fixture: neighbor B = (-50, 0), A = (0, 0), A' = (10, 0); point of
// interest has id 1. Ids 0 and 2 close the mesh (B and a helper far above).
struct LineFixture {
    FeaturePointSet global_pts;
    FeaturePointSet local_pts;
    TriangleMesh mesh;

    LineFixture()
        : global_pts(points_only({{-50.0 + 400.0, 200.0}, {400.0, 200.0}, {400.0, 40.0}},
                                 {800, 800})),
          local_pts(global_pts.with_positions(
              {global_pts.pos(0), global_pts.pos(1) + Vec2{10.0, 0.0}, global_pts.pos(2)})),
          mesh(delaunay_triangulate(global_pts)) {}
};

// builds a spring system where ONLY point 1 moves and only the spring to
// B = point 0 matters: we drop point 2 from the neighbor list to get the
// exact collinear algebra of the 1D case.
SpringSystem line_system(const LineFixture& fx, double k_local) {
    SpringSystem sys = build_spring_system(fx.global_pts, fx.local_pts, fx.mesh, 1.0, k_local);
    sys.neighbor_ids[1] = {0};
    sys.rest_lengths[1] = {distance(sys.global_pos[1], sys.global_pos[0])};
    return sys;
}

} // namespace

TEST_SUITE("elastic") {

TEST_CASE("no neighbor forces at the global rest configuration") {
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto local_pts = reshape_all(src_exp, global_pts);
    const TriangleMesh mesh = delaunay_triangulate(global_pts);
    const SpringSystem sys = build_spring_system(global_pts, local_pts, mesh, 1.0, 2.0);
    for (int i = 0; i < global_pts.size(); ++i) {
        const Vec2 f = net_force(sys, i, sys.global_pos[static_cast<size_t>(i)]);
        const Vec2 want = 2.0 * (sys.local_pos[static_cast<size_t>(i)] -
                                 sys.global_pos[static_cast<size_t>(i)]);
        CHECK(f.x == doctest::Approx(want.x).epsilon(1e-12));
        CHECK(f.y == doctest::Approx(want.y).epsilon(1e-12));
    }
}

TEST_CASE("no local force at the local position") {
    LineFixture fx;
    const SpringSystem sys = line_system(fx, 3.0);
    // at A' (local position) the A' spring vanishes; only the neighbor acts
    const Vec2 f = net_force(sys, 1, sys.local_pos[1]);
    // extension toward B: |A' - B| = 60, rest 50 -> pull of magnitude 10 toward B
    CHECK(f.x == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(f.y == doctest::Approx(0.0));
}

TEST_CASE("collinear net force matches the exact algebra") {
    LineFixture fx;
    const double lambda = 2.5;
    const SpringSystem sys = line_system(fx, lambda);
    for (double x = 0.0; x <= 10.0; x += 1.25) {
        const Vec2 p = fx.global_pts.pos(1) + Vec2{x, 0.0};
        const Vec2 f = net_force(sys, 1, p);
        CHECK(f.x == doctest::Approx(lambda * (10.0 - x) - x).epsilon(1e-10));
        CHECK(std::abs(f.y) < 1e-10);
    }
}

TEST_CASE("k_N = 0 gives the local anchor exactly") {
    LineFixture fx;
    SpringSystem sys = line_system(fx, 5.0);
    sys.k_neighbor = 0.0;
    const PointSolution sol = solve_point(sys, 1);
    CHECK(sol.p_opt == sys.local_pos[1]);
    CHECK(sol.residual == 0.0);
}

TEST_CASE("k_A' = 0 gives the global anchor exactly") {
    LineFixture fx;
    SpringSystem sys = line_system(fx, 0.0);
    const PointSolution sol = solve_point(sys, 1);
    CHECK(sol.p_opt == sys.global_pos[1]);
    CHECK(sol.residual == 0.0);
}

TEST_CASE("1D balance point sits at 10 lambda / (1 + lambda)") {
    LineFixture fx;
    for (const double lambda : {0.5, 1.0, 2.0, 4.0}) {
        const SpringSystem sys = line_system(fx, lambda);
        const PointSolution sol = solve_point(sys, 1);
        const double expect = 10.0 * lambda / (1.0 + lambda);
        CHECK(std::abs((sol.p_opt.x - fx.global_pts.pos(1).x) - expect) <= 0.25);
        CHECK(std::abs(sol.p_opt.y - fx.global_pts.pos(1).y) <= 1e-12);
    }
    // lambda = 1: the balance point x = 5 lies on the grid, so it is exact
    const SpringSystem sys = line_system(fx, 1.0);
    const PointSolution sol = solve_point(sys, 1);
    CHECK(sol.p_opt.x - fx.global_pts.pos(1).x == 5.0);
    CHECK(sol.residual < 1e-12);
}

TEST_CASE("coincident anchors collapse the window") {
    LineFixture fx;
    SpringSystem sys = line_system(fx, 7.0);
    sys.local_pos[1] = sys.global_pos[1];
    const PointSolution sol = solve_point(sys, 1);
    CHECK(sol.p_opt == sys.global_pos[1]);
}

TEST_CASE("solution stays inside the reported window") {
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto local_pts = reshape_all(src_exp, global_pts);
    const TriangleMesh mesh = delaunay_triangulate(global_pts);
    SolveReport report;
    solve_all(global_pts, local_pts, mesh, 1.5, &report);
    for (const PointSolution& s : report.points) {
        CHECK(s.p_opt.x >= s.window.lo.x);
        CHECK(s.p_opt.x <= s.window.hi.x);
        CHECK(s.p_opt.y >= s.window.lo.y);
        CHECK(s.p_opt.y <= s.window.hi.y);
        CHECK(s.residual >= 0.0);
    }
}

TEST_CASE("lambda 0 returns the global point set exactly") {
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto local_pts = reshape_all(src_exp, global_pts);
    const TriangleMesh mesh = delaunay_triangulate(global_pts);
    const auto out = solve_all(global_pts, local_pts, mesh, 0.0);
    CHECK(testsupport::same_positions(out, global_pts));
}

TEST_CASE("huge lambda lands within one grid step of the local set") {
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto local_pts = reshape_all(src_exp, global_pts);
    const TriangleMesh mesh = delaunay_triangulate(global_pts);
    const auto out = solve_all(global_pts, local_pts, mesh, 1e6);
    CHECK(testsupport::max_pos_diff(out, local_pts) <= 0.25);
}

TEST_CASE("coincident global and local sets are a fixed point for any lambda") {
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const TriangleMesh mesh = delaunay_triangulate(global_pts);
    for (const double lambda : {0.0, 0.5, 8.0}) {
        const auto out = solve_all(global_pts, global_pts, mesh, lambda);
        CHECK(testsupport::same_positions(out, global_pts));
    }
}

TEST_CASE("pull toward the local anchor grows monotonically with lambda") {
    LineFixture fx;
    double prev = -1.0;
    for (const double lambda : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 32.0}) {
        const SpringSystem sys = line_system(fx, lambda);
        const PointSolution sol = solve_point(sys, 1);
        const double dist = distance(sol.p_opt, sys.global_pos[1]);
        CHECK(dist >= prev);
        prev = dist;
    }
}

TEST_CASE("residual is minimal over a full window re-scan") {
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto local_pts = reshape_all(src_exp, global_pts);
    const TriangleMesh mesh = delaunay_triangulate(global_pts);
    const SpringSystem sys = build_spring_system(global_pts, local_pts, mesh, 1.0, 1.5);
    for (int i = 0; i < global_pts.size(); i += 7) {
        const PointSolution sol = solve_point(sys, i);
        const double best2 = sol.residual * sol.residual;
        for (double y = sol.window.lo.y; y <= sol.window.hi.y + 1e-12; y += kSolveGridStep) {
            for (double x = sol.window.lo.x; x <= sol.window.hi.x + 1e-12; x += kSolveGridStep) {
                const Vec2 f = net_force(sys, i, {x, y});
                REQUIRE(f.x * f.x + f.y * f.y >= best2 - 1e-12);
            }
        }
    }
}

TEST_CASE("translating the whole system translates the optimum exactly") {
    // quarter-integer coordinates so every shifted value stays exact
    const auto global_pts =
        points_only({{100.25, 100.5}, {140.75, 98.25}, {120.5, 140.25}, {90.25, 130.75}},
                    {1024, 1024});
    const auto local_pts = global_pts.with_positions(
        {{101.5, 102.25}, {143.25, 99.5}, {118.75, 138.5}, {90.25, 130.75}});
    const TriangleMesh mesh = delaunay_triangulate(global_pts);
    const Vec2 t{37.0, -21.0};
    std::vector<Vec2> g2, l2;
    for (int i = 0; i < global_pts.size(); ++i) {
        g2.push_back(global_pts.pos(i) + t);
        l2.push_back(local_pts.pos(i) + t);
    }
    const auto shifted_global = global_pts.with_positions(g2);
    const auto shifted_local = local_pts.with_positions(l2);
    const TriangleMesh shifted_mesh = mesh_with_positions(mesh, shifted_global);

    const auto base = solve_all(global_pts, local_pts, mesh, 1.5);
    const auto moved = solve_all(shifted_global, shifted_local, shifted_mesh, 1.5);
    for (int i = 0; i < base.size(); ++i) {
        REQUIRE(moved.pos(i) == base.pos(i) + t);
    }
}

TEST_CASE("scaling both coefficients leaves the optimum unchanged") {
    LineFixture fx;
    for (const double c : {0.5, 3.0, 100.0}) {
        SpringSystem a = line_system(fx, 2.0);
        SpringSystem b = line_system(fx, 2.0 * c);
        b.k_neighbor = c;
        const PointSolution sa = solve_point(a, 1);
        const PointSolution sb = solve_point(b, 1);
        CHECK(sa.p_opt == sb.p_opt);
    }
}

} // TEST_SUITE
