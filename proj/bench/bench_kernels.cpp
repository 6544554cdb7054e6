// Compares the OpenMP kernels against their serial reference implementations:
// wall time and bit-identity of the outputs.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "exprclone/elastic.hpp"
#include "exprclone/global_warp.hpp"
#include "exprclone/illumination.hpp"
#include "exprclone/local_reshape.hpp"
#include "exprclone/warp.hpp"
#include "face_synth.hpp"

using namespace exprclone;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double omp_ms, bool identical) {
    std::printf("%-22s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms, identical ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    int scale = 2; // 512 x 512 by default
    if (argc > 1) scale = std::max(1, std::atoi(argv[1]));
    const int reps = 3;

    synth::FaceParams src_n = synth::source_neutral_params();
    synth::FaceParams src_e = synth::source_smile_params();
    synth::FaceParams tgt_n = synth::target_neutral_params();
    for (synth::FaceParams* p : {&src_n, &src_e, &tgt_n}) {
        p->width *= scale;
        p->height *= scale;
        p->center_x *= scale;
        p->center_y *= scale;
        p->face_rx *= scale;
        p->face_ry *= scale;
        p->eye_dx *= scale;
        p->eye_y *= scale;
        p->eye_rx *= scale;
        p->eye_ry *= scale;
        p->brow_dy *= scale;
        p->brow_rx *= scale;
        p->brow_arc *= scale;
        p->nose_top_y *= scale;
        p->nose_len *= scale;
        p->nose_w *= scale;
        p->mouth_y *= scale;
        p->mouth_rx *= scale;
        p->mouth_ry *= scale;
        p->smile *= scale;
    }

    const RasterImage tgt_img = synth::synth_face_image(tgt_n);
    const FeaturePointSet src_n_pts = synth::synth_landmarks(src_n);
    const FeaturePointSet src_e_pts = synth::synth_landmarks(src_e);
    const FeaturePointSet tgt_pts = synth::synth_landmarks(tgt_n);
    const int w = tgt_img.width, h = tgt_img.height;

    std::printf("image %dx%d, %d landmarks, %d threads\n%-22s %13s %13s %9s\n", w, h,
                tgt_pts.size(), omp_get_max_threads(), "kernel", "serial", "openmp", "speedup");

    const TriangleMesh ref_mesh = delaunay_triangulate(tgt_pts);
    const FeaturePointSet global_pts = transfer_displacements(src_n_pts, src_e_pts, tgt_pts);
    const FeaturePointSet local_pts = reshape_all(src_e_pts, global_pts);
    const TriangleMesh global_mesh = mesh_with_positions(ref_mesh, global_pts);

    {
        std::vector<std::int32_t> a, b;
        const double ts = time_ms([&] { a = rasterize_triangle_map_serial(global_mesh, w, h); }, reps);
        const double tp = time_ms([&] { b = rasterize_triangle_map(global_mesh, w, h); }, reps);
        report("triangle_map", ts, tp, a == b);
    }
    {
        RasterImage a, b;
        const double ts =
            time_ms([&] { a = piecewise_affine_warp_serial(tgt_img, ref_mesh, global_mesh); }, reps);
        const double tp =
            time_ms([&] { b = piecewise_affine_warp(tgt_img, ref_mesh, global_mesh); }, reps);
        report("piecewise_warp", ts, tp, a.samples == b.samples);
    }
    FeaturePointSet fi_serial, fi_par;
    {
        const double ts =
            time_ms([&] { fi_serial = solve_all_serial(global_pts, local_pts, ref_mesh, 1.0); }, reps);
        const double tp = time_ms([&] { fi_par = solve_all(global_pts, local_pts, ref_mesh, 1.0); }, reps);
        bool same = true;
        for (int i = 0; i < fi_serial.size(); ++i) {
            same = same && fi_serial.pos(i) == fi_par.pos(i);
        }
        report("solve_all", ts, tp, same);
    }
    RatioImage eri_serial, eri_par;
    {
        const double ts = time_ms(
            [&] {
                eri_serial = compute_eri_serial(synth::synth_face_image(src_n),
                                                synth::synth_face_image(src_e), ref_mesh,
                                                src_n_pts, src_e_pts, fi_serial);
            },
            1);
        const double tp = time_ms(
            [&] {
                eri_par = compute_eri(synth::synth_face_image(src_n), synth::synth_face_image(src_e),
                                      ref_mesh, src_n_pts, src_e_pts, fi_par);
            },
            1);
        report("compute_eri", ts, tp, eri_serial.values == eri_par.values);
    }
    const std::vector<MuscleArea> areas =
        resolve_muscle_areas(parse_muscle_config(synth::default_muscle_config_text()), fi_par);
    ImportanceMask mask_serial, mask_par;
    {
        const double ts = time_ms([&] { mask_serial = build_mask_serial(areas, w, h); }, reps);
        const double tp = time_ms([&] { mask_par = build_mask(areas, w, h); }, reps);
        report("build_mask", ts, tp, mask_serial.values == mask_par.values);
    }
    {
        const RatioImage filtered = box_filter_3x3(eri_par);
        RatioImage da, db_;
        RasterImage fa, fb;
        const double ts = time_ms(
            [&] {
                da = apply_md_serial(filtered, mask_serial);
                fa = compose_final_serial(tgt_img, da);
            },
            reps);
        const double tp = time_ms(
            [&] {
                db_ = apply_md(filtered, mask_par);
                fb = compose_final(tgt_img, db_);
            },
            reps);
        report("apply_md+compose", ts, tp, da.values == db_.values && fa.samples == fb.samples);
    }
    return 0;
}
