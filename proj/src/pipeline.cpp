#include "exprclone/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "exprclone/warp.hpp"

namespace exprclone {

namespace {

// Re-raises stage failures with a stage tag, preserving the error type.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError("[" + name + "] " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError("[" + name + "] " + e.what());
    } catch (const GeometryError& e) {
        throw GeometryError("[" + name + "] " + e.what());
    } catch (const ImageError& e) {
        throw ImageError("[" + name + "] " + e.what());
    } catch (const TrainingError& e) {
        throw TrainingError("[" + name + "] " + e.what());
    } catch (const Error& e) {
        throw Error("[" + name + "] " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageError("cannot write: " + path);
    out << text;
}

std::string image_name(const std::string& base, int channels) {
    return base + (channels == 1 ? ".pgm" : ".ppm");
}

std::optional<EigenBasis> acquire_basis(const CloneJob& job) {
    namespace fs = std::filesystem;
    if (!job.basis_cache_path.empty() && fs::exists(job.basis_cache_path)) {
        return load_basis(job.basis_cache_path);
    }
    if (!job.train_dir.empty()) {
        EigenBasis basis = train_basis_from_dir(job.train_dir);
        if (!job.basis_cache_path.empty()) save_basis(job.basis_cache_path, basis);
        return basis;
    }
    return std::nullopt;
}

} // namespace

CloneInputs load_inputs(const CloneJob& job) {
    CloneInputs in;
    in.src_neutral_img = read_image(job.src_neutral_img_path);
    in.src_exp_img = read_image(job.src_exp_img_path);
    in.tgt_neutral_img = read_image(job.tgt_neutral_img_path);
    in.src_neutral_pts = load_feature_points(job.src_neutral_pts_path, in.src_neutral_img.size());
    in.src_exp_pts = load_feature_points(job.src_exp_pts_path, in.src_exp_img.size());
    in.tgt_neutral_pts = load_feature_points(job.tgt_neutral_pts_path, in.tgt_neutral_img.size());
    require_same_schema(in.src_neutral_pts, in.src_exp_pts, "inputs(src neutral vs src expression)");
    require_same_schema(in.src_neutral_pts, in.tgt_neutral_pts, "inputs(source vs target)");
    in.muscle_config = load_muscle_config(job.muscle_config_path);
    in.basis = acquire_basis(job);
    return in;
}

StageOutputs run_clone_loaded(const CloneInputs& in, const CloneJob& job) {
    StageOutputs out;

    const TriangleMesh ref_mesh =
        stage("triangulation", [&] { return delaunay_triangulate(in.tgt_neutral_pts); });

    const GlobalWarpResult global = stage("global-warp", [&] {
        return global_warp(in.tgt_neutral_img, ref_mesh, in.src_neutral_pts, in.src_exp_pts,
                           in.tgt_neutral_pts);
    });
    out.global_pts = global.positions;
    out.global_img = global.image;

    out.local_pts = stage("local-reshape", [&] {
        return reshape_all(in.src_exp_pts, global.positions, &out.reshape_records);
    });

    auto render_for_lambda = [&](double lambda) {
        const FeaturePointSet pts =
            solve_all(global.positions, out.local_pts, ref_mesh, lambda);
        return piecewise_affine_warp(in.tgt_neutral_img, ref_mesh,
                                     mesh_with_positions(ref_mesh, pts));
    };

    if (job.lambda_override) {
        out.lambda_opt = *job.lambda_override;
        if (out.lambda_opt < 0.0) throw Error("[elastic] lambda must be >= 0");
    } else if (in.basis) {
        const LambdaSelection sel = stage("lambda-selection", [&] {
            return select_lambda(job.lambda_grid, render_for_lambda, *in.basis, in.src_exp_img,
                                 global.image, job.omega_db);
        });
        out.lambda_opt = sel.lambda_opt;
        out.score_table = sel.table;
        std::cerr << "exprclone: selected lambda " << out.lambda_opt << "\n";
    } else {
        out.lambda_opt = 1.0;
        std::cerr << "exprclone: no --lambda and no training set; using lambda = 1\n";
    }

    out.fi_pts = stage("elastic", [&] {
        return solve_all(global.positions, out.local_pts, ref_mesh, out.lambda_opt,
                         &out.solve_report);
    });
    out.fi_img = stage("render-fi", [&] {
        return piecewise_affine_warp(in.tgt_neutral_img, ref_mesh,
                                     mesh_with_positions(ref_mesh, out.fi_pts));
    });

    out.eri = stage("eri", [&] {
        return compute_eri(in.src_neutral_img, in.src_exp_img, ref_mesh, in.src_neutral_pts,
                           in.src_exp_pts, out.fi_pts);
    });
    const RatioImage eri_filtered = stage("eri", [&] { return box_filter_3x3(out.eri); });

    const std::vector<MuscleArea> areas = stage("muscle-mask", [&] {
        return resolve_muscle_areas(in.muscle_config, out.fi_pts);
    });
    if (areas.empty()) {
        // MD disabled: the mask is identically 1, so the detail field is the
        // filtered ERI itself
        out.detail = eri_filtered;
    } else {
        out.mask = stage("muscle-mask", [&] {
            return build_mask(areas, out.eri.width, out.eri.height);
        });
        out.detail = stage("muscle-mask", [&] { return apply_md(eri_filtered, out.mask); });
    }

    out.final_img = stage("compose", [&] { return compose_final(out.fi_img, out.detail); });

    if (!job.output_path.empty()) {
        stage("write-output", [&] {
            write_image(job.output_path, out.final_img);
            return 0;
        });
    }
    if (!job.db_report_path.empty()) {
        if (out.score_table.empty()) {
            std::cerr << "exprclone: --db-report ignored (lambda was fixed, no selection ran)\n";
        } else {
            write_text(job.db_report_path, format_db_report(out.score_table));
        }
    }

    if (!job.dump_dir.empty()) {
        stage("dump-stages", [&] {
            namespace fs = std::filesystem;
            fs::create_directories(job.dump_dir);
            const std::string d = job.dump_dir + "/";
            write_image(image_name(d + "gi", out.global_img.channels), out.global_img);
            const RasterImage li = piecewise_affine_warp(
                in.tgt_neutral_img, ref_mesh, mesh_with_positions(ref_mesh, out.local_pts));
            write_image(image_name(d + "li", li.channels), li);
            write_image(image_name(d + "fi", out.fi_img.channels), out.fi_img);
            save_feature_points(d + "global_pts.txt", out.global_pts);
            save_feature_points(d + "local_pts.txt", out.local_pts);
            save_feature_points(d + "fi_pts.txt", out.fi_pts);
            write_text(d + "reshape_records.txt", format_reshape_records(out.reshape_records));

            write_image(d + "eri.pgm", ratio_debug_image(out.eri.values, out.eri.width,
                                                         out.eri.height, kRatioMin, kRatioMax));
            write_image(d + "detail.pgm",
                        ratio_debug_image(out.detail.values, out.detail.width, out.detail.height,
                                          kRatioMin, kRatioMax));
            std::cerr << "exprclone: dumped eri.pgm/detail.pgm with [" << kRatioMin << ", "
                      << kRatioMax << "] mapped to [0, 255]\n";
            if (!out.mask.values.empty()) {
                const double mask_hi =
                    *std::max_element(out.mask.values.begin(), out.mask.values.end());
                write_image(d + "mask.pgm", ratio_debug_image(out.mask.values, out.mask.width,
                                                              out.mask.height, 1.0, mask_hi));
                std::cerr << "exprclone: dumped mask.pgm with [1, " << mask_hi
                          << "] mapped to [0, 255]\n";
            }

            std::ostringstream solve_txt;
            solve_txt << "# id x y residual win_lo_x win_lo_y win_hi_x win_hi_y\n";
            char buf[256];
            for (size_t i = 0; i < out.solve_report.points.size(); ++i) {
                const PointSolution& s = out.solve_report.points[i];
                std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                              i, s.p_opt.x, s.p_opt.y, s.residual, s.window.lo.x, s.window.lo.y,
                              s.window.hi.x, s.window.hi.y);
                solve_txt << buf;
            }
            write_text(d + "fi_report.txt", solve_txt.str());
            return 0;
        });
    }
    return out;
}

StageOutputs run_clone(const CloneJob& job) {
    const CloneInputs inputs = load_inputs(job);
    return run_clone_loaded(inputs, job);
}

std::string format_frame_path(const std::string& pattern, int frame) {
    int conversions = 0;
    for (size_t i = 0; i + 1 < pattern.size(); ++i) {
        if (pattern[i] != '%') continue;
        if (pattern[i + 1] == '%') {
            ++i;
            continue;
        }
        size_t j = i + 1;
        while (j < pattern.size() && (std::isdigit(pattern[j]) || pattern[j] == '0')) ++j;
        if (j >= pattern.size() || pattern[j] != 'd') {
            throw ParseError("frame pattern `" + pattern + "`: only %d conversions are supported");
        }
        ++conversions;
        i = j;
    }
    if (conversions != 1) {
        throw ParseError("frame pattern `" + pattern + "`: needs exactly one %d conversion");
    }
    char buf[4096];
#ifdef __GNUC__
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wformat-nonliteral"
#endif
    std::snprintf(buf, sizeof(buf), pattern.c_str(), frame);
#ifdef __GNUC__
#pragma GCC diagnostic pop
#endif
    return buf;
}

BatchResult run_batch(const BatchJob& job) {
    namespace fs = std::filesystem;
    if (job.frame_end < job.frame_start) {
        throw ParseError("batch: frame range is empty (start > end)");
    }

    // shared inputs: everything but the per-frame source expression
    CloneJob shared = job.base;
    BatchResult result;

    RasterImage tgt_img = read_image(shared.tgt_neutral_img_path);
    RasterImage src_neutral_img = read_image(shared.src_neutral_img_path);
    FeaturePointSet tgt_pts = load_feature_points(shared.tgt_neutral_pts_path, tgt_img.size());
    FeaturePointSet src_neutral_pts =
        load_feature_points(shared.src_neutral_pts_path, src_neutral_img.size());
    require_same_schema(src_neutral_pts, tgt_pts, "batch inputs(source vs target)");
    MuscleAreaConfig muscle_config = load_muscle_config(shared.muscle_config_path);
    std::optional<EigenBasis> basis = acquire_basis(shared);

    std::optional<double> lambda = shared.lambda_override;

    for (int frame = job.frame_start; frame <= job.frame_end; ++frame) {
        const std::string img_path = format_frame_path(job.frame_img_pattern, frame);
        const std::string pts_path = format_frame_path(job.frame_pts_pattern, frame);
        if (!fs::exists(img_path) || !fs::exists(pts_path)) {
            std::cerr << "exprclone: skipping frame " << frame << " (missing " << img_path
                      << " or " << pts_path << ")\n";
            result.skipped.push_back(frame);
            continue;
        }
        CloneInputs in;
        in.src_neutral_img = src_neutral_img;
        in.tgt_neutral_img = tgt_img;
        in.src_neutral_pts = src_neutral_pts;
        in.tgt_neutral_pts = tgt_pts;
        in.src_exp_img = read_image(img_path);
        in.src_exp_pts = load_feature_points(pts_path, in.src_exp_img.size());
        require_same_schema(in.src_neutral_pts, in.src_exp_pts,
                            "batch frame " + std::to_string(frame));
        in.muscle_config = muscle_config;
        in.basis = basis;

        CloneJob frame_job = shared;
        frame_job.output_path = format_frame_path(job.output_pattern, frame);
        frame_job.db_report_path.clear();
        frame_job.dump_dir.clear();
        frame_job.lambda_override = lambda;

        const StageOutputs outputs = run_clone_loaded(in, frame_job);
        if (!lambda) {
            // selection happens once, on the first available frame
            lambda = outputs.lambda_opt;
            if (!shared.db_report_path.empty() && !outputs.score_table.empty()) {
                write_text(shared.db_report_path, format_db_report(outputs.score_table));
            }
        }
        result.processed.push_back(frame);
    }
    result.lambda_used = lambda.value_or(1.0);
    return result;
}

} // namespace exprclone
