#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exprclone/db_metric.hpp"
#include "exprclone/eigenface.hpp"
#include "exprclone/elastic.hpp"
#include "exprclone/face_model.hpp"
#include "exprclone/global_warp.hpp"
#include "exprclone/illumination.hpp"
#include "exprclone/image.hpp"
#include "exprclone/local_reshape.hpp"
#include "exprclone/mesh.hpp"

namespace exprclone {

// One clone run: input file paths, knobs, output destinations.
struct CloneJob {
    std::string src_neutral_img_path;
    std::string src_neutral_pts_path;
    std::string src_exp_img_path;
    std::string src_exp_pts_path;
    std::string tgt_neutral_img_path;
    std::string tgt_neutral_pts_path;
    std::string muscle_config_path;
    std::string train_dir;        // optional; enables the DB metric
    std::string basis_cache_path; // optional EIGB1 sidecar
    std::optional<double> lambda_override;
    LambdaGrid lambda_grid = LambdaGrid::default_grid();
    double omega_db = 1.0;
    std::string output_path;
    std::string db_report_path; // optional
    std::string dump_dir;       // optional: writes every intermediate
};

// Inputs resolved into memory; shared across batch frames.
struct CloneInputs {
    RasterImage src_neutral_img;
    RasterImage src_exp_img;
    RasterImage tgt_neutral_img;
    FeaturePointSet src_neutral_pts;
    FeaturePointSet src_exp_pts;
    FeaturePointSet tgt_neutral_pts;
    MuscleAreaConfig muscle_config;
    std::optional<EigenBasis> basis;
};

struct StageOutputs {
    FeaturePointSet global_pts;
    RasterImage global_img;
    FeaturePointSet local_pts;
    std::vector<ReshapeRecord> reshape_records;
    double lambda_opt = 1.0;
    std::vector<LambdaScoreRow> score_table; // empty when lambda was fixed
    FeaturePointSet fi_pts;
    RasterImage fi_img;
    SolveReport solve_report;
    RatioImage eri;
    RatioImage detail;
    ImportanceMask mask; // empty (all ones) when the muscle config has no areas
    RasterImage final_img;
};

CloneInputs load_inputs(const CloneJob& job);

// Full chain on pre-loaded inputs; writes output/report/dump files per job.
StageOutputs run_clone_loaded(const CloneInputs& inputs, const CloneJob& job);

// Convenience: load_inputs + run_clone_loaded.
StageOutputs run_clone(const CloneJob& job);

// Frame sequence: numbered source expression images and point files, one
// shared target neutral and source neutral. The basis is trained once; the
// elasticity ratio is selected on the first available frame and reused.
struct BatchJob {
    CloneJob base; // src_exp paths and output_path are ignored
    std::string frame_img_pattern; // printf-style, one integer conversion
    std::string frame_pts_pattern;
    std::string output_pattern;
    int frame_start = 0;
    int frame_end = 0;
};

struct BatchResult {
    std::vector<int> processed;
    std::vector<int> skipped;
    double lambda_used = 1.0;
};

BatchResult run_batch(const BatchJob& job);

// Expands a printf-style frame pattern (validated to hold exactly one
// integer conversion).
std::string format_frame_path(const std::string& pattern, int frame);

} // namespace exprclone
