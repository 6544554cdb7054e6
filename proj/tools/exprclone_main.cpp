#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "exprclone/pipeline.hpp"

namespace {

// exit codes: 0 success, 2 input/parse error, 3 numeric/stage error,
// 4 partial batch failure

void add_shared_options(CLI::App* cmd, exprclone::CloneJob& job, std::string& lambda_grid_csv) {
    cmd->add_option("--src-neutral", job.src_neutral_img_path, "source person's neutral face image")
        ->required();
    cmd->add_option("--src-neutral-pts", job.src_neutral_pts_path,
                    "feature points for the source neutral image")
        ->required();
    cmd->add_option("--tgt-neutral", job.tgt_neutral_img_path, "target person's neutral face image")
        ->required();
    cmd->add_option("--tgt-neutral-pts", job.tgt_neutral_pts_path,
                    "feature points for the target neutral image")
        ->required();
    cmd->add_option("--muscles", job.muscle_config_path, "key muscle area config file")->required();
    cmd->add_option("--train-dir", job.train_dir,
                    "directory of PGM/PPM expression images for PCA training");
    cmd->add_option("--basis-cache", job.basis_cache_path,
                    "EIGB1 sidecar file: loaded when present, written after training");
    cmd->add_option("--lambda", job.lambda_override,
                    "fixed elasticity ratio (skips the DB-metric selection)");
    cmd->add_option("--lambda-grid", lambda_grid_csv,
                    "comma-separated candidate elasticity ratios (default 0,0.125,...,8)");
    cmd->add_option("--db-report", job.db_report_path,
                    "write the per-lambda score table to this file");
    cmd->add_option("--dump-stages", job.dump_dir, "directory for intermediate stage dumps");
}

int run_clone_cmd(exprclone::CloneJob& job, const std::string& lambda_grid_csv) {
    if (!lambda_grid_csv.empty()) job.lambda_grid = exprclone::LambdaGrid::parse(lambda_grid_csv);
    exprclone::run_clone(job);
    return 0;
}

int run_batch_cmd(exprclone::BatchJob& job, const std::string& lambda_grid_csv) {
    if (!lambda_grid_csv.empty()) {
        job.base.lambda_grid = exprclone::LambdaGrid::parse(lambda_grid_csv);
    }
    const exprclone::BatchResult result = exprclone::run_batch(job);
    std::cerr << "exprclone: batch processed " << result.processed.size() << " frame(s)";
    if (!result.skipped.empty()) {
        std::cerr << ", skipped";
        for (int f : result.skipped) std::cerr << " " << f;
    }
    std::cerr << " (lambda " << result.lambda_used << ")\n";
    if (result.processed.empty()) return 2;
    if (!result.skipped.empty()) return 4;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"facial expression cloning via elastic warp balancing and "
                 "muscle-weighted illumination transfer"};
    app.require_subcommand(1);

    exprclone::CloneJob clone_job;
    std::string clone_grid_csv;
    CLI::App* clone_cmd = app.add_subcommand("clone", "clone one expression onto a target face");
    add_shared_options(clone_cmd, clone_job, clone_grid_csv);
    clone_cmd->add_option("--src-exp", clone_job.src_exp_img_path,
                          "source person's expression face image")
        ->required();
    clone_cmd->add_option("--src-exp-pts", clone_job.src_exp_pts_path,
                          "feature points for the source expression image")
        ->required();
    clone_cmd->add_option("-o,--output", clone_job.output_path, "output image (PGM/PPM)")
        ->required();

    exprclone::BatchJob batch_job;
    std::string batch_grid_csv;
    CLI::App* batch_cmd =
        app.add_subcommand("batch", "clone a numbered source expression sequence");
    add_shared_options(batch_cmd, batch_job.base, batch_grid_csv);
    batch_cmd->add_option("--frames", batch_job.frame_img_pattern,
                          "printf-style pattern for source expression frames, e.g. exp_%04d.ppm")
        ->required();
    batch_cmd->add_option("--frame-pts", batch_job.frame_pts_pattern,
                          "printf-style pattern for per-frame feature points")
        ->required();
    batch_cmd->add_option("--frame-start", batch_job.frame_start, "first frame index")->required();
    batch_cmd->add_option("--frame-end", batch_job.frame_end, "last frame index (inclusive)")
        ->required();
    batch_cmd->add_option("-o,--output", batch_job.output_pattern,
                          "printf-style pattern for output frames")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (clone_cmd->parsed()) return run_clone_cmd(clone_job, clone_grid_csv);
        return run_batch_cmd(batch_job, batch_grid_csv);
    } catch (const exprclone::ParseError& e) {
        std::cerr << "exprclone: " << e.what() << "\n";
        return 2;
    } catch (const exprclone::SchemaError& e) {
        std::cerr << "exprclone: " << e.what() << "\n";
        return 2;
    } catch (const exprclone::ImageError& e) {
        std::cerr << "exprclone: " << e.what() << "\n";
        return 2;
    } catch (const exprclone::Error& e) {
        std::cerr << "exprclone: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "exprclone: " << e.what() << "\n";
        return 3;
    }
}
