#pragma once

#include <functional>
#include <string>
#include <vector>

#include "exprclone/eigenface.hpp"
#include "exprclone/image.hpp"

namespace exprclone {

// Distance-based score of one candidate: exp of the feature-space distance
// to the source expression plus a weighted exp of the distance to the global
// warp reference. Feature distances of real images run into the thousands,
// where exp() overflows double, so the score also carries log_total
// (= log(e^d1 + omega e^d2), evaluated stably); comparisons use it, the
// reported terms keep the plain formula.
struct DbScore {
    double term_source = 0.0;
    double term_global = 0.0;
    double omega_db = 1.0;
    double total = 0.0;
    double log_total = 0.0;
};

DbScore db_score(const EigenBasis& basis, const RasterImage& candidate,
                 const RasterImage& source_exp, const RasterImage& global_img,
                 double omega_db = 1.0);

// Candidate elasticity ratios: strictly increasing, zero allowed first.
struct LambdaGrid {
    std::vector<double> values;

    static LambdaGrid default_grid(); // {0, 0.125, 0.25, 0.5, 1, 2, 4, 8}
    static LambdaGrid parse(const std::string& csv);
};

struct LambdaScoreRow {
    double lambda = 0.0;
    DbScore score;
};

struct LambdaSelection {
    double lambda_opt = 0.0;
    std::vector<LambdaScoreRow> table; // one row per grid candidate, grid order
};

// Evaluates every grid candidate through `evaluate` (the full geometric
// pipeline for that lambda), scores it against the basis, and returns the
// minimizer; ties break toward the smallest lambda. Candidate images are
// center-cropped/edge-padded to basis dimensions before projecting.
LambdaSelection select_lambda(const LambdaGrid& grid,
                              const std::function<RasterImage(double)>& evaluate,
                              const EigenBasis& basis, const RasterImage& source_exp,
                              const RasterImage& global_img, double omega_db = 1.0);

// One `lambda total term_source term_global` line per row.
std::string format_db_report(const std::vector<LambdaScoreRow>& table);

} // namespace exprclone
