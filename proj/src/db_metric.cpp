#include "exprclone/db_metric.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace exprclone {

namespace {

double feature_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace

DbScore db_score(const EigenBasis& basis, const RasterImage& candidate,
                 const RasterImage& source_exp, const RasterImage& global_img, double omega_db) {
    if (omega_db < 0.0) throw Error("db_score: omega_db must be >= 0");
    const std::vector<double> e_candidate = project(basis, candidate);
    const std::vector<double> e_source = project(basis, source_exp);
    const std::vector<double> e_global = project(basis, global_img);
    const double d_source = feature_distance(e_candidate, e_source);
    const double d_global = feature_distance(e_candidate, e_global);
    DbScore score;
    score.omega_db = omega_db;
    score.term_source = std::exp(d_source);
    score.term_global = std::exp(d_global);
    score.total = score.term_source + omega_db * score.term_global;
    if (omega_db == 0.0) {
        score.log_total = d_source;
    } else {
        const double m = std::max(d_source, d_global);
        score.log_total =
            m + std::log(std::exp(d_source - m) + omega_db * std::exp(d_global - m));
    }
    return score;
}

LambdaGrid LambdaGrid::default_grid() {
    return LambdaGrid{{0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}};
}

LambdaGrid LambdaGrid::parse(const std::string& csv) {
    LambdaGrid grid;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            grid.values.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("lambda grid: non-numeric entry `" + tok + "`");
        }
    }
    if (grid.values.empty()) throw ParseError("lambda grid: empty");
    for (size_t i = 0; i < grid.values.size(); ++i) {
        if (grid.values[i] < 0.0) throw ParseError("lambda grid: negative entry");
        if (i > 0 && grid.values[i] <= grid.values[i - 1]) {
            throw ParseError("lambda grid: values must be strictly increasing");
        }
    }
    return grid;
}

LambdaSelection select_lambda(const LambdaGrid& grid,
                              const std::function<RasterImage(double)>& evaluate,
                              const EigenBasis& basis, const RasterImage& source_exp,
                              const RasterImage& global_img, double omega_db) {
    if (grid.values.empty()) throw Error("select_lambda: empty grid");
    const RasterImage fitted_source = fit_to_dims(source_exp, basis.width, basis.height);
    const RasterImage fitted_global = fit_to_dims(global_img, basis.width, basis.height);

    LambdaSelection sel;
    size_t best = 0;
    for (size_t i = 0; i < grid.values.size(); ++i) {
        const double lambda = grid.values[i];
        const RasterImage candidate = fit_to_dims(evaluate(lambda), basis.width, basis.height);
        LambdaScoreRow row;
        row.lambda = lambda;
        row.score = db_score(basis, candidate, fitted_source, fitted_global, omega_db);
        sel.table.push_back(row);
        if (row.score.log_total < sel.table[best].score.log_total) best = i;
    }
    sel.lambda_opt = sel.table[best].lambda;
    return sel;
}

std::string format_db_report(const std::vector<LambdaScoreRow>& table) {
    std::ostringstream os;
    char buf[160];
    for (const LambdaScoreRow& row : table) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", row.lambda, row.score.total,
                      row.score.term_source, row.score.term_global);
        os << buf;
    }
    return os.str();
}

} // namespace exprclone
