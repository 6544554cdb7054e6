#include "exprclone/local_reshape.hpp"

#include <cstdio>
#include <sstream>

namespace exprclone {

FeaturePointSet reshape_organ(const FeaturePointSet& src_exp, const FeaturePointSet& global_pts,
                              Organ organ, ReshapeRecord* record) {
    require_same_schema(src_exp, global_pts, "reshape_organ");
    const std::vector<int> ids = organ_point_ids(src_exp, organ);
    if (ids.size() < 2) {
        throw GeometryError(std::string("degenerate organ `") + std::string(to_string(organ)) +
                            "`: fewer than 2 points");
    }
    const OrganBox src_box = organ_bounding_box(src_exp, organ);
    const OrganBox tgt_box = organ_bounding_box(global_pts, organ);
    if (src_box.w <= 0.0 || src_box.h <= 0.0) {
        throw GeometryError(std::string("degenerate organ `") + std::string(to_string(organ)) +
                            "`: source expression box has zero width or height");
    }
    if (tgt_box.w <= 0.0) {
        throw GeometryError(std::string("degenerate organ `") + std::string(to_string(organ)) +
                            "`: globally warped box has zero width");
    }
    const double scale = tgt_box.w / src_box.w;

    std::vector<Vec2> positions(static_cast<size_t>(global_pts.size()));
    for (int i = 0; i < global_pts.size(); ++i) positions[static_cast<size_t>(i)] = global_pts.pos(i);
    for (int id : ids) {
        const Vec2 src = src_exp.pos(id);
        const double off_x = src.x - src_box.cx;
        const double off_y = src.y - src_box.cy;
        positions[static_cast<size_t>(id)] =
            Vec2{tgt_box.cx + off_x * scale, tgt_box.cy + off_y * scale};
    }
    if (record) {
        record->organ = organ;
        record->src_box = src_box;
        record->tgt_box = tgt_box;
        record->scale = scale;
    }
    return global_pts.with_positions(positions);
}

FeaturePointSet reshape_all(const FeaturePointSet& src_exp, const FeaturePointSet& global_pts,
                            std::vector<ReshapeRecord>* records) {
    require_same_schema(src_exp, global_pts, "reshape_all");
    FeaturePointSet current = global_pts;
    for (Organ organ : kAllOrgans) {
        if (organ == Organ::contour) continue; // contour keeps its global positions
        if (organ_point_ids(src_exp, organ).empty()) continue;
        ReshapeRecord record;
        current = reshape_organ(src_exp, current, organ, &record);
        if (records) records->push_back(record);
    }
    return current;
}

std::string format_reshape_records(const std::vector<ReshapeRecord>& records) {
    std::ostringstream os;
    os << "# organ src_w src_h src_cx src_cy tgt_w tgt_h tgt_cx tgt_cy scale\n";
    char buf[256];
    for (const ReshapeRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%s %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                      std::string(to_string(r.organ)).c_str(), r.src_box.w, r.src_box.h,
                      r.src_box.cx, r.src_box.cy, r.tgt_box.w, r.tgt_box.h, r.tgt_box.cx,
                      r.tgt_box.cy, r.scale);
        os << buf;
    }
    return os.str();
}

} // namespace exprclone
