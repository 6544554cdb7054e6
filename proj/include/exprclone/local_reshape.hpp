#pragma once

#include <string>
#include <vector>

#include "exprclone/face_model.hpp"

namespace exprclone {

// One organ's re-shape bookkeeping: source expression box, globally warped
// box, and the uniform scale applied about the target box center.
struct ReshapeRecord {
    Organ organ = Organ::mouth;
    OrganBox src_box;
    OrganBox tgt_box;
    double scale = 1.0; // target width over source width
};

// Re-shapes one organ of the globally warped point set so its
// height-to-width ratio matches the source expression organ: each organ
// point is placed at the target box center plus its source mid-line offsets
// scaled by (target width / source width). All other points are untouched.
FeaturePointSet reshape_organ(const FeaturePointSet& src_exp, const FeaturePointSet& global_pts,
                              Organ organ, ReshapeRecord* record = nullptr);

// Applies reshape_organ to every non-contour organ present in the sets,
// producing the local-warp point set.
FeaturePointSet reshape_all(const FeaturePointSet& src_exp, const FeaturePointSet& global_pts,
                            std::vector<ReshapeRecord>* records = nullptr);

std::string format_reshape_records(const std::vector<ReshapeRecord>& records);

} // namespace exprclone
