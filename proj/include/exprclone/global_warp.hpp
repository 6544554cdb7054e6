#pragma once

#include "exprclone/face_model.hpp"
#include "exprclone/image.hpp"
#include "exprclone/mesh.hpp"

namespace exprclone {

// Globally warped target expression: displaced feature positions plus the
// warped image (GI).
struct GlobalWarpResult {
    FeaturePointSet positions;
    RasterImage image;
};

// Moves each target-neutral point by the source neutral->expression
// displacement, scaled anisotropically by the ratio of the full-set bounding
// boxes (target face size over source face size).
FeaturePointSet transfer_displacements(const FeaturePointSet& src_neutral,
                                       const FeaturePointSet& src_exp,
                                       const FeaturePointSet& tgt_neutral);

// Warps the target neutral image from the reference mesh to the displaced
// point set. ref_mesh is the triangulation of the target neutral points; its
// connectivity is reused for the displaced mesh.
RasterImage render_global(const RasterImage& tgt_neutral_img, const TriangleMesh& ref_mesh,
                          const FeaturePointSet& global_pts);

GlobalWarpResult global_warp(const RasterImage& tgt_neutral_img, const TriangleMesh& ref_mesh,
                             const FeaturePointSet& src_neutral, const FeaturePointSet& src_exp,
                             const FeaturePointSet& tgt_neutral);

} // namespace exprclone
