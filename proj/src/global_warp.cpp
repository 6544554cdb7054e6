#include "exprclone/global_warp.hpp"

#include "exprclone/warp.hpp"

namespace exprclone {

FeaturePointSet transfer_displacements(const FeaturePointSet& src_neutral,
                                       const FeaturePointSet& src_exp,
                                       const FeaturePointSet& tgt_neutral) {
    require_same_schema(src_neutral, src_exp, "transfer_displacements(src pair)");
    require_same_schema(src_neutral, tgt_neutral, "transfer_displacements(src vs tgt)");

    const OrganBox src_face = full_bounding_box(src_neutral);
    const OrganBox tgt_face = full_bounding_box(tgt_neutral);
    if (src_face.w <= 0.0 || src_face.h <= 0.0) {
        throw GeometryError("transfer_displacements: source face bounding box has zero area");
    }
    const double sx = tgt_face.w / src_face.w;
    const double sy = tgt_face.h / src_face.h;

    std::vector<Vec2> out(static_cast<size_t>(tgt_neutral.size()));
    for (int i = 0; i < tgt_neutral.size(); ++i) {
        const Vec2 delta = src_exp.pos(i) - src_neutral.pos(i);
        out[static_cast<size_t>(i)] =
            tgt_neutral.pos(i) + Vec2{sx * delta.x, sy * delta.y};
    }
    return tgt_neutral.with_positions(out);
}

RasterImage render_global(const RasterImage& tgt_neutral_img, const TriangleMesh& ref_mesh,
                          const FeaturePointSet& global_pts) {
    const TriangleMesh global_mesh = mesh_with_positions(ref_mesh, global_pts);
    return piecewise_affine_warp(tgt_neutral_img, ref_mesh, global_mesh);
}

GlobalWarpResult global_warp(const RasterImage& tgt_neutral_img, const TriangleMesh& ref_mesh,
                             const FeaturePointSet& src_neutral, const FeaturePointSet& src_exp,
                             const FeaturePointSet& tgt_neutral) {
    GlobalWarpResult result;
    result.positions = transfer_displacements(src_neutral, src_exp, tgt_neutral);
    result.image = render_global(tgt_neutral_img, ref_mesh, result.positions);
    return result;
}

} // namespace exprclone
