#pragma once

#include <array>
#include <string>
#include <vector>

#include "exprclone/face_model.hpp"
#include "exprclone/image.hpp"
#include "exprclone/mesh.hpp"

namespace exprclone {

// Ratio clamp bounds and the divide guard for ERI construction.
inline constexpr double kRatioMin = 0.2;
inline constexpr double kRatioMax = 5.0;
inline constexpr double kEriDenomFloor = 1.0; // on the 0..255 scale

// Gaussian boosts beyond this many sigmas contribute nothing.
inline constexpr double kMaskCutoffSigmas = 4.0;

// Per-pixel luminance ratio field (expression over neutral), clamped.
struct RatioImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    static RatioImage make(int width, int height, double fill = 1.0);
    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

// A resolved key muscle area: center and radius in pixels, boost strength h.
struct MuscleArea {
    std::string name;
    Vec2 center;
    double radius = 0.0;
    double strength = 0.0;
};

// Unresolved config entry: landmark ids for the center (one id or the
// centroid of several) and two reference ids whose distance scales the radius.
struct MuscleAreaSpec {
    std::string name;
    std::vector<int> center_ids;
    std::array<int, 2> ref_ids{0, 0};
    double radius_scale = 1.0;
    double strength = 0.5; // default boost when the config omits h
};

struct MuscleAreaConfig {
    std::vector<MuscleAreaSpec> areas;
};

// Config format: one `<name> center=<id>|<id,id,...> ref=<id>,<id>
// radius_scale=<real> h=<real>` per line; `#` starts a comment.
MuscleAreaConfig parse_muscle_config(const std::string& text);
MuscleAreaConfig load_muscle_config(const std::string& path);

// Anchors the areas on a concrete point set (FI geometry).
std::vector<MuscleArea> resolve_muscle_areas(const MuscleAreaConfig& config,
                                             const FeaturePointSet& pts);

// Detail importance mask M(u,v) = 1 + sum of per-area Gaussian boosts with
// sigma = r / sqrt(ln 2), cut off beyond kMaskCutoffSigmas sigmas.
struct ImportanceMask {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

ImportanceMask build_mask(const std::vector<MuscleArea>& areas, int width, int height);
ImportanceMask build_mask_serial(const std::vector<MuscleArea>& areas, int width, int height);

// Expression ratio image in FI geometry: warps the source neutral and source
// expression luminance onto the FI mesh and divides, guarding the denominator
// with kEriDenomFloor; pixels outside the warped face hull get ratio 1.
RatioImage compute_eri(const RasterImage& src_neutral_img, const RasterImage& src_exp_img,
                       const TriangleMesh& ref_mesh, const FeaturePointSet& src_neutral_pts,
                       const FeaturePointSet& src_exp_pts, const FeaturePointSet& fi_pts);
RatioImage compute_eri_serial(const RasterImage& src_neutral_img, const RasterImage& src_exp_img,
                              const TriangleMesh& ref_mesh, const FeaturePointSet& src_neutral_pts,
                              const FeaturePointSet& src_exp_pts, const FeaturePointSet& fi_pts);

// 3x3 box pre-filter (edge-replicated) applied to the ERI before the detail
// mask re-strengthens the muscle areas.
RatioImage box_filter_3x3(const RatioImage& eri);
RatioImage box_filter_3x3_serial(const RatioImage& eri);

// Detail field 1 + M (ERI - 1), re-clamped to the ratio bounds.
RatioImage apply_md(const RatioImage& eri, const ImportanceMask& mask);
RatioImage apply_md_serial(const RatioImage& eri, const ImportanceMask& mask);

// Multiplies every channel by the luminance-domain detail factor, clamped to
// the 8-bit range.
RasterImage compose_final(const RasterImage& fi_img, const RatioImage& detail);
RasterImage compose_final_serial(const RasterImage& fi_img, const RatioImage& detail);

// Affine 0..255 visualization of a ratio/mask field for debug dumps.
RasterImage ratio_debug_image(const std::vector<double>& values, int width, int height, double lo,
                              double hi);

} // namespace exprclone
