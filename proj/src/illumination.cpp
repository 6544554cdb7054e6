#include "exprclone/illumination.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "exprclone/warp.hpp"

namespace exprclone {

RatioImage RatioImage::make(int width, int height, double fill) {
    if (width < 1 || height < 1) throw ImageError("ratio image: bad dimensions");
    RatioImage r;
    r.width = width;
    r.height = height;
    r.values.assign(static_cast<size_t>(width) * height, fill);
    return r;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

std::vector<int> parse_id_list(const std::string& text, int line_no) {
    std::vector<int> ids;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
            ids.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("muscle config line " + std::to_string(line_no) + ": bad id `" + tok +
                             "`");
        }
    }
    if (ids.empty()) {
        throw ParseError("muscle config line " + std::to_string(line_no) + ": empty id list");
    }
    return ids;
}

double parse_real(const std::string& text, int line_no, const char* key) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("muscle config line " + std::to_string(line_no) + ": bad " + key +
                         " value `" + text + "`");
    }
}

} // namespace

MuscleAreaConfig parse_muscle_config(const std::string& text) {
    MuscleAreaConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::vector<std::string> toks = split_ws(line);
        if (toks.empty()) continue;

        MuscleAreaSpec spec;
        spec.name = toks[0];
        bool have_center = false, have_ref = false, have_scale = false;
        for (size_t i = 1; i < toks.size(); ++i) {
            const size_t eq = toks[i].find('=');
            if (eq == std::string::npos) {
                throw ParseError("muscle config line " + std::to_string(line_no) +
                                 ": expected key=value, got `" + toks[i] + "`");
            }
            const std::string key = toks[i].substr(0, eq);
            const std::string value = toks[i].substr(eq + 1);
            if (key == "center") {
                spec.center_ids = parse_id_list(value, line_no);
                have_center = true;
            } else if (key == "ref") {
                const std::vector<int> ids = parse_id_list(value, line_no);
                if (ids.size() != 2) {
                    throw ParseError("muscle config line " + std::to_string(line_no) +
                                     ": ref needs exactly 2 ids");
                }
                spec.ref_ids = {ids[0], ids[1]};
                have_ref = true;
            } else if (key == "radius_scale") {
                spec.radius_scale = parse_real(value, line_no, "radius_scale");
                have_scale = true;
            } else if (key == "h") {
                spec.strength = parse_real(value, line_no, "h");
            } else {
                throw ParseError("muscle config line " + std::to_string(line_no) +
                                 ": unknown key `" + key + "`");
            }
        }
        if (!have_center || !have_ref || !have_scale) {
            throw ParseError("muscle config line " + std::to_string(line_no) +
                             ": needs center=, ref= and radius_scale=");
        }
        if (spec.radius_scale <= 0.0) {
            throw ParseError("muscle config line " + std::to_string(line_no) +
                             ": radius_scale must be > 0");
        }
        if (spec.strength < 0.0) {
            throw ParseError("muscle config line " + std::to_string(line_no) +
                             ": h must be >= 0");
        }
        config.areas.push_back(std::move(spec));
    }
    return config;
}

MuscleAreaConfig load_muscle_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open muscle config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_muscle_config(buf.str());
}

std::vector<MuscleArea> resolve_muscle_areas(const MuscleAreaConfig& config,
                                             const FeaturePointSet& pts) {
    std::vector<MuscleArea> areas;
    const ImageSize size = pts.image_size();
    for (const MuscleAreaSpec& spec : config.areas) {
        MuscleArea area;
        area.name = spec.name;
        Vec2 c{0.0, 0.0};
        for (int id : spec.center_ids) {
            if (id < 0 || id >= pts.size()) {
                throw GeometryError("muscle area `" + spec.name + "`: unknown feature id " +
                                    std::to_string(id));
            }
            c = c + pts.pos(id);
        }
        area.center = (1.0 / static_cast<double>(spec.center_ids.size())) * c;
        for (int id : spec.ref_ids) {
            if (id < 0 || id >= pts.size()) {
                throw GeometryError("muscle area `" + spec.name + "`: unknown reference id " +
                                    std::to_string(id));
            }
        }
        area.radius = spec.radius_scale * distance(pts.pos(spec.ref_ids[0]), pts.pos(spec.ref_ids[1]));
        area.strength = spec.strength;
        if (area.radius <= 0.0) {
            throw GeometryError("muscle area `" + spec.name + "`: zero radius (reference points coincide)");
        }
        if (area.center.x < 0.0 || area.center.x > size.width - 1 || area.center.y < 0.0 ||
            area.center.y > size.height - 1) {
            throw GeometryError("muscle area `" + spec.name + "`: center outside the image");
        }
        areas.push_back(std::move(area));
    }
    return areas;
}

namespace {

struct AreaParams {
    double cx, cy;
    double inv_two_sigma2; // 1 / (2 sigma^2)
    double cutoff2;        // (kMaskCutoffSigmas * sigma)^2
    double h;
};

std::vector<AreaParams> precompute_areas(const std::vector<MuscleArea>& areas) {
    std::vector<AreaParams> out;
    out.reserve(areas.size());
    for (const MuscleArea& a : areas) {
        const double sigma = a.radius / std::sqrt(std::log(2.0));
        AreaParams p;
        p.cx = a.center.x;
        p.cy = a.center.y;
        p.inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
        const double cut = kMaskCutoffSigmas * sigma;
        p.cutoff2 = cut * cut;
        p.h = a.strength;
        out.push_back(p);
    }
    return out;
}

double mask_value(const std::vector<AreaParams>& areas, double x, double y) {
    double m = 1.0;
    for (const AreaParams& a : areas) {
        const double dx = x - a.cx;
        const double dy = y - a.cy;
        const double d2 = dx * dx + dy * dy;
        if (d2 > a.cutoff2) continue;
        m += a.h * std::exp(-d2 * a.inv_two_sigma2);
    }
    return m;
}

ImportanceMask build_mask_impl(const std::vector<MuscleArea>& areas, int width, int height,
                               bool parallel) {
    if (width < 1 || height < 1) throw ImageError("build_mask: bad dimensions");
    ImportanceMask mask;
    mask.width = width;
    mask.height = height;
    mask.values.assign(static_cast<size_t>(width) * height, 1.0);
    const std::vector<AreaParams> params = precompute_areas(areas);
    if (params.empty()) return mask;

#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < height; ++y) {
        double* row = mask.values.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            row[x] = mask_value(params, static_cast<double>(x), static_cast<double>(y));
        }
    }
    return mask;
}

} // namespace

ImportanceMask build_mask(const std::vector<MuscleArea>& areas, int width, int height) {
    return build_mask_impl(areas, width, height, true);
}

ImportanceMask build_mask_serial(const std::vector<MuscleArea>& areas, int width, int height) {
    return build_mask_impl(areas, width, height, false);
}

namespace {

RatioImage compute_eri_impl(const RasterImage& src_neutral_img, const RasterImage& src_exp_img,
                            const TriangleMesh& ref_mesh, const FeaturePointSet& src_neutral_pts,
                            const FeaturePointSet& src_exp_pts, const FeaturePointSet& fi_pts,
                            bool parallel) {
    require_same_schema(src_neutral_pts, src_exp_pts, "compute_eri(src pair)");
    require_same_schema(src_neutral_pts, fi_pts, "compute_eri(src vs fi)");

    const TriangleMesh neutral_mesh = mesh_with_positions(ref_mesh, src_neutral_pts);
    const TriangleMesh exp_mesh = mesh_with_positions(ref_mesh, src_exp_pts);
    const TriangleMesh fi_mesh = mesh_with_positions(ref_mesh, fi_pts);

    const RasterImage neutral_gray = to_gray(src_neutral_img);
    const RasterImage exp_gray = to_gray(src_exp_img);
    const RasterImage warped_neutral =
        parallel ? piecewise_affine_warp(neutral_gray, neutral_mesh, fi_mesh)
                 : piecewise_affine_warp_serial(neutral_gray, neutral_mesh, fi_mesh);
    const RasterImage warped_exp = parallel
                                       ? piecewise_affine_warp(exp_gray, exp_mesh, fi_mesh)
                                       : piecewise_affine_warp_serial(exp_gray, exp_mesh, fi_mesh);

    const int width = fi_pts.image_size().width;
    const int height = fi_pts.image_size().height;
    const std::vector<std::int32_t> coverage =
        parallel ? rasterize_triangle_map(fi_mesh, width, height)
                 : rasterize_triangle_map_serial(fi_mesh, width, height);

    RatioImage eri = RatioImage::make(width, height, 1.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (coverage[static_cast<size_t>(y) * width + x] < 0) continue; // outside hull: 1
            const double denom = std::max(warped_neutral.at(x, y), kEriDenomFloor);
            const double ratio = warped_exp.at(x, y) / denom;
            eri.at(x, y) = std::clamp(ratio, kRatioMin, kRatioMax);
        }
    }
    return eri;
}

} // namespace

RatioImage compute_eri(const RasterImage& src_neutral_img, const RasterImage& src_exp_img,
                       const TriangleMesh& ref_mesh, const FeaturePointSet& src_neutral_pts,
                       const FeaturePointSet& src_exp_pts, const FeaturePointSet& fi_pts) {
    return compute_eri_impl(src_neutral_img, src_exp_img, ref_mesh, src_neutral_pts, src_exp_pts,
                            fi_pts, true);
}

RatioImage compute_eri_serial(const RasterImage& src_neutral_img, const RasterImage& src_exp_img,
                              const TriangleMesh& ref_mesh, const FeaturePointSet& src_neutral_pts,
                              const FeaturePointSet& src_exp_pts, const FeaturePointSet& fi_pts) {
    return compute_eri_impl(src_neutral_img, src_exp_img, ref_mesh, src_neutral_pts, src_exp_pts,
                            fi_pts, false);
}

namespace {

RatioImage box_filter_impl(const RatioImage& eri, bool parallel) {
    RatioImage out = RatioImage::make(eri.width, eri.height, 1.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < eri.height; ++y) {
        for (int x = 0; x < eri.width; ++x) {
            double sum = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int sy = std::clamp(y + dy, 0, eri.height - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, eri.width - 1);
                    sum += eri.at(sx, sy);
                }
            }
            out.at(x, y) = sum / 9.0;
        }
    }
    return out;
}

RatioImage apply_md_impl(const RatioImage& eri, const ImportanceMask& mask, bool parallel) {
    if (eri.width != mask.width || eri.height != mask.height) {
        throw ImageError("apply_md: ERI and mask dimensions differ");
    }
    RatioImage out = RatioImage::make(eri.width, eri.height, 1.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < eri.height; ++y) {
        for (int x = 0; x < eri.width; ++x) {
            const double boosted = 1.0 + mask.at(x, y) * (eri.at(x, y) - 1.0);
            out.at(x, y) = std::clamp(boosted, kRatioMin, kRatioMax);
        }
    }
    return out;
}

RasterImage compose_final_impl(const RasterImage& fi_img, const RatioImage& detail, bool parallel) {
    if (fi_img.width != detail.width || fi_img.height != detail.height) {
        throw ImageError("compose_final: image and detail dimensions differ");
    }
    RasterImage out = RasterImage::make(fi_img.width, fi_img.height, fi_img.channels);
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < fi_img.height; ++y) {
        for (int x = 0; x < fi_img.width; ++x) {
            const double factor = detail.at(x, y);
            for (int c = 0; c < fi_img.channels; ++c) {
                out.at(x, y, c) = std::clamp(fi_img.at(x, y, c) * factor, 0.0, 255.0);
            }
        }
    }
    return out;
}

} // namespace

RatioImage box_filter_3x3(const RatioImage& eri) { return box_filter_impl(eri, true); }
RatioImage box_filter_3x3_serial(const RatioImage& eri) { return box_filter_impl(eri, false); }

RatioImage apply_md(const RatioImage& eri, const ImportanceMask& mask) {
    return apply_md_impl(eri, mask, true);
}
RatioImage apply_md_serial(const RatioImage& eri, const ImportanceMask& mask) {
    return apply_md_impl(eri, mask, false);
}

RasterImage compose_final(const RasterImage& fi_img, const RatioImage& detail) {
    return compose_final_impl(fi_img, detail, true);
}
RasterImage compose_final_serial(const RasterImage& fi_img, const RatioImage& detail) {
    return compose_final_impl(fi_img, detail, false);
}

RasterImage ratio_debug_image(const std::vector<double>& values, int width, int height, double lo,
                              double hi) {
    RasterImage out = RasterImage::make(width, height, 1);
    const double span = hi > lo ? hi - lo : 1.0;
    for (size_t i = 0; i < values.size(); ++i) {
        out.samples[i] = std::clamp((values[i] - lo) / span * 255.0, 0.0, 255.0);
    }
    return out;
}

} // namespace exprclone
