#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exprclone/error.hpp"
#include "exprclone/geometry.hpp"

namespace exprclone {

enum class Organ : std::uint8_t {
    left_eye,
    right_eye,
    left_brow,
    right_brow,
    nose,
    mouth,
    contour,
};

inline constexpr std::array<Organ, 7> kAllOrgans = {
    Organ::left_eye,  Organ::right_eye, Organ::left_brow, Organ::right_brow,
    Organ::nose,      Organ::mouth,     Organ::contour,
};

std::string_view to_string(Organ organ);
std::optional<Organ> organ_from_string(std::string_view name);

struct FeaturePoint {
    int id = 0;
    Organ organ = Organ::contour;
    Vec2 pos;
};

// Ordered landmark set shared by all images of one clone job. Ids are dense
// (0..n-1) and index directly into points(). Immutable after construction.
class FeaturePointSet {
public:
    FeaturePointSet() = default; // empty placeholder, not a valid set

    // Validates: n >= 3, ids exactly 0..n-1, finite in-bounds positions.
    FeaturePointSet(std::vector<FeaturePoint> points, ImageSize size);

    const std::vector<FeaturePoint>& points() const { return points_; }
    int size() const { return static_cast<int>(points_.size()); }
    ImageSize image_size() const { return size_; }

    const FeaturePoint& operator[](int id) const { return points_[static_cast<size_t>(id)]; }
    Vec2 pos(int id) const { return points_[static_cast<size_t>(id)].pos; }

    // Same ids/organs/image size, new coordinates (revalidated).
    FeaturePointSet with_positions(const std::vector<Vec2>& positions) const;

private:
    std::vector<FeaturePoint> points_;
    ImageSize size_{};
};

// Minimum bounding box of an organ's points, described by extents and the
// box middle lines.
struct OrganBox {
    double w = 0.0;
    double h = 0.0;
    double cx = 0.0;
    double cy = 0.0;
};

// Points-file format: one `<id> <organ> <x> <y>` record per line, `#` starts
// a comment, optional leading `size <width> <height>` line. When the file has
// no size line the paired image's size must be supplied.
FeaturePointSet parse_feature_points(std::istream& in,
                                     std::optional<ImageSize> paired_size = std::nullopt);
FeaturePointSet parse_feature_points(const std::string& text,
                                     std::optional<ImageSize> paired_size = std::nullopt);
FeaturePointSet load_feature_points(const std::string& path,
                                    std::optional<ImageSize> paired_size = std::nullopt);

std::string serialize_feature_points(const FeaturePointSet& set);
void save_feature_points(const std::string& path, const FeaturePointSet& set);

std::vector<int> organ_point_ids(const FeaturePointSet& set, Organ organ);

// Extents and mid-lines over one organ's points. Throws GeometryError when
// the organ has fewer than two points.
OrganBox organ_bounding_box(const FeaturePointSet& set, Organ organ);

// Bounding box over the whole point set (used for face-size ratios).
OrganBox full_bounding_box(const FeaturePointSet& set);

// Schema = point count plus id->organ mapping. Image sizes may differ.
bool same_schema(const FeaturePointSet& a, const FeaturePointSet& b);
void require_same_schema(const FeaturePointSet& a, const FeaturePointSet& b,
                         const std::string& context);

} // namespace exprclone
