#include "exprclone/face_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace exprclone {

std::string_view to_string(Organ organ) {
    switch (organ) {
    case Organ::left_eye: return "left_eye";
    case Organ::right_eye: return "right_eye";
    case Organ::left_brow: return "left_brow";
    case Organ::right_brow: return "right_brow";
    case Organ::nose: return "nose";
    case Organ::mouth: return "mouth";
    case Organ::contour: return "contour";
    }
    return "?";
}

std::optional<Organ> organ_from_string(std::string_view name) {
    for (Organ o : kAllOrgans) {
        if (to_string(o) == name) return o;
    }
    return std::nullopt;
}

FeaturePointSet::FeaturePointSet(std::vector<FeaturePoint> points, ImageSize size)
    : points_(std::move(points)), size_(size) {
    if (size_.width < 1 || size_.height < 1) {
        throw ParseError("feature point set: invalid image size " +
                         std::to_string(size_.width) + "x" + std::to_string(size_.height));
    }
    const int n = static_cast<int>(points_.size());
    if (n < 3) {
        throw ParseError("feature point set: needs at least 3 points, got " + std::to_string(n));
    }
    std::sort(points_.begin(), points_.end(),
              [](const FeaturePoint& a, const FeaturePoint& b) { return a.id < b.id; });
    for (int i = 1; i < n; ++i) {
        if (points_[static_cast<size_t>(i)].id == points_[static_cast<size_t>(i - 1)].id) {
            throw ParseError("feature point set: duplicate id " +
                             std::to_string(points_[static_cast<size_t>(i)].id));
        }
    }
    for (int i = 0; i < n; ++i) {
        const FeaturePoint& p = points_[static_cast<size_t>(i)];
        if (p.id != i) {
            throw ParseError("feature point set: ids must form 0.." + std::to_string(n - 1) +
                             " exactly (missing id " + std::to_string(i) + ")");
        }
        if (!std::isfinite(p.pos.x) || !std::isfinite(p.pos.y)) {
            throw ParseError("feature point set: non-finite position at id " + std::to_string(p.id));
        }
        if (p.pos.x < 0.0 || p.pos.x > size_.width - 1 || p.pos.y < 0.0 ||
            p.pos.y > size_.height - 1) {
            std::ostringstream os;
            os << "feature point set: point " << p.id << " at (" << p.pos.x << ", " << p.pos.y
               << ") outside image bounds " << size_.width << "x" << size_.height;
            throw ParseError(os.str());
        }
    }
}

FeaturePointSet FeaturePointSet::with_positions(const std::vector<Vec2>& positions) const {
    if (positions.size() != points_.size()) {
        throw SchemaError("with_positions: position count " + std::to_string(positions.size()) +
                          " != point count " + std::to_string(points_.size()));
    }
    std::vector<FeaturePoint> pts = points_;
    for (size_t i = 0; i < pts.size(); ++i) pts[i].pos = positions[i];
    return FeaturePointSet(std::move(pts), size_);
}

namespace {

bool parse_double(const std::string& token, double& out) {
    try {
        size_t used = 0;
        out = std::stod(token, &used);
        return used == token.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_int(const std::string& token, int& out) {
    try {
        size_t used = 0;
        out = std::stoi(token, &used);
        return used == token.size();
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

FeaturePointSet parse_feature_points(std::istream& in, std::optional<ImageSize> paired_size) {
    std::vector<FeaturePoint> points;
    std::optional<ImageSize> file_size;
    std::string line;
    int line_no = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;

        if (first_record && tokens[0] == "size") {
            if (tokens.size() != 3) {
                throw ParseError("points line " + std::to_string(line_no) +
                                 ": size line needs `size <width> <height>`");
            }
            ImageSize s;
            if (!parse_int(tokens[1], s.width) || !parse_int(tokens[2], s.height)) {
                throw ParseError("points line " + std::to_string(line_no) +
                                 ": non-numeric size field");
            }
            file_size = s;
            first_record = false;
            continue;
        }
        first_record = false;

        if (tokens.size() != 4) {
            throw ParseError("points line " + std::to_string(line_no) +
                             ": expected `<id> <organ> <x> <y>`");
        }
        FeaturePoint p;
        if (!parse_int(tokens[0], p.id)) {
            throw ParseError("points line " + std::to_string(line_no) + ": non-numeric id `" +
                             tokens[0] + "`");
        }
        const auto organ = organ_from_string(tokens[1]);
        if (!organ) {
            throw ParseError("points line " + std::to_string(line_no) + ": unknown organ label `" +
                             tokens[1] + "`");
        }
        p.organ = *organ;
        if (!parse_double(tokens[2], p.pos.x) || !parse_double(tokens[3], p.pos.y)) {
            throw ParseError("points line " + std::to_string(line_no) +
                             ": non-numeric coordinate");
        }
        points.push_back(p);
    }

    std::optional<ImageSize> size = file_size ? file_size : paired_size;
    if (!size) {
        throw ParseError("points file: no `size` line and no paired image size given");
    }
    if (file_size && paired_size && !(*file_size == *paired_size)) {
        throw ParseError("points file: size line " + std::to_string(file_size->width) + "x" +
                         std::to_string(file_size->height) + " disagrees with paired image " +
                         std::to_string(paired_size->width) + "x" +
                         std::to_string(paired_size->height));
    }
    return FeaturePointSet(std::move(points), *size);
}

FeaturePointSet parse_feature_points(const std::string& text, std::optional<ImageSize> paired_size) {
    std::istringstream in(text);
    return parse_feature_points(in, paired_size);
}

FeaturePointSet load_feature_points(const std::string& path, std::optional<ImageSize> paired_size) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open points file: " + path);
    return parse_feature_points(in, paired_size);
}

std::string serialize_feature_points(const FeaturePointSet& set) {
    std::ostringstream os;
    os << "size " << set.image_size().width << " " << set.image_size().height << "\n";
    char buf[64];
    for (const FeaturePoint& p : set.points()) {
        os << p.id << " " << to_string(p.organ);
        std::snprintf(buf, sizeof(buf), " %.17g %.17g\n", p.pos.x, p.pos.y);
        os << buf;
    }
    return os.str();
}

void save_feature_points(const std::string& path, const FeaturePointSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write points file: " + path);
    out << serialize_feature_points(set);
}

std::vector<int> organ_point_ids(const FeaturePointSet& set, Organ organ) {
    std::vector<int> ids;
    for (const FeaturePoint& p : set.points()) {
        if (p.organ == organ) ids.push_back(p.id);
    }
    return ids;
}

namespace {

OrganBox box_of_ids(const FeaturePointSet& set, const std::vector<int>& ids) {
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();
    for (int id : ids) {
        const Vec2 p = set.pos(id);
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    OrganBox box;
    box.w = max_x - min_x;
    box.h = max_y - min_y;
    box.cx = (min_x + max_x) / 2.0;
    box.cy = (min_y + max_y) / 2.0;
    return box;
}

} // namespace

OrganBox organ_bounding_box(const FeaturePointSet& set, Organ organ) {
    const std::vector<int> ids = organ_point_ids(set, organ);
    if (ids.size() < 2) {
        throw GeometryError(std::string("degenerate organ `") + std::string(to_string(organ)) +
                            "`: has " + std::to_string(ids.size()) + " point(s), needs at least 2");
    }
    return box_of_ids(set, ids);
}

OrganBox full_bounding_box(const FeaturePointSet& set) {
    std::vector<int> ids(static_cast<size_t>(set.size()));
    for (int i = 0; i < set.size(); ++i) ids[static_cast<size_t>(i)] = i;
    return box_of_ids(set, ids);
}

bool same_schema(const FeaturePointSet& a, const FeaturePointSet& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i) {
        if (a[i].organ != b[i].organ) return false;
    }
    return true;
}

void require_same_schema(const FeaturePointSet& a, const FeaturePointSet& b,
                         const std::string& context) {
    if (!same_schema(a, b)) {
        throw SchemaError(context + ": point sets disagree in count or id->organ mapping");
    }
}

} // namespace exprclone
