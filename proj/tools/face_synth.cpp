#include "face_synth.hpp"

#include <algorithm>
#include <cmath>

namespace exprclone::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gauss(double dx, double dy, double rx, double ry) {
    return std::exp(-(dx * dx / (2.0 * rx * rx) + dy * dy / (2.0 * ry * ry)));
}

struct Anchors {
    Vec2 center;
    Vec2 left_eye, right_eye;
    Vec2 nose_top, nose_base;
    Vec2 mouth;
};

Anchors anchors_of(const FaceParams& p) {
    Anchors a;
    a.center = {p.center_x, p.center_y};
    a.left_eye = {p.center_x - p.eye_dx, p.center_y + p.eye_y};
    a.right_eye = {p.center_x + p.eye_dx, p.center_y + p.eye_y};
    a.nose_top = {p.center_x, p.center_y + p.nose_top_y};
    a.nose_base = {p.center_x, p.center_y + p.nose_top_y + p.nose_len};
    a.mouth = {p.center_x, p.center_y + p.mouth_y};
    return a;
}

} // namespace

FeaturePointSet synth_landmarks(const FaceParams& p) {
    const Anchors a = anchors_of(p);
    std::vector<FeaturePoint> pts;
    pts.reserve(kLandmarkCount);
    int id = 0;

    for (int k = 0; k < kContourCount; ++k) {
        const double th = 2.0 * kPi * k / kContourCount;
        pts.push_back({id++, Organ::contour,
                       {p.center_x + p.face_rx * std::cos(th), p.center_y + p.face_ry * std::sin(th)}});
    }

    for (int side = 0; side < 2; ++side) {
        const Vec2 eye = side == 0 ? a.left_eye : a.right_eye;
        const Organ organ = side == 0 ? Organ::left_brow : Organ::right_brow;
        for (int k = 0; k < kBrowCount; ++k) {
            const double t = static_cast<double>(k) / (kBrowCount - 1); // 0..1
            const double x = eye.x + (2.0 * t - 1.0) * p.brow_rx;
            const double y = eye.y + p.brow_dy - p.brow_arc * std::sin(kPi * t) - p.brow_raise;
            pts.push_back({id++, organ, {x, y}});
        }
    }

    for (int side = 0; side < 2; ++side) {
        const Vec2 eye = side == 0 ? a.left_eye : a.right_eye;
        const Organ organ = side == 0 ? Organ::left_eye : Organ::right_eye;
        for (int k = 0; k < kEyeCount; ++k) {
            const double th = 2.0 * kPi * k / kEyeCount;
            pts.push_back({id++, organ,
                           {eye.x + p.eye_rx * std::cos(th),
                            eye.y + p.eye_ry * p.eye_open * std::sin(th)}});
        }
    }

    // nose: 4 bridge points down the mid-line, 5 base points across
    for (int k = 0; k < 4; ++k) {
        pts.push_back({id++, Organ::nose,
                       {a.nose_top.x, a.nose_top.y + p.nose_len * k / 3.0}});
    }
    for (int k = 0; k < 5; ++k) {
        const double s = (k - 2) / 2.0; // -1..1
        pts.push_back({id++, Organ::nose,
                       {a.nose_base.x + s * p.nose_w, a.nose_base.y + 3.0 * (1.0 - std::abs(s)) + 1.5}});
    }

    for (int k = 0; k < kMouthCount; ++k) {
        const double th = 2.0 * kPi * k / kMouthCount;
        const double c = std::cos(th);
        pts.push_back({id++, Organ::mouth,
                       {a.mouth.x + p.mouth_rx * c,
                        a.mouth.y + p.mouth_ry * std::sin(th) - p.smile * c * c}});
    }

    return FeaturePointSet(std::move(pts), {p.width, p.height});
}

RasterImage synth_face_image(const FaceParams& p) {
    const Anchors a = anchors_of(p);
    RasterImage img = RasterImage::make(p.width, p.height, p.color ? 3 : 1);

    const Vec2 mouth_left{a.mouth.x - p.mouth_rx, a.mouth.y - p.smile};
    const Vec2 mouth_right{a.mouth.x + p.mouth_rx, a.mouth.y - p.smile};
    const Vec2 left_cheek{a.mouth.x - p.mouth_rx - 14.0, a.mouth.y - 16.0};
    const Vec2 right_cheek{a.mouth.x + p.mouth_rx + 14.0, a.mouth.y - 16.0};

    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            const double fx = (x - p.center_x) / p.face_rx;
            const double fy = (y - p.center_y) / p.face_ry;
            const double fr2 = fx * fx + fy * fy;
            const double face_soft = 1.0 / (1.0 + std::exp((fr2 - 1.0) * 12.0));

            double lum = p.background + 14.0 * (static_cast<double>(y) / p.height);
            lum += (p.skin - p.background + 18.0 * (1.0 - fr2 * 0.5)) * face_soft;

            for (int side = 0; side < 2; ++side) {
                const Vec2 eye = side == 0 ? a.left_eye : a.right_eye;
                lum -= 72.0 * gauss(x - eye.x, y - eye.y, p.eye_rx * 0.8,
                                    std::max(1.5, p.eye_ry * 0.9 * p.eye_open));
                const double brow_y = eye.y + p.brow_dy - p.brow_raise - p.brow_arc * 0.6;
                lum -= 48.0 * gauss(x - eye.x, y - brow_y, p.brow_rx * 0.85, 2.6);
            }

            // nose: soft bridge shading plus a base shadow
            const double bridge_t =
                std::clamp((y - a.nose_top.y) / std::max(1.0, p.nose_len), 0.0, 1.0);
            const double bridge_x = a.nose_top.x;
            lum -= 12.0 * bridge_t * gauss(x - bridge_x, 0.0, p.nose_w * 0.5, 1.0);
            lum -= 24.0 * gauss(x - a.nose_base.x, y - (a.nose_base.y + 2.0), p.nose_w, 4.0);

            lum -= 78.0 * gauss(x - a.mouth.x, y - (a.mouth.y - p.smile * 0.4), p.mouth_rx * 0.85,
                                std::max(2.0, p.mouth_ry * 0.9));
            lum -= 26.0 * gauss(x - mouth_left.x, y - mouth_left.y, 5.0, 4.0);
            lum -= 26.0 * gauss(x - mouth_right.x, y - mouth_right.y, 5.0, 4.0);

            // cheek highlights scale with the smile (illumination detail)
            const double cheek_amp = 6.0 + 2.2 * p.smile;
            lum += cheek_amp * gauss(x - left_cheek.x, y - left_cheek.y, 11.0, 8.0);
            lum += cheek_amp * gauss(x - right_cheek.x, y - right_cheek.y, 11.0, 8.0);
            // brow-raise furrow highlight between the brows
            lum += 3.0 * p.brow_raise *
                   gauss(x - a.center.x, y - (a.nose_top.y - 10.0), 9.0, 5.0);

            lum = std::clamp(lum, 4.0, 252.0);
            if (p.color) {
                img.at(x, y, 0) = std::clamp(lum * 1.06 + 3.0, 2.0, 253.0);
                img.at(x, y, 1) = std::clamp(lum * 0.98, 2.0, 253.0);
                img.at(x, y, 2) = std::clamp(lum * 0.85, 2.0, 253.0);
            } else {
                img.at(x, y, 0) = lum;
            }
        }
    }
    return img;
}

FaceParams source_neutral_params() {
    FaceParams p;
    p.center_x = 126.0;
    p.center_y = 132.0;
    p.face_rx = 72.0;
    p.face_ry = 94.0;
    p.eye_dx = 28.0;
    p.eye_rx = 10.0;
    p.mouth_rx = 17.0; // small neutral mouth
    p.mouth_ry = 6.0;
    p.skin = 172.0;
    p.background = 88.0;
    return p;
}

FaceParams source_smile_params() {
    FaceParams p = source_neutral_params();
    p.mouth_rx = 25.0; // the smile widens the mouth a lot
    p.mouth_ry = 9.5;
    p.smile = 5.0;
    p.eye_open = 0.72;
    p.brow_raise = 2.5;
    p.mouth_y = 44.0;
    return p;
}

FaceParams target_neutral_params() {
    FaceParams p;
    p.center_x = 130.0;
    p.center_y = 136.0;
    p.face_rx = 82.0;
    p.face_ry = 92.0;
    p.eye_dx = 33.0;
    p.eye_rx = 12.0;
    p.eye_ry = 6.0;
    p.mouth_rx = 24.0; // already-wide neutral mouth
    p.mouth_ry = 7.0;
    p.nose_w = 13.0;
    p.skin = 150.0;
    p.background = 102.0;
    return p;
}

FaceParams target_similar_organs_params() {
    const FaceParams src = source_neutral_params();
    FaceParams p = target_neutral_params();
    // eyes and mouth: uniform scale of the source shape
    p.eye_rx = src.eye_rx * 1.2;
    p.eye_ry = src.eye_ry * 1.2;
    p.mouth_rx = src.mouth_rx * 1.4;
    p.mouth_ry = src.mouth_ry * 1.4;
    // brows and nose carry fixed-offset layouts, so reuse the source's
    p.brow_rx = src.brow_rx;
    p.brow_arc = src.brow_arc;
    p.nose_w = src.nose_w;
    p.nose_len = src.nose_len;
    return p;
}

FaceParams lerp_params(const FaceParams& a, const FaceParams& b, double t) {
    auto mix = [t](double x, double y) { return x + (y - x) * t; };
    FaceParams p = a;
    p.center_x = mix(a.center_x, b.center_x);
    p.center_y = mix(a.center_y, b.center_y);
    p.face_rx = mix(a.face_rx, b.face_rx);
    p.face_ry = mix(a.face_ry, b.face_ry);
    p.eye_dx = mix(a.eye_dx, b.eye_dx);
    p.eye_y = mix(a.eye_y, b.eye_y);
    p.eye_rx = mix(a.eye_rx, b.eye_rx);
    p.eye_ry = mix(a.eye_ry, b.eye_ry);
    p.eye_open = mix(a.eye_open, b.eye_open);
    p.brow_dy = mix(a.brow_dy, b.brow_dy);
    p.brow_rx = mix(a.brow_rx, b.brow_rx);
    p.brow_arc = mix(a.brow_arc, b.brow_arc);
    p.brow_raise = mix(a.brow_raise, b.brow_raise);
    p.nose_top_y = mix(a.nose_top_y, b.nose_top_y);
    p.nose_len = mix(a.nose_len, b.nose_len);
    p.nose_w = mix(a.nose_w, b.nose_w);
    p.mouth_y = mix(a.mouth_y, b.mouth_y);
    p.mouth_rx = mix(a.mouth_rx, b.mouth_rx);
    p.mouth_ry = mix(a.mouth_ry, b.mouth_ry);
    p.smile = mix(a.smile, b.smile);
    p.skin = mix(a.skin, b.skin);
    p.background = mix(a.background, b.background);
    return p;
}

std::vector<FaceParams> training_params(const FaceParams& person, int count) {
    std::vector<FaceParams> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        FaceParams p = person;
        const double t = static_cast<double>(i) / std::max(1, count - 1);
        p.smile = 6.0 * t * (i % 2 == 0 ? 1.0 : 0.4);
        p.mouth_rx = person.mouth_rx + 6.0 * t;
        p.mouth_ry = person.mouth_ry + (i % 3) * 1.4;
        p.eye_open = 1.0 - 0.45 * t;
        p.brow_raise = (i % 2) * 3.0 + t;
        out.push_back(p);
    }
    return out;
}

std::string default_muscle_config_text() {
    // centers and radii anchored on the 59-landmark schema
    return "# key muscle areas: <name> center=<id>|<id,...> ref=<id>,<id> radius_scale=<r> h=<h>\n"
           "# brow corrugator region between the inner brow ends\n"
           "brow_center    center=20,21   ref=20,21  radius_scale=0.9  h=0.6\n"
           "left_brow      center=18      ref=16,20  radius_scale=0.45 h=0.5\n"
           "right_brow     center=23      ref=21,25  radius_scale=0.45 h=0.5\n"
           "left_eye_ring  center=29      ref=26,29  radius_scale=0.8  h=0.4\n"
           "right_eye_ring center=32      ref=32,35  radius_scale=0.8  h=0.4\n"
           "nose_base      center=44      ref=42,46  radius_scale=0.6  h=0.35\n"
           "left_nasolab   center=53,42   ref=42,53  radius_scale=0.55 h=0.7\n"
           "right_nasolab  center=47,46   ref=46,47  radius_scale=0.55 h=0.7\n"
           "mouth_left     center=53      ref=47,53  radius_scale=0.3  h=0.8\n"
           "mouth_right    center=47      ref=47,53  radius_scale=0.3  h=0.8\n"
           "chin           center=50      ref=47,53  radius_scale=0.35 h=0.45\n";
}

} // namespace exprclone::synth
