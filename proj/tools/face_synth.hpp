#pragma once

#include <vector>

#include "exprclone/face_model.hpp"
#include "exprclone/image.hpp"

namespace exprclone::synth {

// Parametric synthetic face: a 59-landmark schema (16 contour, 2x5 brows,
// 2x6 eyes, 9 nose, 12 mouth) plus a smooth procedural rendering driven by
// the same parameters, so landmark motion and shading stay consistent.
// Everything is deterministic.
struct FaceParams {
    int width = 256;
    int height = 256;
    bool color = true;

    double center_x = 128.0;
    double center_y = 134.0;
    double face_rx = 76.0;
    double face_ry = 96.0;

    double eye_dx = 30.0; // eye center offset from the face mid-line
    double eye_y = -24.0; // relative to face center
    double eye_rx = 11.0;
    double eye_ry = 5.5;
    double eye_open = 1.0;

    double brow_dy = -17.0; // brow arc center above the eye center
    double brow_rx = 14.0;
    double brow_arc = 5.0;
    double brow_raise = 0.0;

    double nose_top_y = -16.0; // bridge top, relative to face center
    double nose_len = 34.0;
    double nose_w = 11.0;

    double mouth_y = 46.0; // mouth center, relative to face center
    double mouth_rx = 21.0;
    double mouth_ry = 7.5;
    double smile = 0.0; // corner lift in px

    double skin = 165.0;
    double background = 95.0;
};

FeaturePointSet synth_landmarks(const FaceParams& params);
RasterImage synth_face_image(const FaceParams& params);

// Two distinct people with distinct organ proportions, plus expressions.
FaceParams source_neutral_params();
FaceParams source_smile_params();
FaceParams target_neutral_params();

// A target person whose organ shapes are scaled copies of the source
// person's (sizes, spacing and face proportions still differ). With such a
// pair the local re-shape is a fixed point for a neutral source expression.
FaceParams target_similar_organs_params();

// Linear blend of every continuous parameter (frame interpolation).
FaceParams lerp_params(const FaceParams& a, const FaceParams& b, double t);

// Deterministic expression variations of one person, for PCA training sets.
std::vector<FaceParams> training_params(const FaceParams& person, int count);

// Landmark id ranges of the schema, for muscle configs and tests.
inline constexpr int kContourBegin = 0, kContourCount = 16;
inline constexpr int kLeftBrowBegin = 16, kRightBrowBegin = 21, kBrowCount = 5;
inline constexpr int kLeftEyeBegin = 26, kRightEyeBegin = 32, kEyeCount = 6;
inline constexpr int kNoseBegin = 38, kNoseCount = 9;
inline constexpr int kMouthBegin = 47, kMouthCount = 12;
inline constexpr int kLandmarkCount = 59;

// Default key muscle area config text matching the schema above.
std::string default_muscle_config_text();

} // namespace exprclone::synth
