#include <doctest.h>

#include <random>

#include "exprclone/local_reshape.hpp"
#include "face_synth.hpp"
#include "support.hpp"

using namespace exprclone;
using testsupport::make_set;

namespace {

// builds (source expression, globally warped) pairs with one random organ
std::pair<FeaturePointSet, FeaturePointSet> random_organ_pair(std::mt19937& rng, Organ organ,
                                                              int n_points) {
    std::uniform_real_distribution<double> src_coord(200.0, 400.0);
    std::uniform_real_distribution<double> tgt_coord(500.0, 800.0);
    auto gen = [&](std::uniform_real_distribution<double>& dist) {
        std::vector<std::pair<Organ, Vec2>> raw;
        for (int i = 0; i < n_points; ++i) raw.emplace_back(organ, Vec2{dist(rng), dist(rng)});
        return raw;
    };
    while (true) {
        auto src_raw = gen(src_coord);
        auto tgt_raw = gen(tgt_coord);
        const auto src = make_set(src_raw, {2000, 2000});
        const auto tgt = make_set(tgt_raw, {2000, 2000});
        const OrganBox sb = organ_bounding_box(src, organ);
        const OrganBox tb = organ_bounding_box(tgt, organ);
        if (sb.w > 1.0 && sb.h > 1.0 && tb.w > 1.0 && tb.h > 1.0) return {src, tgt};
    }
}

} // namespace

TEST_SUITE("local_reshape") {

TEST_CASE("source offsets scale by the width ratio") {
    // W_s = 100 (x 0..100), source point offsets (30, 10); W_t = 120
    const auto src = make_set({{Organ::mouth, {0, 0}},
                               {Organ::mouth, {100, 40}},
                               {Organ::mouth, {80, 30}}},
                              {1000, 1000});
    // target box x 300..420, y 100..200 -> center (360, 150)
    const auto tgt = make_set({{Organ::mouth, {300, 100}},
                               {Organ::mouth, {420, 200}},
                               {Organ::mouth, {350, 150}}},
                              {1000, 1000});
    // src box: w 100, h 40, center (50, 20); point 2 offsets = (30, 10)
    const auto out = reshape_organ(src, tgt, Organ::mouth);
    CHECK(out.pos(2).x == doctest::Approx(360.0 + 30.0 * 1.2).epsilon(1e-12)); // 396
    CHECK(out.pos(2).y == doctest::Approx(150.0 + 10.0 * 1.2).epsilon(1e-12)); // 162
}

TEST_CASE("equal widths copy the source organ shape recentered") {
    const auto src = make_set({{Organ::mouth, {10, 10}},
                               {Organ::mouth, {60, 35}},
                               {Organ::mouth, {35, 20}}},
                              {1000, 1000});
    // same width 50, centered at (500, 500)
    const auto tgt = make_set({{Organ::mouth, {475, 480}},
                               {Organ::mouth, {525, 520}},
                               {Organ::mouth, {500, 505}}},
                              {1000, 1000});
    ReshapeRecord record;
    const auto out = reshape_organ(src, tgt, Organ::mouth, &record);
    CHECK(record.scale == 1.0);
    // source box center (35, 22.5); offsets recentered at (500, 500)
    CHECK(out.pos(0).x == doctest::Approx(500.0 + (10.0 - 35.0)).epsilon(1e-12));
    CHECK(out.pos(0).y == doctest::Approx(500.0 + (10.0 - 22.5)).epsilon(1e-12));
    CHECK(out.pos(1).x == doctest::Approx(525.0).epsilon(1e-12));
}

TEST_CASE("vertical-distance equation alone: d_t1 = d_s1 * W_t / W_s") {
    std::mt19937 rng(3);
    auto [src, tgt] = random_organ_pair(rng, Organ::mouth, 6);
    const OrganBox sb = organ_bounding_box(src, Organ::mouth);
    const OrganBox tb = organ_bounding_box(tgt, Organ::mouth);
    const auto out = reshape_organ(src, tgt, Organ::mouth);
    for (int i = 0; i < src.size(); ++i) {
        const double d_s1 = src.pos(i).y - sb.cy;
        const double d_t1 = out.pos(i).y - tb.cy;
        CHECK(d_t1 == doctest::Approx(d_s1 * tb.w / sb.w).epsilon(1e-9));
    }
}

TEST_CASE("reshape equalizes the height-to-width ratio exactly") {
    std::mt19937 rng(17);
    const Organ organs[] = {Organ::mouth, Organ::left_eye, Organ::nose, Organ::right_brow};
    for (int trial = 0; trial < 100; ++trial) {
        const Organ organ = organs[trial % 4];
        const int n = 4 + static_cast<int>(rng() % 9); // 4..12
        auto [src, tgt] = random_organ_pair(rng, organ, n);
        const OrganBox sb = organ_bounding_box(src, organ);
        const OrganBox tb = organ_bounding_box(tgt, organ);
        const auto out = reshape_organ(src, tgt, organ);
        const OrganBox ob = organ_bounding_box(out, organ);
        REQUIRE(std::abs(ob.h / ob.w - sb.h / sb.w) < 1e-9);
        REQUIRE(std::abs(ob.w - tb.w) < 1e-9);
        REQUIRE(std::abs(ob.cx - tb.cx) < 1e-9);
        REQUIRE(std::abs(ob.cy - tb.cy) < 1e-9);
    }
}

TEST_CASE("points outside the organ are bitwise unchanged") {
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto out = reshape_organ(src_exp, global_pts, Organ::mouth);
    for (int i = 0; i < global_pts.size(); ++i) {
        if (global_pts[i].organ == Organ::mouth) continue;
        REQUIRE(out.pos(i) == global_pts.pos(i));
    }
}

TEST_CASE("reshape_all is a fixed point when organs already match") {
    const auto pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto out = reshape_all(pts, pts);
    // every organ gets scale 1 and recenters onto itself
    CHECK(testsupport::max_pos_diff(out, pts) < 1e-9);
}

TEST_CASE("only the differing organ moves") {
    auto params = synth::target_neutral_params();
    const auto global_pts = synth::synth_landmarks(params);
    params.mouth_rx += 5.0;
    params.mouth_ry += 2.0;
    const auto src_exp = synth::synth_landmarks(params);
    const auto out = reshape_all(src_exp, global_pts);
    for (int i = 0; i < global_pts.size(); ++i) {
        if (global_pts[i].organ == Organ::mouth) continue;
        REQUIRE(exprclone::distance(out.pos(i), global_pts.pos(i)) < 1e-9);
    }
    const OrganBox src_box = organ_bounding_box(src_exp, Organ::mouth);
    const OrganBox before = organ_bounding_box(global_pts, Organ::mouth);
    const OrganBox after = organ_bounding_box(out, Organ::mouth);
    CHECK(std::abs(after.h / after.w - src_box.h / src_box.w) < 1e-9); // ratio transferred
    CHECK(std::abs(before.h / before.w - src_box.h / src_box.w) > 1e-3); // and it did change

}

TEST_CASE("contour is never re-shaped") {
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    const auto out = reshape_all(src_exp, global_pts);
    for (int i = 0; i < global_pts.size(); ++i) {
        if (global_pts[i].organ == Organ::contour) {
            REQUIRE(out.pos(i) == global_pts.pos(i));
        }
    }
}

TEST_CASE("degenerate source organ names the organ") {
    // flat eyebrow in the source expression (h = 0)
    const auto src = make_set({{Organ::left_brow, {10, 20}},
                               {Organ::left_brow, {40, 20}},
                               {Organ::nose, {30, 50}},
                               {Organ::nose, {35, 60}}},
                              {100, 100});
    const auto tgt = make_set({{Organ::left_brow, {15, 25}},
                               {Organ::left_brow, {45, 28}},
                               {Organ::nose, {32, 52}},
                               {Organ::nose, {38, 63}}},
                              {100, 100});
    CHECK_THROWS_WITH_AS(reshape_all(src, tgt), doctest::Contains("left_brow"), GeometryError);
}

TEST_CASE("records capture the boxes and scale") {
    const auto src_exp = synth::synth_landmarks(synth::source_smile_params());
    const auto global_pts = synth::synth_landmarks(synth::target_neutral_params());
    std::vector<ReshapeRecord> records;
    reshape_all(src_exp, global_pts, &records);
    CHECK(records.size() == 6); // every non-contour organ
    for (const ReshapeRecord& r : records) {
        CHECK(r.scale > 0.0);
        CHECK(r.scale == doctest::Approx(r.tgt_box.w / r.src_box.w).epsilon(1e-12));
    }
    CHECK(format_reshape_records(records).find("mouth") != std::string::npos);
}

} // TEST_SUITE
