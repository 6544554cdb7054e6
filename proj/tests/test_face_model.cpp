#include <doctest.h>

#include <random>
#include <sstream>

#include "exprclone/face_model.hpp"
#include "support.hpp"

using namespace exprclone;
using testsupport::make_set;

TEST_SUITE("face_model") {

TEST_CASE("parses three valid lines") {
    const std::string text = "size 100 100\n"
                             "# a comment\n"
                             "0 mouth 10.5 20.25   # trailing comment\n"
                             "1 mouth 30 60\n"
                             "2 nose 50 5\n";
    const FeaturePointSet set = parse_feature_points(text);
    CHECK(set.size() == 3);
    CHECK(set[0].organ == Organ::mouth);
    CHECK(set.pos(0).x == 10.5);
    CHECK(set.pos(0).y == 20.25);
    CHECK(set[2].organ == Organ::nose);
    CHECK(set.image_size().width == 100);
}

TEST_CASE("duplicate id is rejected") {
    const std::string text = "size 100 100\n"
                             "0 mouth 1 1\n5 mouth 2 2\n5 nose 3 3\n1 nose 4 4\n";
    CHECK_THROWS_WITH_AS(parse_feature_points(text), doctest::Contains("duplicate id 5"),
                         ParseError);
}

TEST_CASE("out-of-bounds point is rejected") {
    const std::string text = "size 100 100\n0 mouth -1 10\n1 mouth 2 2\n2 nose 3 3\n";
    CHECK_THROWS_WITH_AS(parse_feature_points(text), doctest::Contains("outside image bounds"),
                         ParseError);
}

TEST_CASE("unknown organ label is rejected") {
    const std::string text = "size 100 100\n0 cheek 1 1\n1 mouth 2 2\n2 nose 3 3\n";
    CHECK_THROWS_WITH_AS(parse_feature_points(text), doctest::Contains("unknown organ"),
                         ParseError);
}

TEST_CASE("non-numeric coordinate is rejected") {
    const std::string text = "size 100 100\n0 mouth x 1\n1 mouth 2 2\n2 nose 3 3\n";
    CHECK_THROWS_AS(parse_feature_points(text), ParseError);
}

TEST_CASE("fewer than three points is rejected") {
    const std::string text = "size 100 100\n0 mouth 1 1\n1 mouth 2 2\n";
    CHECK_THROWS_WITH_AS(parse_feature_points(text), doctest::Contains("at least 3"), ParseError);
}

TEST_CASE("missing ids are rejected") {
    const std::string text = "size 100 100\n0 mouth 1 1\n1 mouth 2 2\n3 nose 3 3\n";
    CHECK_THROWS_AS(parse_feature_points(text), ParseError);
}

TEST_CASE("size comes from the paired image when the file has no size line") {
    const std::string text = "0 mouth 1 1\n1 mouth 2 2\n2 nose 3 3\n";
    CHECK_THROWS_AS(parse_feature_points(text), ParseError); // no size available
    const FeaturePointSet set = parse_feature_points(text, ImageSize{64, 48});
    CHECK(set.image_size().width == 64);
    CHECK(set.image_size().height == 48);
    // disagreeing sizes are an error
    const std::string sized = "size 32 32\n" + text;
    CHECK_THROWS_AS(parse_feature_points(sized, ImageSize{64, 48}), ParseError);
}

TEST_CASE("organ box from two points") {
    const auto set = make_set({{Organ::mouth, {10, 20}}, {Organ::mouth, {30, 60}},
                               {Organ::nose, {50, 50}}},
                              {100, 100});
    const OrganBox box = organ_bounding_box(set, Organ::mouth);
    CHECK(box.w == 20.0);
    CHECK(box.h == 40.0);
    CHECK(box.cx == 20.0);
    CHECK(box.cy == 40.0);
}

TEST_CASE("collapsed box keeps h = 0") {
    const auto set = make_set({{Organ::mouth, {10, 20}}, {Organ::mouth, {30, 20}},
                               {Organ::nose, {50, 50}}},
                              {100, 100});
    const OrganBox box = organ_bounding_box(set, Organ::mouth);
    CHECK(box.h == 0.0);
    CHECK(box.w == 20.0);
}

TEST_CASE("single-point organ is degenerate") {
    const auto set = make_set({{Organ::mouth, {10, 20}}, {Organ::nose, {30, 20}},
                               {Organ::nose, {50, 50}}},
                              {100, 100});
    CHECK_THROWS_WITH_AS(organ_bounding_box(set, Organ::mouth), doctest::Contains("degenerate"),
                         GeometryError);
    CHECK_THROWS_AS(organ_bounding_box(set, Organ::left_eye), GeometryError); // absent organ
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> coord(0.0, 199.0);
    std::uniform_int_distribution<int> organ_pick(0, 6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<FeaturePoint> pts;
        const int n = 3 + static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) {
            pts.push_back({i, kAllOrgans[static_cast<size_t>(organ_pick(rng))],
                           {coord(rng), coord(rng)}});
        }
        const FeaturePointSet set(std::move(pts), {200, 200});
        const FeaturePointSet round = parse_feature_points(serialize_feature_points(set));
        REQUIRE(round.size() == set.size());
        REQUIRE(round.image_size() == set.image_size());
        for (int i = 0; i < n; ++i) {
            REQUIRE(round[i].organ == set[i].organ);
            REQUIRE(round.pos(i) == set.pos(i)); // %.17g round-trips doubles exactly
        }
    }
}

TEST_CASE("organ box is translation-equivariant") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coord(50.0, 150.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<std::pair<Organ, Vec2>> raw;
        const int n = 4 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) raw.emplace_back(Organ::mouth, Vec2{coord(rng), coord(rng)});
        const auto set = make_set(raw, {400, 400});
        const Vec2 t{17.0, -23.0};
        std::vector<Vec2> moved;
        for (int i = 0; i < set.size(); ++i) moved.push_back(set.pos(i) + t);
        const auto shifted = set.with_positions(moved);
        const OrganBox a = organ_bounding_box(set, Organ::mouth);
        const OrganBox b = organ_bounding_box(shifted, Organ::mouth);
        CHECK(b.w == doctest::Approx(a.w).epsilon(1e-12));
        CHECK(b.h == doctest::Approx(a.h).epsilon(1e-12));
        CHECK(b.cx == doctest::Approx(a.cx + t.x).epsilon(1e-12));
        CHECK(b.cy == doctest::Approx(a.cy + t.y).epsilon(1e-12));
    }
}

TEST_CASE("schema comparison") {
    const auto a = make_set({{Organ::mouth, {1, 1}}, {Organ::nose, {2, 2}}, {Organ::mouth, {3, 3}}},
                            {10, 10});
    const auto b = make_set({{Organ::mouth, {5, 5}}, {Organ::nose, {6, 6}}, {Organ::mouth, {7, 7}}},
                            {20, 20});
    const auto c = make_set({{Organ::mouth, {5, 5}}, {Organ::mouth, {6, 6}}, {Organ::mouth, {7, 7}}},
                            {20, 20});
    CHECK(same_schema(a, b)); // sizes may differ, organs match
    CHECK(!same_schema(a, c));
    CHECK_THROWS_AS(require_same_schema(a, c, "test"), SchemaError);
}

} // TEST_SUITE
