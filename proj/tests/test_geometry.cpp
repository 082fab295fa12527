#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "declos/geometry.hpp"
#include "doctest.h"

#include <cmath>
#include <stdexcept>

using namespace declos;

TEST_CASE("inf-norm and euclid distances") {
    CHECK(inf_norm_dist({19.3, 6.6}, {16.2, 10.4}) == doctest::Approx(3.8).epsilon(1e-12));
    CHECK(inf_norm_dist({1.0, 1.0}, {1.0, 1.0}) == 0.0);
    CHECK(inf_norm_dist({0.0, 0.0}, {2.0, -1.0}) == 2.0);
    CHECK(euclid_dist({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("rectangle construction and membership") {
    CHECK_THROWS_AS(AARect(2.0, 2.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AARect(0.0, 1.0, 5.0, 4.0), std::invalid_argument);

    AARect r(2.0, 4.0, 6.0, 10.0);
    CHECK(r.contains_closed({2.0, 6.0}));  // corner counts (closed)
    CHECK(r.contains_closed({3.0, 8.0}));
    CHECK(!r.contains_closed({1.999, 8.0}));
    CHECK(r.contains_rect(AARect(2.5, 3.5, 7.0, 9.0)));
    CHECK(r.contains_rect(r));
    CHECK(!r.contains_rect(AARect(2.5, 4.5, 7.0, 9.0)));
}

TEST_CASE("inf-norm distance to a rectangle") {
    AARect r(2.0, 4.0, 6.0, 10.0);
    CHECK(inf_dist_to_rect({3.0, 8.0}, r) == 0.0);
    CHECK(inf_dist_to_rect({2.0, 6.0}, r) == 0.0);  // boundary
    CHECK(inf_dist_to_rect({1.0, 5.0}, r) == doctest::Approx(1.0));
    CHECK(inf_dist_to_rect({0.5, 7.0}, r) == doctest::Approx(1.5));
    CHECK(inf_dist_to_rect({3.0, 11.2}, r) == doctest::Approx(1.2));
    CHECK(inf_dist_to_rect({5.0, 12.0}, r) == doctest::Approx(2.0));  // corner: max of excesses
}

TEST_CASE("full expansion moves each bound by half the width") {
    AARect r(2.0, 4.0, 6.0, 10.0);
    AARect e = expand_rect(r, 0.4);
    CHECK(e.xmin == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(e.xmax == doctest::Approx(4.2).epsilon(1e-12));
    CHECK(e.ymin == doctest::Approx(5.8).epsilon(1e-12));
    CHECK(e.ymax == doctest::Approx(10.2).epsilon(1e-12));
    CHECK_THROWS_AS(expand_rect(r, -0.1), std::invalid_argument);
}

static bool in_union(const Point2& p, const std::vector<AARect>& rects) {
    for (const AARect& r : rects)
        if (r.contains_closed(p)) return true;
    return false;
}

TEST_CASE("adaptive expansion produces the base rect plus four corner caps") {
    AARect r(0.0, 4.0, 0.0, 4.0);
    InflationSpec spec{0.4, InflationMode::Adaptive, 1.0};
    std::vector<AARect> out = adaptive_expand(r, spec);
    REQUIRE(out.size() == 5);

    const AARect expected[] = {
        r,
        AARect(-0.2, 1.2, -0.2, 1.2),
        AARect(2.8, 4.2, -0.2, 1.2),
        AARect(-0.2, 1.2, 2.8, 4.2),
        AARect(2.8, 4.2, 2.8, 4.2),
    };
    for (const AARect& want : expected) {
        bool found = false;
        for (const AARect& got : out)
            if (std::abs(got.xmin - want.xmin) < 1e-12 && std::abs(got.xmax - want.xmax) < 1e-12 &&
                std::abs(got.ymin - want.ymin) < 1e-12 && std::abs(got.ymax - want.ymax) < 1e-12)
                found = true;
        CHECK_MESSAGE(found, "missing rect [", want.xmin, ",", want.xmax, "]x[", want.ymin, ",",
                      want.ymax, "]");
    }

    // the union is sandwiched between the base rect and the full expansion,
    // and mid-face points of the full expansion stay out of it
    AARect full = expand_rect(r, 0.4);
    for (double x = -0.45; x <= 4.5; x += 0.05)
        for (double y = -0.45; y <= 4.5; y += 0.05) {
            Point2 p{x, y};
            if (r.contains_closed(p)) CHECK(in_union(p, out));
            if (in_union(p, out)) CHECK(full.contains_closed(p));
        }
    CHECK(full.contains_closed({2.0, -0.1}));
    CHECK(!in_union({2.0, -0.1}, out));
}

TEST_CASE("caps covering half the side degrade to the full expansion") {
    AARect r(0.0, 4.0, 0.0, 4.0);
    std::vector<AARect> out = adaptive_expand(r, {0.4, InflationMode::Adaptive, 2.0});
    AARect full = expand_rect(r, 0.4);
    for (double x = -0.45; x <= 4.5; x += 0.05)
        for (double y = -0.45; y <= 4.5; y += 0.05) {
            Point2 p{x, y};
            CHECK(in_union(p, out) == full.contains_closed(p));
        }
}

TEST_CASE("oversized caps are clipped inside the full expansion") {
    AARect r(0.0, 2.0, 0.0, 2.0);
    std::vector<AARect> out = adaptive_expand(r, {0.4, InflationMode::Adaptive, 5.0});
    AARect full = expand_rect(r, 0.4);
    for (const AARect& c : out) CHECK(full.contains_rect(c));
}

TEST_CASE("segment occlusion uses the open interior") {
    AARect sq(0.0, 1.0, 0.0, 1.0);
    CHECK(segment_blocked_one({-0.5, 0.5}, {1.5, 0.5}, sq));
    CHECK(segment_blocked_one({0.5, -1.0}, {0.5, 2.0}, sq));
    CHECK(segment_blocked_one({-1.0, -1.0}, {2.0, 2.0}, sq));  // diagonal through the interior
    // riding an edge line never enters the open interior
    CHECK(!segment_blocked_one({-1.0, 0.0}, {2.0, 0.0}, sq));
    CHECK(!segment_blocked_one({-1.0, 1.0}, {2.0, 1.0}, sq));
    // corner tangent: touches (1,1) only
    CHECK(!segment_blocked_one({2.0, 0.0}, {0.0, 2.0}, sq));
    // both endpoints on the same side, segment stays outside
    CHECK(!segment_blocked_one({-0.5, 0.2}, {-0.1, 0.9}, sq));
    // endpoint inside the interior
    CHECK(segment_blocked_one({0.5, 0.5}, {2.0, 0.5}, sq));
    // multi-rect wrapper
    std::vector<AARect> obs = {AARect(3.0, 4.0, 3.0, 4.0), sq};
    CHECK(segment_blocked({-0.5, 0.5}, {1.5, 0.5}, obs));
    CHECK(!segment_blocked({-1.0, 0.0}, {2.0, 0.0}, obs));
}

TEST_CASE("workspace assembly inflates obstacles for planning only") {
    AARect bounds(0.0, 20.0, 0.0, 20.0);
    std::vector<AARect> obs = {AARect(5.0, 7.0, 5.0, 9.0)};
    Workspace w = make_workspace(bounds, obs, 0.5, InflationMode::Full, 1.0);
    REQUIRE(w.physical.size() == 1);
    REQUIRE(w.planning.size() == 1);
    CHECK(w.planning[0].xmin == doctest::Approx(4.5));
    CHECK(w.planning[0].xmax == doctest::Approx(7.5));
    CHECK(w.planning[0].ymin == doctest::Approx(4.5));
    CHECK(w.planning[0].ymax == doctest::Approx(9.5));

    CHECK(point_in_free_space({1.0, 1.0}, w));
    CHECK(!point_in_free_space({6.0, 7.0}, w));   // inside the obstacle
    CHECK(!point_in_free_space({4.7, 7.0}, w));   // inside the keep-out band
    CHECK(point_in_free_space({4.4, 7.0}, w));
    CHECK(!point_in_free_space({-0.1, 7.0}, w));  // outside the bounds
    CHECK(point_in_free_space({0.0, 0.0}, w));    // bounds are closed

    CHECK_THROWS_AS(
        make_workspace(bounds, {AARect(19.0, 21.0, 0.0, 1.0)}, 0.5, InflationMode::Full, 1.0),
        std::invalid_argument);
}

TEST_CASE("adaptive workspace keeps mid-face strips uninflated") {
    AARect bounds(0.0, 40.0, 0.0, 40.0);
    std::vector<AARect> obs = {AARect(10.0, 16.0, 14.0, 26.0)};
    Workspace w = make_workspace(bounds, obs, 1.65, InflationMode::Adaptive, 3.3);
    REQUIRE(w.planning.size() == 5);
    // a point hugging the face at mid-height stays free under adaptive inflation
    CHECK(point_in_free_space({16.1, 20.0}, w));
    // the same hug near a corner is inside a cap
    CHECK(!point_in_free_space({16.1, 25.0}, w));
    // and the obstacle itself is out regardless
    CHECK(!point_in_free_space({12.0, 20.0}, w));
}
