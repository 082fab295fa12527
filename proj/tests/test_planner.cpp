#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "declos/planner.hpp"
#include "doctest.h"

using namespace declos;

namespace {

SimParams default_params() { return SimParams{}; }

Workspace empty_world() {
    return make_workspace(AARect(0.0, 10.0, 0.0, 10.0), {}, default_params().delta,
                          InflationMode::Full, 1.0);
}

WaypointPlan line_plan(AgentId agent, int anchor, std::vector<Point2> pts) {
    WaypointPlan p;
    p.agent = agent;
    p.start_iteration = anchor;
    p.waypoints = std::move(pts);
    return p;
}

}  // namespace

TEST_CASE("stopped plans park the agent forever") {
    WaypointPlan p = stopped_plan(7, {3.0, 4.0}, 5);
    CHECK(p.agent == 7);
    CHECK(p.start_iteration == 5);
    REQUIRE(p.waypoints.size() == 1);
    CHECK(p.waypoints[0] == Point2{3.0, 4.0});
    CHECK(p.waypoint_for_iteration(5) == Point2{3.0, 4.0});
    CHECK(p.waypoint_for_iteration(900) == Point2{3.0, 4.0});
    CHECK(path_cost(p) == 0.0);
    CHECK(p.end_iteration() == 5);
}

TEST_CASE("path cost sums euclidean waypoint spacing") {
    WaypointPlan p = line_plan(1, 0, {{0.0, 0.0}, {3.0, 4.0}, {3.0, 5.0}});
    CHECK(path_cost(p) == doctest::Approx(6.0));
}

TEST_CASE("waypoint lookup clamps to the plan's span") {
    WaypointPlan p = line_plan(1, 4, {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
    CHECK(p.waypoint_for_iteration(3) == Point2{0.0, 0.0});  // before the anchor
    CHECK(p.waypoint_for_iteration(4) == Point2{0.0, 0.0});  // anchor iteration
    CHECK(p.waypoint_for_iteration(5) == Point2{1.0, 0.0});
    CHECK(p.waypoint_for_iteration(6) == Point2{2.0, 0.0});
    CHECK(p.waypoint_for_iteration(7) == Point2{2.0, 0.0});  // parked past the end
    CHECK(p.end_iteration() == 6);
}

TEST_CASE("tick-level positions replay the executive's stepping exactly") {
    SimParams sp = default_params();  // v_max 1, dt 0.1, outer period 1
    WaypointPlan p = line_plan(1, 0, {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});

    CHECK(plan_position_at_tick(p, 0, sp) == Point2{0.0, 0.0});
    Point2 mid = plan_position_at_tick(p, 5, sp);
    CHECK(mid.x == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(mid.y == 0.0);
    // rounding may leave the walker an ulp shy of a waypoint at an iteration
    // boundary, so boundary ticks are near-exact, not bit-exact
    Point2 boundary = plan_position_at_tick(p, 10, sp);
    CHECK(boundary.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(boundary.y == 0.0);
    Point2 late = plan_position_at_tick(p, 17, sp);
    CHECK(late.x == doctest::Approx(1.7).epsilon(1e-9));
    Point2 end = plan_position_at_tick(p, 20, sp);
    CHECK(end.x == doctest::Approx(2.0).epsilon(1e-12));
    // past the end every step targets the final waypoint, which is hit exactly
    // within a tick and then held as a fixed point
    CHECK(plan_position_at_tick(p, 35, sp) == Point2{2.0, 0.0});  // parked

    // cross-check against literal step_agent iteration
    Point2 pos{0.0, 0.0};
    for (long t = 1; t <= 17; ++t) {
        pos = step_agent(pos, p.waypoint_for_iteration((int)((t + sp.ticks_per_iteration() - 1) /
                                                             sp.ticks_per_iteration())),
                         sp.v_max, sp.dt);
    }
    Point2 replay = plan_position_at_tick(p, 17, sp);
    CHECK(pos == replay);
}

TEST_CASE("plan validation flags each violation kind") {
    SimParams sp = default_params();
    Workspace w = make_workspace(AARect(0.0, 10.0, 0.0, 10.0), {AARect(4.0, 6.0, 4.0, 6.0)},
                                 sp.delta, InflationMode::Full, 1.0);

    WaypointPlan empty;
    empty.agent = 1;
    REQUIRE(validate_plan(empty, w, {}, sp).has_value());
    CHECK(validate_plan(empty, w, {}, sp)->kind == PlanViolation::Kind::Empty);

    WaypointPlan oob = line_plan(1, 0, {{1.0, 1.0}, {1.0, 0.1}, {1.0, -0.7}});
    REQUIRE(validate_plan(oob, w, {}, sp).has_value());
    CHECK(validate_plan(oob, w, {}, sp)->kind == PlanViolation::Kind::OutOfBounds);

    WaypointPlan hit = line_plan(1, 0, {{3.0, 5.0}, {3.9, 5.0}});  // keep-out reaches 3.599
    REQUIRE(validate_plan(hit, w, {}, sp).has_value());
    CHECK(validate_plan(hit, w, {}, sp)->kind == PlanViolation::Kind::ObstacleContact);

    WaypointPlan lunge = line_plan(1, 0, {{1.0, 1.0}, {2.5, 1.0}});  // 1.5 > v_max*period
    REQUIRE(validate_plan(lunge, w, {}, sp).has_value());
    CHECK(validate_plan(lunge, w, {}, sp)->kind == PlanViolation::Kind::SegmentTooLong);

    // corner-cutting chord: both waypoints free, dt samples land in the band
    WaypointPlan skim = line_plan(1, 0, {{3.399, 4.099}, {4.099, 3.399}});
    REQUIRE(validate_plan(skim, w, {}, sp).has_value());
    CHECK(validate_plan(skim, w, {}, sp)->kind == PlanViolation::Kind::ObstacleContact);

    WaypointPlan ok = line_plan(1, 0, {{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}});
    CHECK(!validate_plan(ok, w, {}, sp).has_value());

    // parallel tracks separated by less than delta_min violate separation
    WaypointPlan near = line_plan(2, 0, {{1.0, 1.59}, {2.0, 1.59}, {3.0, 1.59}});
    auto v = validate_plan(near, w, {ok}, sp);
    REQUIRE(v.has_value());
    CHECK(v->kind == PlanViolation::Kind::Separation);

    WaypointPlan clear = line_plan(2, 0, {{1.0, 1.61}, {2.0, 1.61}, {3.0, 1.61}});
    CHECK(!validate_plan(clear, w, {ok}, sp).has_value());
}

TEST_CASE("rrt planning in an empty world reaches the goal ball") {
    SimParams sp = default_params();
    Workspace w = empty_world();
    RngStream rng = planning_stream(sp.master_seed, 1, 0);
    auto plan = rrt_plan(1, {1.0, 1.0}, {9.0, 9.0}, w, {}, 0, sp, rng);
    REQUIRE(plan.has_value());
    CHECK(plan->agent == 1);
    CHECK(plan->start_iteration == 0);
    CHECK(plan->waypoints.front() == Point2{1.0, 1.0});
    CHECK(inf_norm_dist(plan->final_position(), {9.0, 9.0}) <= sp.goal_tolerance / 2.0 + 1e-12);
    CHECK(!validate_plan(*plan, w, {}, sp).has_value());
    for (size_t i = 1; i < plan->waypoints.size(); ++i)
        CHECK(euclid_dist(plan->waypoints[i - 1], plan->waypoints[i]) <=
              sp.waypoint_spacing() + 1e-12);
}

TEST_CASE("an agent already in its goal ball parks") {
    SimParams sp = default_params();
    Workspace w = empty_world();
    RngStream rng = planning_stream(sp.master_seed, 1, 3);
    auto plan = rrt_plan(1, {5.0, 5.0}, {5.3, 4.9}, w, {}, 3, sp, rng);
    REQUIRE(plan.has_value());
    CHECK(plan->waypoints.size() == 1);
    CHECK(plan->waypoints[0] == Point2{5.0, 5.0});
}

TEST_CASE("planning is bitwise deterministic in the stream") {
    SimParams sp = default_params();
    Workspace w = make_workspace(AARect(0.0, 10.0, 0.0, 10.0), {AARect(4.0, 6.0, 2.0, 8.0)},
                                 sp.delta, InflationMode::Full, 1.0);
    RngStream r1 = planning_stream(42, 3, 7);
    RngStream r2 = planning_stream(42, 3, 7);
    auto p1 = rrt_plan(3, {1.0, 5.0}, {9.0, 5.0}, w, {}, 7, sp, r1);
    auto p2 = rrt_plan(3, {1.0, 5.0}, {9.0, 5.0}, w, {}, 7, sp, r2);
    REQUIRE(p1.has_value());
    REQUIRE(p2.has_value());
    CHECK(*p1 == *p2);

    RngStream r3 = planning_stream(43, 3, 7);
    auto p3 = rrt_plan(3, {1.0, 5.0}, {9.0, 5.0}, w, {}, 7, sp, r3);
    REQUIRE(p3.has_value());  // different seed still plans, usually differently
}

TEST_CASE("starting inside a keep-out is the caller's bug") {
    SimParams sp = default_params();
    Workspace w = make_workspace(AARect(0.0, 10.0, 0.0, 10.0), {AARect(4.0, 6.0, 4.0, 6.0)},
                                 sp.delta, InflationMode::Full, 1.0);
    RngStream rng = planning_stream(1, 1, 0);
    CHECK_THROWS_AS(rrt_plan(1, {4.0, 5.0}, {9.0, 9.0}, w, {}, 0, sp, rng), InvalidStartError);

    // start too close to a constraint plan's anchor is the same class of error
    RngStream rng2 = planning_stream(1, 2, 0);
    std::vector<WaypointPlan> constraints = {stopped_plan(1, {1.0, 1.0}, 0)};
    CHECK_THROWS_AS(rrt_plan(2, {1.2, 1.2}, {9.0, 9.0}, w, constraints, 0, sp, rng2),
                    InvalidStartError);
}

TEST_CASE("a sealed-off goal yields a partial advance toward it") {
    SimParams sp = default_params();
    Workspace w = make_workspace(AARect(0.0, 10.0, 0.0, 10.0), {AARect(0.0, 10.0, 4.0, 6.0)},
                                 sp.delta, InflationMode::Full, 1.0);
    RngStream rng = planning_stream(1, 1, 0);
    Point2 start{5.0, 1.0}, goal{5.0, 9.0};
    auto plan = rrt_plan(1, start, goal, w, {}, 0, sp, rng);
    // the wall spans the world, so the goal is unreachable; the anytime
    // fallback still commits the best valid partial path below the wall
    REQUIRE(plan.has_value());
    CHECK(!validate_plan(*plan, w, {}, sp).has_value());
    Point2 final = plan->waypoints.back();
    CHECK(!at_goal(final, goal, sp.goal_tolerance));
    CHECK(final.y < 4.0 - sp.delta);
    CHECK(euclid_dist(final, goal) < euclid_dist(start, goal) - 0.09);
}

TEST_CASE("no plan when every advancing path breaks separation") {
    SimParams sp = default_params();
    sp.delta_min = 3.0;
    // a 3 m tall strip: the parked opponent's keep-out spans its full height,
    // so any path toward the goal must cross within delta_min of it
    Workspace w = make_workspace(AARect(0.0, 10.0, 0.0, 3.0), {}, sp.delta,
                                 InflationMode::Full, 1.0);
    std::vector<WaypointPlan> constraints = {stopped_plan(2, {4.0, 1.5}, 0)};
    RngStream rng = planning_stream(1, 1, 0);
    auto plan = rrt_plan(1, {1.0, 1.5}, {9.0, 1.5}, w, constraints, 0, sp, rng);
    CHECK(!plan.has_value());
}
