#pragma once

#include <optional>
#include <string>
#include <vector>

#include "declos/rng.hpp"
#include "declos/scenario.hpp"
#include "declos/sim.hpp"

namespace declos {

// A committed trajectory: waypoints[j] is the position to reach by the end of
// outer iteration start_iteration + j; waypoints[0] is the anchor (where the
// agent was when the plan was made). Past the last waypoint the agent is
// parked there. Consecutive waypoints are at most v_max*outer_period apart, so
// each is reached within its iteration.
struct WaypointPlan {
    AgentId agent = -1;
    int start_iteration = 0;
    std::vector<Point2> waypoints;

    int end_iteration() const {
        return start_iteration + static_cast<int>(waypoints.size()) - 1;
    }
    const Point2& waypoint_for_iteration(int k) const;
    const Point2& final_position() const { return waypoints.back(); }

    bool operator==(const WaypointPlan& o) const {
        return agent == o.agent && start_iteration == o.start_iteration &&
               waypoints == o.waypoints;
    }
};

WaypointPlan stopped_plan(AgentId agent, const Point2& pos, int iteration);
double path_cost(const WaypointPlan& plan);  // summed Euclidean waypoint spacing

// Exact tick-level position of an agent following `plan`, reproducing the
// executive's per-tick stepping bit for bit (same step_agent arithmetic).
// `tick` is the global tick index (t = tick * dt).
Point2 plan_position_at_tick(const WaypointPlan& plan, long tick, const SimParams& sp);

struct PlanViolation {
    enum class Kind { Empty, OutOfBounds, ObstacleContact, SegmentTooLong, Separation };
    Kind kind = Kind::Empty;
    int iteration = 0;
    std::string detail;
};

// nullopt = Valid. Checks, in order: non-empty; every waypoint in the inflated
// free space; consecutive spacing <= v_max*outer_period; every dt-interpolated
// position along the motion in free space; inf-norm separation >= delta_min
// from every constraint plan at every shared tick until both sides are parked.
std::optional<PlanViolation> validate_plan(const WaypointPlan& plan, const Workspace& w,
                                           const std::vector<WaypointPlan>& constraints,
                                           const SimParams& sp);

// Planning preconditions (start in free space, separated from constraints at
// the anchor tick) are the caller's responsibility; violations indicate an
// executive logic error, not a planning failure.
struct InvalidStartError : std::logic_error {
    using std::logic_error::logic_error;
};

// RRT* toward the goal ball in the inflated workspace, time-parameterized from
// `anchor_iteration` and validated against the constraint plans before being
// returned. Returns nullopt when no valid plan was found within the iteration
// budget (callers keep their previous plan). Deterministic given the stream.
std::optional<WaypointPlan> rrt_plan(AgentId agent, const Point2& start, const Point2& goal,
                                     const Workspace& w,
                                     const std::vector<WaypointPlan>& constraints,
                                     int anchor_iteration, const SimParams& sp, RngStream& rng);

}  // namespace declos
