#pragma once

#include <vector>

#include "declos/trace.hpp"

namespace declos {

// One tick of motion toward a target: step at most v_max*dt, land exactly on
// the target when within reach (exact assignment, no drift).
Point2 step_agent(const Point2& pos, const Point2& target, double v_max, double dt);

// Inside the closed goal ball: inf-dist <= tolerance/2 (ball side = tolerance).
bool at_goal(const Point2& pos, const Point2& goal, double tolerance);

struct AgentMetrics {
    AgentId id = 0;
    bool finished = false;       // final-tick position inside the goal ball
    double time_to_goal = -1.0;  // first entry time, seconds; -1 if never entered
    double path_length = 0.0;    // meters, summed over tick displacements
    int brake_count = 0;
};

struct MetricsSummary {
    std::vector<AgentMetrics> per_agent;
    double min_interagent_distance = 0.0;  // over all tick pairs, inf-norm
    long total_brake_events = 0;
    int outer_iterations_used = 0;
    bool all_finished = false;
    double mean_time_to_goal = -1.0;   // over finished agents; -1 if none
    double mean_path_length = 0.0;     // over all agents
};

MetricsSummary compute_metrics(const SimTrace& trace);

// Replay certification: recomputes every invariant from the stored records and
// the embedded config snapshot, independent of the live run. Returns a list of
// problems (empty = certified):
//   - ticks increase by one, k consistent with ticks-per-iteration
//   - positions inside bounds, outside physical and planning obstacles
//   - pairwise separation >= delta_min at every tick
//   - recorded partition matches a fresh line-of-sight recomputation
//     (clairvoyant traces must record the single full subgraph)
//   - agents in different subgraphs strictly farther than delta_min
//   - per-tick displacement <= v_max*dt (+1e-9 slack)
//   - brake events only on ticks whose partition differs from the previous
std::vector<std::string> verify_trace(const SimTrace& trace);

}  // namespace declos
