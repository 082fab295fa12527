#pragma once

#include "declos/coordination.hpp"
#include "declos/trace.hpp"

namespace declos {

enum class AgentStatus { Tracking, AtGoal, EmergencyStopped };

struct AgentRuntime {
    AgentId id = 0;
    Point2 position;
    Point2 goal;
    AgentStatus status = AgentStatus::Tracking;
};

// Runs the full mission loop and returns the tick-level trace:
//   outer iteration k: one coordination round per subgraph (token order),
//   then ticks_per_iteration motion ticks; after every tick the line-of-sight
//   partition is recomputed (DecLos mode) and every subgraph that appears in
//   the new partition but not the old one emergency-brakes and re-initializes
//   its coordination. Clairvoyant mode pins the partition to the single full
//   subgraph, so it never brakes. Stops when every agent sits in its goal ball
//   at an iteration boundary, or after max_outer_iterations.
//
// Throws InvariantBreachError if a live safety check fails (separation below
// delta_min, an agent inside an obstacle, or a coordination precondition
// violated at re-initialization).
SimTrace run_scenario(const ScenarioConfig& config);

// Final per-agent runtime view of a finished trace (CLI summary, rendering).
std::vector<AgentRuntime> final_agent_states(const SimTrace& trace);

// Exposed for unit tests: applies a partition change to the coordination
// states, braking and re-initializing exactly the subgraphs new to the
// partition. Returns the braked agents (ascending).
std::vector<AgentId> apply_subgraph_change(
    std::map<std::vector<AgentId>, CoordinationState>& coord, const SubgraphPartition& old_part,
    const SubgraphPartition& new_part, const PositionMap& positions, int iteration,
    const Workspace& w, const SimParams& sp);

}  // namespace declos
