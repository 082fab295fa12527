#pragma once

#include <map>
#include <vector>

#include "declos/planner.hpp"

namespace declos {

// Fatal: the simulation reached a state the safety argument excludes.
struct InvariantBreachError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-subgraph coordination: members share one token; only the token holder
// may replace its committed plan each outer iteration.
struct CoordinationState {
    std::vector<AgentId> members;  // ascending
    AgentId token_holder = -1;
    std::map<AgentId, WaypointPlan> committed_plans;
    std::map<AgentId, double> bids;  // last computed path-improvement values
    TokenMode mode = TokenMode::RoundRobin;
};

// Fresh coordination for a subgraph: everyone gets a stopped plan at their
// current position, the smallest id holds the token, bids are zeroed.
// Preconditions (fatal InvariantBreachError): members pairwise >= delta_min
// apart and in the inflated free space.
CoordinationState dma_init(const std::vector<AgentId>& members, const PositionMap& positions,
                           int iteration, const Workspace& w, const SimParams& sp);

struct DmaStepResult {
    AgentId winner = -1;
    bool committed = false;   // winner's candidate was valid and adopted
    double winner_cost = 0.0; // path cost of the adopted plan (if committed)
};

// One outer-iteration coordination round for iteration k:
//   - every member plans toward its goal, constrained by the other members'
//     committed plans (per-agent rng stream from master seed, member id, k)
//   - RoundRobin: the token holder wins and the token passes to the next
//     member cyclically; BidBased: the best path-improvement bid wins (ties to
//     the lowest id) and keeps the token
//   - the winner's candidate replaces its committed plan only if it
//     re-validates against the others
DmaStepResult dma_step(CoordinationState& state, const Workspace& w,
                       const std::map<AgentId, Point2>& goals, int k, const SimParams& sp);

}  // namespace declos
