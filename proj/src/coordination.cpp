#include "declos/coordination.hpp"

#include <algorithm>
#include <sstream>

namespace declos {

CoordinationState dma_init(const std::vector<AgentId>& members, const PositionMap& positions,
                           int iteration, const Workspace& w, const SimParams& sp) {
    if (members.empty()) throw InvariantBreachError("dma_init: empty subgraph");
    CoordinationState st;
    st.members = members;
    std::sort(st.members.begin(), st.members.end());
    st.mode = sp.token_mode;
    st.token_holder = st.members.front();
    for (AgentId id : st.members) {
        auto it = positions.find(id);
        if (it == positions.end())
            throw InvariantBreachError("dma_init: no position for agent " + std::to_string(id));
        if (!point_in_free_space(it->second, w)) {
            std::ostringstream os;
            os << "dma_init: agent " << id << " at (" << it->second.x << ", " << it->second.y
               << ") is not in the inflated free space";
            throw InvariantBreachError(os.str());
        }
        st.committed_plans[id] = stopped_plan(id, it->second, iteration);
        st.bids[id] = 0.0;
    }
    for (size_t i = 0; i < st.members.size(); ++i) {
        for (size_t j = i + 1; j < st.members.size(); ++j) {
            double d = inf_norm_dist(positions.at(st.members[i]), positions.at(st.members[j]));
            if (d < sp.delta_min) {
                std::ostringstream os;
                os << "dma_init: agents " << st.members[i] << "," << st.members[j] << " are " << d
                   << " m apart (< delta_min " << sp.delta_min << ")";
                throw InvariantBreachError(os.str());
            }
        }
    }
    return st;
}

DmaStepResult dma_step(CoordinationState& state, const Workspace& w,
                       const std::map<AgentId, Point2>& goals, int k, const SimParams& sp) {
    int anchor = k - 1;  // plans are made from where agents stand at time k-1
    std::map<AgentId, WaypointPlan> candidates;
    for (AgentId id : state.members) {
        std::vector<WaypointPlan> constraints;
        for (AgentId other : state.members)
            if (other != id) constraints.push_back(state.committed_plans.at(other));
        Point2 from = plan_position_at_tick(state.committed_plans.at(id),
                                            static_cast<long>(anchor) * sp.ticks_per_iteration(),
                                            sp);
        RngStream rng = planning_stream(sp.master_seed, id, k);
        auto cand = rrt_plan(id, from, goals.at(id), w, constraints, anchor, sp, rng);
        double committed_cost = path_cost(state.committed_plans.at(id));
        if (cand) {
            state.bids[id] = committed_cost - path_cost(*cand);
            candidates[id] = std::move(*cand);
        } else {
            state.bids[id] = 0.0;
        }
    }

    DmaStepResult result;
    if (state.mode == TokenMode::RoundRobin) {
        result.winner = state.token_holder;
        // pass the token onward after this turn
        auto it = std::find(state.members.begin(), state.members.end(), state.token_holder);
        size_t idx = static_cast<size_t>(it - state.members.begin());
        state.token_holder = state.members[(idx + 1) % state.members.size()];
    } else {
        AgentId best = state.members.front();
        for (AgentId id : state.members) {
            double b = state.bids.at(id);
            double cur = state.bids.at(best);
            if (b > cur) best = id;  // ties keep the lower id (members ascend)
        }
        result.winner = best;
        state.token_holder = best;
    }

    auto cand_it = candidates.find(result.winner);
    if (cand_it != candidates.end()) {
        std::vector<WaypointPlan> others;
        for (AgentId other : state.members)
            if (other != result.winner) others.push_back(state.committed_plans.at(other));
        if (!validate_plan(cand_it->second, w, others, sp)) {
            state.committed_plans[result.winner] = cand_it->second;
            result.committed = true;
            result.winner_cost = path_cost(cand_it->second);
        }
    }
    return result;
}

}  // namespace declos
