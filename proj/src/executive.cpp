#include "declos/executive.hpp"

#include "declos/sim.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace declos {

namespace {

CoordinationState& state_for(std::map<std::vector<AgentId>, CoordinationState>& coord,
                             AgentId id) {
    for (auto& [members, st] : coord)
        if (std::binary_search(members.begin(), members.end(), id)) return st;
    throw InvariantBreachError("executive: agent " + std::to_string(id) +
                               " belongs to no coordination state");
}

void live_safety_check(const PositionMap& positions, const Workspace& w, const SimParams& sp,
                       long tick) {
    std::vector<std::pair<AgentId, Point2>> pts(positions.begin(), positions.end());
    for (const auto& [id, p] : pts) {
        if (!point_in_free_space(p, w)) {
            std::ostringstream os;
            os << "invariant breach at tick " << tick << ": agent " << id << " at (" << p.x
               << ", " << p.y << ") left the inflated free space";
            throw InvariantBreachError(os.str());
        }
    }
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            double d = inf_norm_dist(pts[i].second, pts[j].second);
            if (d < sp.delta_min) {
                std::ostringstream os;
                os << "invariant breach at tick " << tick << ": agents " << pts[i].first << ","
                   << pts[j].first << " separated by " << d << " m (< delta_min " << sp.delta_min
                   << ")";
                throw InvariantBreachError(os.str());
            }
        }
    }
}

}  // namespace

std::vector<AgentId> apply_subgraph_change(
    std::map<std::vector<AgentId>, CoordinationState>& coord, const SubgraphPartition& old_part,
    const SubgraphPartition& new_part, const PositionMap& positions, int iteration,
    const Workspace& w, const SimParams& sp) {
    std::set<std::vector<AgentId>> old_sets(old_part.subgraphs.begin(), old_part.subgraphs.end());
    std::set<std::vector<AgentId>> new_sets(new_part.subgraphs.begin(), new_part.subgraphs.end());

    // drop coordination of subgraphs that no longer exist
    for (auto it = coord.begin(); it != coord.end();)
        it = new_sets.count(it->first) ? std::next(it) : coord.erase(it);

    std::vector<AgentId> braked;
    for (const auto& members : new_part.subgraphs) {
        if (old_sets.count(members)) continue;  // unchanged subgraph keeps flying
        for (AgentId id : members) braked.push_back(id);
        coord[members] = dma_init(members, positions, iteration, w, sp);
    }
    std::sort(braked.begin(), braked.end());
    return braked;
}

SimTrace run_scenario(const ScenarioConfig& config) {
    const SimParams& sp = config.params;
    Workspace w = config.build_workspace();
    int tpi = sp.ticks_per_iteration();
    auto goals = config.goals();

    PositionMap positions = config.starts();
    bool clairvoyant = sp.mode == RunMode::Clairvoyant;

    SimTrace trace;
    trace.config = config;

    SubgraphPartition part =
        clairvoyant ? single_subgraph(positions) : compute_subgraphs(positions, w.physical);
    part.epoch = 0;

    std::map<std::vector<AgentId>, CoordinationState> coord;
    TickRecord first;
    first.tick = 0;
    first.k = 0;
    first.positions = positions;
    first.partition = part;
    for (const auto& members : part.subgraphs) {
        coord[members] = dma_init(members, positions, 0, w, sp);
        TraceEvent e;
        e.kind = "reinit";
        e.members = members;
        first.events.push_back(e);
    }
    std::set<AgentId> goal_announced;
    for (const auto& [id, p] : positions) {
        if (at_goal(p, goals.at(id), sp.goal_tolerance)) {
            TraceEvent e;
            e.kind = "goal";
            e.agent = id;
            first.events.push_back(e);
            goal_announced.insert(id);
        }
    }
    live_safety_check(positions, w, sp, 0);
    trace.records.push_back(std::move(first));

    auto all_at_goal = [&]() {
        for (const auto& [id, p] : positions)
            if (!at_goal(p, goals.at(id), sp.goal_tolerance)) return false;
        return true;
    };

    int k = 0;
    while (!all_at_goal() && k < sp.max_outer_iterations) {
        ++k;
        // coordination rounds, one per subgraph in canonical order
        std::vector<TraceEvent> commits;
        for (auto& [members, st] : coord) {
            DmaStepResult res = dma_step(st, w, goals, k, sp);
            if (res.committed) {
                TraceEvent e;
                e.kind = "commit";
                e.agent = res.winner;
                e.value = res.winner_cost;
                commits.push_back(e);
            }
        }

        for (int m = 1; m <= tpi; ++m) {
            long tick = static_cast<long>(k - 1) * tpi + m;
            for (auto& [id, pos] : positions) {
                const WaypointPlan& plan = state_for(coord, id).committed_plans.at(id);
                pos = step_agent(pos, plan.waypoint_for_iteration(k), sp.v_max, sp.dt);
            }

            TickRecord rec;
            rec.tick = tick;
            rec.k = k;
            rec.positions = positions;
            if (m == 1 && !commits.empty()) {
                rec.events = commits;
                commits.clear();
            }

            if (!clairvoyant) {
                SubgraphPartition next = compute_subgraphs(positions, w.physical);
                next.epoch = tick;
                if (next != part) {
                    std::vector<AgentId> braked =
                        apply_subgraph_change(coord, part, next, positions, k, w, sp);
                    for (AgentId id : braked) {
                        TraceEvent e;
                        e.kind = "brake";
                        e.agent = id;
                        rec.events.push_back(e);
                    }
                    for (const auto& members : next.subgraphs) {
                        if (std::find(part.subgraphs.begin(), part.subgraphs.end(), members) ==
                            part.subgraphs.end()) {
                            TraceEvent e;
                            e.kind = "reinit";
                            e.members = members;
                            rec.events.push_back(e);
                        }
                    }
                    part = next;
                } else {
                    part.epoch = tick;
                }
            }
            rec.partition = part;

            for (const auto& [id, p] : positions) {
                if (!goal_announced.count(id) && at_goal(p, goals.at(id), sp.goal_tolerance)) {
                    TraceEvent e;
                    e.kind = "goal";
                    e.agent = id;
                    rec.events.push_back(e);
                    goal_announced.insert(id);
                }
            }

            live_safety_check(positions, w, sp, tick);
            trace.records.push_back(std::move(rec));
        }
    }
    return trace;
}

std::vector<AgentRuntime> final_agent_states(const SimTrace& trace) {
    std::vector<AgentRuntime> out;
    if (trace.records.empty()) return out;
    const TickRecord& last = trace.records.back();
    std::set<AgentId> braked_now;
    for (const TraceEvent& e : last.events)
        if (e.kind == "brake") braked_now.insert(e.agent);
    auto goals = trace.config.goals();
    for (const auto& [id, p] : last.positions) {
        AgentRuntime rt;
        rt.id = id;
        rt.position = p;
        rt.goal = goals.at(id);
        if (at_goal(p, rt.goal, trace.config.params.goal_tolerance))
            rt.status = AgentStatus::AtGoal;
        else if (braked_now.count(id))
            rt.status = AgentStatus::EmergencyStopped;
        else
            rt.status = AgentStatus::Tracking;
        out.push_back(rt);
    }
    return out;
}

}  // namespace declos
