#include "declos/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace declos {

Point2 step_agent(const Point2& pos, const Point2& target, double v_max, double dt) {
    double dist = euclid_dist(pos, target);
    double reach = v_max * dt;
    if (dist <= reach) return target;
    double scale = reach / dist;
    return Point2{pos.x + (target.x - pos.x) * scale, pos.y + (target.y - pos.y) * scale};
}

bool at_goal(const Point2& pos, const Point2& goal, double tolerance) {
    return inf_norm_dist(pos, goal) <= tolerance / 2.0;
}

MetricsSummary compute_metrics(const SimTrace& trace) {
    MetricsSummary out;
    if (trace.records.empty()) return out;
    const SimParams& sp = trace.config.params;
    auto goals = trace.config.goals();

    std::map<AgentId, AgentMetrics> per;
    for (const auto& [id, p] : trace.records.front().positions) {
        AgentMetrics m;
        m.id = id;
        per[id] = m;
    }

    double min_sep = std::numeric_limits<double>::infinity();
    const TickRecord* prev = nullptr;
    for (const auto& r : trace.records) {
        std::vector<std::pair<AgentId, Point2>> pts(r.positions.begin(), r.positions.end());
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j)
                min_sep = std::min(min_sep, inf_norm_dist(pts[i].second, pts[j].second));
        for (const auto& [id, p] : r.positions) {
            AgentMetrics& m = per[id];
            if (prev) m.path_length += euclid_dist(prev->positions.at(id), p);
            if (m.time_to_goal < 0.0 && at_goal(p, goals.at(id), sp.goal_tolerance))
                m.time_to_goal = r.tick * sp.dt;
        }
        for (const auto& e : r.events) {
            if (e.kind == "brake") {
                ++per[e.agent].brake_count;
                ++out.total_brake_events;
            }
        }
        out.outer_iterations_used = std::max(out.outer_iterations_used, r.k);
        prev = &r;
    }

    const TickRecord& last = trace.records.back();
    out.all_finished = true;
    double time_sum = 0.0;
    int finished_n = 0;
    double len_sum = 0.0;
    for (auto& [id, m] : per) {
        m.finished = at_goal(last.positions.at(id), goals.at(id), sp.goal_tolerance);
        if (!m.finished) out.all_finished = false;
        if (m.finished && m.time_to_goal >= 0.0) {
            time_sum += m.time_to_goal;
            ++finished_n;
        }
        len_sum += m.path_length;
        out.per_agent.push_back(m);
    }
    if (finished_n > 0) out.mean_time_to_goal = time_sum / finished_n;
    if (!per.empty()) out.mean_path_length = len_sum / static_cast<double>(per.size());
    out.min_interagent_distance =
        std::isfinite(min_sep) ? min_sep : std::numeric_limits<double>::infinity();
    return out;
}

namespace {

std::string fmt_tick(const TickRecord& r) {
    std::ostringstream os;
    os << "tick " << r.tick << " (k=" << r.k << ")";
    return os.str();
}

}  // namespace

std::vector<std::string> verify_trace(const SimTrace& trace) {
    std::vector<std::string> problems;
    auto fail = [&](const std::string& msg) { problems.push_back(msg); };
    if (trace.records.empty()) {
        fail("trace has no records");
        return problems;
    }
    const SimParams& sp = trace.config.params;
    Workspace w = trace.config.build_workspace();
    int tpi = sp.ticks_per_iteration();
    double step_cap = sp.v_max * sp.dt + 1e-9;

    const TickRecord* prev = nullptr;
    for (const auto& r : trace.records) {
        if (prev && r.tick != prev->tick + 1)
            fail(fmt_tick(r) + ": tick index jumps from " + std::to_string(prev->tick));
        int expect_k = r.tick == 0 ? 0 : static_cast<int>((r.tick + tpi - 1) / tpi);
        if (r.k != expect_k)
            fail(fmt_tick(r) + ": k=" + std::to_string(r.k) + " but tick implies " +
                 std::to_string(expect_k));

        for (const auto& [id, p] : r.positions) {
            if (!w.bounds.contains_closed(p)) fail(fmt_tick(r) + ": agent " + std::to_string(id) + " out of bounds");
            for (size_t oi = 0; oi < w.physical.size(); ++oi)
                if (w.physical[oi].contains_closed(p))
                    fail(fmt_tick(r) + ": agent " + std::to_string(id) +
                         " inside physical obstacle " + std::to_string(oi));
            if (!point_in_free_space(p, w))
                fail(fmt_tick(r) + ": agent " + std::to_string(id) +
                     " inside planning keep-out");
            if (prev) {
                double d = euclid_dist(prev->positions.at(id), p);
                if (d > step_cap)
                    fail(fmt_tick(r) + ": agent " + std::to_string(id) + " moved " +
                         std::to_string(d) + " m in one tick");
            }
        }

        std::vector<std::pair<AgentId, Point2>> pts(r.positions.begin(), r.positions.end());
        for (size_t i = 0; i < pts.size(); ++i) {
            for (size_t j = i + 1; j < pts.size(); ++j) {
                double d = inf_norm_dist(pts[i].second, pts[j].second);
                if (d < sp.delta_min)
                    fail(fmt_tick(r) + ": separation violated: agents " +
                         std::to_string(pts[i].first) + "," + std::to_string(pts[j].first) +
                         " at " + std::to_string(d) + " m");
            }
        }

        SubgraphPartition expect = sp.mode == RunMode::Clairvoyant
                                       ? single_subgraph(r.positions)
                                       : compute_subgraphs(r.positions, w.physical);
        if (!(expect == r.partition))
            fail(fmt_tick(r) + ": recorded partition does not match recomputation");

        // strict bound across different subgraphs
        std::map<AgentId, int> comp;
        for (size_t s = 0; s < r.partition.subgraphs.size(); ++s)
            for (AgentId id : r.partition.subgraphs[s]) comp[id] = static_cast<int>(s);
        for (size_t i = 0; i < pts.size(); ++i) {
            for (size_t j = i + 1; j < pts.size(); ++j) {
                if (comp[pts[i].first] != comp[pts[j].first]) {
                    double d = inf_norm_dist(pts[i].second, pts[j].second);
                    if (!(d > sp.delta_min))
                        fail(fmt_tick(r) + ": cross-subgraph pair " +
                             std::to_string(pts[i].first) + "," + std::to_string(pts[j].first) +
                             " not strictly beyond delta_min (" + std::to_string(d) + ")");
                }
            }
        }

        bool changed = prev && !(prev->partition == r.partition);
        for (const auto& e : r.events)
            if (e.kind == "brake" && prev && !changed)
                fail(fmt_tick(r) + ": brake event without partition change");
        prev = &r;
    }
    return problems;
}

}  // namespace declos
