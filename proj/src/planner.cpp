#include "declos/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace declos {

const Point2& WaypointPlan::waypoint_for_iteration(int k) const {
    if (waypoints.empty()) throw std::logic_error("waypoint_for_iteration: empty plan");
    long idx = static_cast<long>(k) - start_iteration;
    idx = std::clamp<long>(idx, 0, static_cast<long>(waypoints.size()) - 1);
    return waypoints[static_cast<size_t>(idx)];
}

WaypointPlan stopped_plan(AgentId agent, const Point2& pos, int iteration) {
    WaypointPlan p;
    p.agent = agent;
    p.start_iteration = iteration;
    p.waypoints = {pos};
    return p;
}

double path_cost(const WaypointPlan& plan) {
    double total = 0.0;
    for (size_t i = 1; i < plan.waypoints.size(); ++i)
        total += euclid_dist(plan.waypoints[i - 1], plan.waypoints[i]);
    return total;
}

Point2 plan_position_at_tick(const WaypointPlan& plan, long tick, const SimParams& sp) {
    int tpi = sp.ticks_per_iteration();
    long anchor_tick = static_cast<long>(plan.start_iteration) * tpi;
    if (tick <= anchor_tick) return plan.waypoints.front();
    long end_tick = static_cast<long>(plan.end_iteration()) * tpi;
    // Replay the executive's tick-by-tick stepping from the anchor so the
    // result is bit-identical to where a tracking agent actually sits. Exact
    // landing on intermediate waypoints is not guaranteed (rounding can leave
    // the walker an ulp shy at an iteration boundary), so no shortcut restart
    // from the lattice is taken. Past the plan's end every step targets the
    // final waypoint; once it is hit exactly the position is a fixed point.
    Point2 pos = plan.waypoints.front();
    for (long n = anchor_tick + 1; n <= tick; ++n) {
        int kk = static_cast<int>((n + tpi - 1) / tpi);
        pos = step_agent(pos, plan.waypoint_for_iteration(kk), sp.v_max, sp.dt);
        if (n >= end_tick && pos == plan.waypoints.back()) break;
    }
    return pos;
}

namespace {

// chord clear of the planning keep-out (open-interior exact test)
bool chord_clear(const Point2& a, const Point2& b, const Workspace& w) {
    return !segment_blocked(a, b, w.planning);
}

std::vector<Point2> tick_positions(const WaypointPlan& plan, long from_tick, long to_tick,
                                   const SimParams& sp) {
    int tpi = sp.ticks_per_iteration();
    std::vector<Point2> out;
    out.reserve(static_cast<size_t>(to_tick - from_tick + 1));
    Point2 pos = plan_position_at_tick(plan, from_tick, sp);
    out.push_back(pos);
    for (long n = from_tick + 1; n <= to_tick; ++n) {
        int kk = static_cast<int>((n + tpi - 1) / tpi);
        pos = step_agent(pos, plan.waypoint_for_iteration(kk), sp.v_max, sp.dt);
        out.push_back(pos);
    }
    return out;
}

}  // namespace

std::optional<PlanViolation> validate_plan(const WaypointPlan& plan, const Workspace& w,
                                           const std::vector<WaypointPlan>& constraints,
                                           const SimParams& sp) {
    using Kind = PlanViolation::Kind;
    if (plan.waypoints.empty())
        return PlanViolation{Kind::Empty, plan.start_iteration, "plan has no waypoints"};

    double spacing_cap = sp.waypoint_spacing() * (1.0 + 1e-9);
    for (size_t i = 0; i < plan.waypoints.size(); ++i) {
        const Point2& p = plan.waypoints[i];
        int it = plan.start_iteration + static_cast<int>(i);
        if (!w.bounds.contains_closed(p)) {
            std::ostringstream os;
            os << "waypoint " << i << " outside bounds";
            return PlanViolation{Kind::OutOfBounds, it, os.str()};
        }
        if (!point_in_free_space(p, w)) {
            std::ostringstream os;
            os << "waypoint " << i << " inside planning keep-out";
            return PlanViolation{Kind::ObstacleContact, it, os.str()};
        }
        if (i > 0) {
            double d = euclid_dist(plan.waypoints[i - 1], p);
            if (d > spacing_cap) {
                std::ostringstream os;
                os << "waypoints " << i - 1 << "-" << i << " are " << d
                   << " m apart (cap " << sp.waypoint_spacing() << ")";
                return PlanViolation{Kind::SegmentTooLong, it, os.str()};
            }
        }
    }

    int tpi = sp.ticks_per_iteration();
    long anchor_tick = static_cast<long>(plan.start_iteration) * tpi;
    long self_end = static_cast<long>(plan.end_iteration()) * tpi;

    // dt-resolution obstacle check along the tracked motion
    {
        Point2 pos = plan.waypoints.front();
        for (long n = anchor_tick + 1; n <= self_end; ++n) {
            int kk = static_cast<int>((n + tpi - 1) / tpi);
            pos = step_agent(pos, plan.waypoint_for_iteration(kk), sp.v_max, sp.dt);
            if (!point_in_free_space(pos, w)) {
                std::ostringstream os;
                os << "dt sample at tick " << n << " inside planning keep-out";
                return PlanViolation{Kind::ObstacleContact, kk, os.str()};
            }
        }
    }

    if (!constraints.empty()) {
        long horizon = self_end;
        for (const auto& c : constraints)
            horizon = std::max(horizon, static_cast<long>(c.end_iteration()) * tpi);
        horizon = std::max(horizon, anchor_tick);
        std::vector<Point2> mine = tick_positions(plan, anchor_tick, horizon, sp);
        for (const auto& c : constraints) {
            std::vector<Point2> theirs = tick_positions(c, anchor_tick, horizon, sp);
            for (size_t i = 0; i < mine.size(); ++i) {
                double d = inf_norm_dist(mine[i], theirs[i]);
                if (d < sp.delta_min) {
                    long n = anchor_tick + static_cast<long>(i);
                    int kk = n == 0 ? 0 : static_cast<int>((n + tpi - 1) / tpi);
                    std::ostringstream os;
                    os << "separation from agent " << c.agent << " at tick " << n << ": " << d
                       << " m (< " << sp.delta_min << ")";
                    return PlanViolation{Kind::Separation, kk, os.str()};
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

struct Tree {
    std::vector<Point2> pos;
    std::vector<int> parent;
    std::vector<double> cost;
    std::vector<std::vector<int>> children;

    int add(const Point2& p, int par, double c) {
        pos.push_back(p);
        parent.push_back(par);
        cost.push_back(c);
        children.emplace_back();
        int id = static_cast<int>(pos.size()) - 1;
        if (par >= 0) children[par].push_back(id);
        return id;
    }

    void reparent(int node, int new_parent, double new_cost) {
        int old = parent[node];
        if (old >= 0) {
            auto& sib = children[old];
            sib.erase(std::find(sib.begin(), sib.end(), node));
        }
        parent[node] = new_parent;
        children[new_parent].push_back(node);
        double shift = new_cost - cost[node];
        // push the cost change down the subtree
        std::vector<int> stack{node};
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            cost[n] += shift;
            for (int ch : children[n]) stack.push_back(ch);
        }
    }
};

double sq(double v) { return v * v; }

double sq_dist(const Point2& a, const Point2& b) { return sq(a.x - b.x) + sq(a.y - b.y); }

// walk the tree path root -> node and resample it into waypoints spaced
// exactly v_max*outer_period along the polyline (final partial step shorter)
WaypointPlan extract_plan(AgentId agent, const Tree& tree, int node, int anchor_iteration,
                          const SimParams& sp) {
    std::vector<Point2> poly;
    for (int n = node; n >= 0; n = tree.parent[n]) poly.push_back(tree.pos[n]);
    std::reverse(poly.begin(), poly.end());

    WaypointPlan plan;
    plan.agent = agent;
    plan.start_iteration = anchor_iteration;
    plan.waypoints.push_back(poly.front());
    // strictly below v_max*outer_period so each waypoint is reached exactly by
    // its iteration boundary despite rounding in the chord lengths
    double step = sp.waypoint_spacing() * (1.0 - 1e-12);
    double budget = step;
    for (size_t e = 1; e < poly.size(); ++e) {
        Point2 a = poly[e - 1];
        const Point2& b = poly[e];
        double len = euclid_dist(a, b);
        while (len > 0.0 && budget <= len) {
            double lam = budget / len;
            Point2 cut{a.x + (b.x - a.x) * lam, a.y + (b.y - a.y) * lam};
            plan.waypoints.push_back(cut);
            a = cut;
            len = euclid_dist(a, b);
            budget = step;
        }
        budget -= len;
    }
    if (!(plan.waypoints.back() == poly.back())) plan.waypoints.push_back(poly.back());
    return plan;
}

}  // namespace

std::optional<WaypointPlan> rrt_plan(AgentId agent, const Point2& start, const Point2& goal,
                                     const Workspace& w,
                                     const std::vector<WaypointPlan>& constraints,
                                     int anchor_iteration, const SimParams& sp, RngStream& rng) {
    if (!point_in_free_space(start, w))
        throw InvalidStartError("rrt_plan: start not in inflated free space");
    int tpi = sp.ticks_per_iteration();
    long anchor_tick = static_cast<long>(anchor_iteration) * tpi;
    for (const auto& c : constraints) {
        double d = inf_norm_dist(start, plan_position_at_tick(c, anchor_tick, sp));
        if (d < sp.delta_min) {
            std::ostringstream os;
            os << "rrt_plan: start within delta_min of agent " << c.agent << " (" << d << " m)";
            throw InvalidStartError(os.str());
        }
    }

    // already in the goal ball: park, provided parking stays separated
    if (at_goal(start, goal, sp.goal_tolerance)) {
        WaypointPlan parked = stopped_plan(agent, start, anchor_iteration);
        if (!validate_plan(parked, w, constraints, sp)) return parked;
    }

    const PlannerParams& pp = sp.planner;
    Tree tree;
    tree.add(start, -1, 0.0);
    std::vector<int> goal_nodes;
    double ball = sp.goal_tolerance / 2.0;
    double r2 = sq(pp.rewire_radius);

    // Constraint plans are time-parameterized: precompute each one's tracked
    // position per tick so tree growth can reject chords that would pass
    // within delta_min of a committed neighbour at the matching time. Growing
    // the tree blind and validating only at extraction leaves every candidate
    // path threaded straight through the occupied region; growth-time checks
    // keep the tree inside the feasible corridor so partial fallbacks and
    // goal paths alike can bend around traffic.
    std::vector<std::vector<Point2>> con_pos;
    con_pos.reserve(constraints.size());
    for (const auto& c : constraints) {
        long end = std::max(static_cast<long>(c.end_iteration()) * tpi, anchor_tick);
        std::vector<Point2> table;
        table.reserve(static_cast<size_t>(end - anchor_tick + 1));
        for (long n = anchor_tick; n <= end; ++n)
            table.push_back(plan_position_at_tick(c, n, sp));
        con_pos.push_back(std::move(table));
    }
    double sl = sp.step_length();
    // a tracking agent covers step_length per tick, so arc length along the
    // tree path maps directly onto tick offsets from the anchor
    auto chord_ok = [&](double base_cost, const Point2& a, const Point2& b) {
        if (con_pos.empty()) return true;
        double len = euclid_dist(a, b);
        long n0 = static_cast<long>(std::floor(base_cost / sl)) + 1;
        long n1 = static_cast<long>(std::ceil((base_cost + len) / sl));
        for (long n = n0; n <= n1; ++n) {
            double s = std::min(n * sl - base_cost, len);
            double lam = len > 0.0 ? s / len : 0.0;
            Point2 p{a.x + (b.x - a.x) * lam, a.y + (b.y - a.y) * lam};
            for (const auto& table : con_pos) {
                size_t idx = std::min(static_cast<size_t>(n), table.size() - 1);
                if (inf_norm_dist(p, table[idx]) < sp.delta_min) return false;
            }
        }
        return true;
    };

    auto try_extract = [&](int node) -> std::optional<WaypointPlan> {
        WaypointPlan cand = extract_plan(agent, tree, node, anchor_iteration, sp);
        if (!validate_plan(cand, w, constraints, sp)) return cand;
        return std::nullopt;
    };

    for (int it = 0; it < pp.max_rrt_iterations; ++it) {
        // sample (goal-biased, rejection inside obstacles)
        Point2 sample;
        bool ok = false;
        if (rng.next01() < pp.goal_bias) {
            sample = goal;
            ok = true;
        } else {
            for (int tries = 0; tries < 64 && !ok; ++tries) {
                sample = Point2{rng.uniform(w.bounds.xmin, w.bounds.xmax),
                                rng.uniform(w.bounds.ymin, w.bounds.ymax)};
                ok = point_in_free_space(sample, w);
            }
        }
        if (!ok) continue;

        // nearest node, then steer at most steer_step toward the sample
        int nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (size_t n = 0; n < tree.pos.size(); ++n) {
            double d2 = sq_dist(tree.pos[n], sample);
            if (d2 < best) {
                best = d2;
                nearest = static_cast<int>(n);
            }
        }
        double dist = std::sqrt(best);
        if (dist == 0.0) continue;
        Point2 new_pos = sample;
        if (dist > pp.steer_step) {
            double lam = pp.steer_step / dist;
            new_pos = Point2{tree.pos[nearest].x + (sample.x - tree.pos[nearest].x) * lam,
                             tree.pos[nearest].y + (sample.y - tree.pos[nearest].y) * lam};
        }
        if (!point_in_free_space(new_pos, w)) continue;

        // collect neighbors; choose the parent minimizing arrival cost
        std::vector<int> near;
        for (size_t n = 0; n < tree.pos.size(); ++n)
            if (sq_dist(tree.pos[n], new_pos) <= r2) near.push_back(static_cast<int>(n));
        int parent = -1;
        double parent_cost = std::numeric_limits<double>::infinity();
        if (near.empty()) near.push_back(nearest);
        for (int n : near) {
            double c = tree.cost[n] + euclid_dist(tree.pos[n], new_pos);
            if (c < parent_cost && chord_clear(tree.pos[n], new_pos, w) &&
                chord_ok(tree.cost[n], tree.pos[n], new_pos)) {
                parent_cost = c;
                parent = n;
            }
        }
        if (parent < 0) continue;
        int node = tree.add(new_pos, parent, parent_cost);

        // rewire neighbors through the new node where it shortens them; with
        // timed constraints rewiring is unsound (it shifts every descendant's
        // arrival ticks off the schedule its chords were checked against), so
        // it only runs in an empty-constraint world
        if (con_pos.empty()) {
            for (int n : near) {
                if (n == parent) continue;
                double through = parent_cost + euclid_dist(new_pos, tree.pos[n]);
                if (through + 1e-12 < tree.cost[n] && chord_clear(new_pos, tree.pos[n], w))
                    tree.reparent(n, node, through);
            }
        }

        if (inf_norm_dist(new_pos, goal) <= ball) {
            if (auto plan = try_extract(node)) return plan;
            goal_nodes.push_back(node);
        }
    }

    // budget exhausted: rewiring may have improved earlier goal nodes, retry
    // them cheapest-first
    std::sort(goal_nodes.begin(), goal_nodes.end(),
              [&](int a, int b) { return tree.cost[a] != tree.cost[b] ? tree.cost[a] < tree.cost[b]
                                                                      : a < b; });
    for (int node : goal_nodes)
        if (auto plan = try_extract(node)) return plan;

    // Anytime fallback: no goal-reaching path validated this round, so commit
    // the best partial path that makes real progress instead of parking.
    // Head-on meetings otherwise deadlock: a stopped opponent's keep-out can
    // wall off every goal-reaching route indefinitely. Candidates must end at
    // least kMinProgress closer to the goal than the start, and are ranked by
    // remaining distance minus a keep-right bonus (offset to the right of the
    // start->goal axis) so two facing agents deterministically pull to
    // opposite sides and swap instead of creeping nose-to-nose into a
    // stalemate.
    const double kMinProgress = 0.1;
    const double kLaneWeight = 0.5;
    double span = euclid_dist(start, goal);
    Point2 rightward{0.0, 0.0};
    if (span > 0.0)
        rightward = Point2{(goal.y - start.y) / span, -(goal.x - start.x) / span};
    std::vector<std::pair<double, int>> partials;
    for (size_t n = 1; n < tree.pos.size(); ++n) {
        double remaining = euclid_dist(tree.pos[n], goal);
        if (remaining > span - kMinProgress) continue;
        double lane = (tree.pos[n].x - start.x) * rightward.x +
                      (tree.pos[n].y - start.y) * rightward.y;
        partials.emplace_back(remaining - kLaneWeight * lane, static_cast<int>(n));
    }
    std::sort(partials.begin(), partials.end());
    // best-scored candidates can still fail (parking exposure past the plan's
    // end is only checked here), so walk the ranking until one validates
    for (const auto& pr : partials)
        if (auto plan = try_extract(pr.second)) return plan;
    return std::nullopt;
}

}  // namespace declos
