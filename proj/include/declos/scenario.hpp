#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "declos/geometry.hpp"
#include "declos/visibility.hpp"

namespace declos {

struct PlannerParams {
    double steer_step = 1.0;      // meters per tree extension
    double goal_bias = 0.1;       // probability of sampling the goal
    double rewire_radius = 2.0;   // meters, neighbor radius for parent choice / rewiring
    int max_rrt_iterations = 500; // budget per planning call ("up to": exits on first valid plan)
};

enum class RunMode { DecLos, Clairvoyant };
enum class TokenMode { RoundRobin, BidBased };

struct SimParams {
    double delta_min = 0.6;       // enforced minimum inter-agent inf-norm separation, meters
    double delta = 0.401;         // keep-out distance per obstacle side, meters
    double goal_tolerance = 1.0;  // goal ball side; arrival means inf-dist <= goal_tolerance/2
    double dt = 0.1;              // inner tick period, seconds
    double outer_period = 1.0;    // outer iteration period, seconds
    int max_outer_iterations = 200;
    double v_max = 1.0;           // meters/second
    double epsilon_c = 0.001;     // slack folded into delta when deriving it from delta_min
    RunMode mode = RunMode::DecLos;
    TokenMode token_mode = TokenMode::RoundRobin;
    InflationMode inflation = InflationMode::Full;
    double cap_length = 1.0;      // adaptive corner cap reach, meters
    uint64_t master_seed = 1;
    PlannerParams planner;

    int ticks_per_iteration() const;        // outer_period / dt, validated integral
    double step_length() const { return v_max * dt; }
    double waypoint_spacing() const { return v_max * outer_period; }
};

struct AgentSpec {
    AgentId id = 0;
    Point2 start;
    Point2 goal;
};

// Raised on malformed or unsafe scenario files; the message carries the field
// path and the violated rule.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    int schema_version = 1;
    std::string name;
    AARect bounds{0.0, 20.0, 0.0, 20.0};
    std::vector<AARect> obstacles;
    std::vector<AgentSpec> agents;
    SimParams params;

    Workspace build_workspace() const;
    PositionMap starts() const;
    std::map<AgentId, Point2> goals() const;
    // keep only the first n agents (suite N-variants); throws if n > agents
    ScenarioConfig with_first_agents(int n) const;
};

// Parse + strict validation (throws ScenarioError naming field and rule):
// schema/shape errors, degenerate rectangles, obstacles outside bounds,
// duplicate agent ids, dt not dividing outer_period, delta below
// delta_min/2 + v_max*dt, starts/goals outside the inflated free space
// (safe-initialization), pairwise start separation below delta_min.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text);
std::string serialize_scenario(const ScenarioConfig& config);
void validate_scenario(const ScenarioConfig& config);

}  // namespace declos
