#include "declos/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace declos {

using json = nlohmann::ordered_json;

int SimParams::ticks_per_iteration() const {
    double ratio = outer_period / dt;
    double rounded = std::round(ratio);
    if (std::fabs(ratio - rounded) > 1e-9 || rounded < 1.0)
        throw ScenarioError("params.dt_seconds: outer period must be an integer number of ticks");
    return static_cast<int>(rounded);
}

Workspace ScenarioConfig::build_workspace() const {
    return make_workspace(bounds, obstacles, params.delta, params.inflation, params.cap_length);
}

PositionMap ScenarioConfig::starts() const {
    PositionMap out;
    for (const auto& a : agents) out[a.id] = a.start;
    return out;
}

std::map<AgentId, Point2> ScenarioConfig::goals() const {
    std::map<AgentId, Point2> out;
    for (const auto& a : agents) out[a.id] = a.goal;
    return out;
}

ScenarioConfig ScenarioConfig::with_first_agents(int n) const {
    if (n < 1 || n > static_cast<int>(agents.size()))
        throw ScenarioError("agents: cannot take " + std::to_string(n) + " of " +
                            std::to_string(agents.size()));
    ScenarioConfig out = *this;
    out.agents.assign(agents.begin(), agents.begin() + n);
    out.name = name + "_n" + std::to_string(n);
    return out;
}

namespace {

AARect parse_rect(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4)
        throw ScenarioError(path + ": expected [xmin, xmax, ymin, ymax]");
    for (const auto& v : j)
        if (!v.is_number()) throw ScenarioError(path + ": bounds must be numbers");
    try {
        return AARect(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                      j[3].get<double>());
    } catch (const std::invalid_argument&) {
        throw ScenarioError(path + ": degenerate rectangle (min must be < max)");
    }
}

Point2 parse_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ScenarioError(path + ": expected [x, y]");
    return Point2{j[0].get<double>(), j[1].get<double>()};
}

double require_number(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key) || !j[key].is_number())
        throw ScenarioError(path + "." + key + ": required number missing");
    return j[key].get<double>();
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }
    ScenarioConfig c;
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw ScenarioError("schema_version: required integer missing");
    c.schema_version = j["schema_version"].get<int>();
    if (c.schema_version != 1)
        throw ScenarioError("schema_version: unsupported version " +
                            std::to_string(c.schema_version));
    c.name = j.value("name", std::string("unnamed"));

    if (!j.contains("workspace")) throw ScenarioError("workspace: required object missing");
    const json& w = j["workspace"];
    if (!w.contains("bounds_meters")) throw ScenarioError("workspace.bounds_meters: missing");
    c.bounds = parse_rect(w["bounds_meters"], "workspace.bounds_meters");
    if (w.contains("obstacles_meters")) {
        int i = 0;
        for (const auto& r : w["obstacles_meters"])
            c.obstacles.push_back(
                parse_rect(r, "workspace.obstacles_meters[" + std::to_string(i++) + "]"));
    }

    if (!j.contains("agents") || !j["agents"].is_array() || j["agents"].empty())
        throw ScenarioError("agents: at least one agent required");
    int i = 0;
    for (const auto& a : j["agents"]) {
        std::string path = "agents[" + std::to_string(i++) + "]";
        AgentSpec spec;
        if (!a.contains("id") || !a["id"].is_number_integer())
            throw ScenarioError(path + ".id: required integer missing");
        spec.id = a["id"].get<int>();
        if (!a.contains("start_meters")) throw ScenarioError(path + ".start_meters: missing");
        if (!a.contains("goal_meters")) throw ScenarioError(path + ".goal_meters: missing");
        spec.start = parse_point(a["start_meters"], path + ".start_meters");
        spec.goal = parse_point(a["goal_meters"], path + ".goal_meters");
        c.agents.push_back(spec);
    }

    if (!j.contains("params")) throw ScenarioError("params: required object missing");
    const json& p = j["params"];
    SimParams& sp = c.params;
    sp.delta_min = require_number(p, "delta_min_meters", "params");
    sp.delta = require_number(p, "delta_meters", "params");
    sp.goal_tolerance = require_number(p, "goal_tolerance_meters", "params");
    sp.dt = require_number(p, "dt_seconds", "params");
    sp.outer_period = require_number(p, "outer_period_seconds", "params");
    sp.v_max = require_number(p, "v_max_meters_per_second", "params");
    if (!p.contains("max_outer_iterations") || !p["max_outer_iterations"].is_number_integer())
        throw ScenarioError("params.max_outer_iterations: required integer missing");
    sp.max_outer_iterations = p["max_outer_iterations"].get<int>();
    sp.epsilon_c = p.value("epsilon_c_meters", 0.001);
    sp.master_seed = p.value("master_seed", 1ULL);

    std::string mode = p.value("mode", std::string("declos"));
    if (mode == "declos")
        sp.mode = RunMode::DecLos;
    else if (mode == "clairvoyant")
        sp.mode = RunMode::Clairvoyant;
    else
        throw ScenarioError("params.mode: expected \"declos\" or \"clairvoyant\"");

    std::string token = p.value("token_mode", std::string("round_robin"));
    if (token == "round_robin")
        sp.token_mode = TokenMode::RoundRobin;
    else if (token == "bid_based")
        sp.token_mode = TokenMode::BidBased;
    else
        throw ScenarioError("params.token_mode: expected \"round_robin\" or \"bid_based\"");

    if (p.contains("inflation")) {
        const json& inf = p["inflation"];
        std::string im = inf.value("mode", std::string("full"));
        if (im == "full")
            sp.inflation = InflationMode::Full;
        else if (im == "adaptive")
            sp.inflation = InflationMode::Adaptive;
        else
            throw ScenarioError("params.inflation.mode: expected \"full\" or \"adaptive\"");
        sp.cap_length = inf.value("cap_length_meters", 1.0);
    }

    if (p.contains("planner")) {
        const json& pl = p["planner"];
        sp.planner.steer_step = pl.value("steer_step_meters", 1.0);
        sp.planner.goal_bias = pl.value("goal_bias", 0.1);
        sp.planner.rewire_radius = pl.value("rewire_radius_meters", 2.0);
        sp.planner.max_rrt_iterations = pl.value("max_rrt_iterations", 500);
    }

    validate_scenario(c);
    return c;
}

void validate_scenario(const ScenarioConfig& c) {
    const SimParams& sp = c.params;
    if (sp.delta_min <= 0.0) throw ScenarioError("params.delta_min_meters: must be positive");
    if (sp.v_max <= 0.0) throw ScenarioError("params.v_max_meters_per_second: must be positive");
    if (sp.dt <= 0.0) throw ScenarioError("params.dt_seconds: must be positive");
    if (sp.goal_tolerance <= 0.0)
        throw ScenarioError("params.goal_tolerance_meters: must be positive");
    if (sp.max_outer_iterations < 1)
        throw ScenarioError("params.max_outer_iterations: must be at least 1");
    sp.ticks_per_iteration();  // throws if non-integral

    // keep-out margin rule: delta must cover half the separation floor plus the
    // distance an agent travels in one tick, or line-of-sight merges could be
    // detected too late to hold delta_min
    double floor = sp.delta_min / 2.0 + sp.v_max * sp.dt;
    if (sp.delta < floor) {
        std::ostringstream os;
        os << "params.delta_meters: keep-out margin rule violated: delta " << sp.delta
           << " < delta_min/2 + v_max*dt = " << floor;
        throw ScenarioError(os.str());
    }
    if (sp.inflation == InflationMode::Adaptive && sp.cap_length <= 0.0)
        throw ScenarioError("params.inflation.cap_length_meters: must be positive");

    for (size_t i = 0; i < c.obstacles.size(); ++i)
        if (!c.bounds.contains_rect(c.obstacles[i]))
            throw ScenarioError("workspace.obstacles_meters[" + std::to_string(i) +
                                "]: outside workspace bounds");

    std::map<AgentId, size_t> seen;
    for (size_t i = 0; i < c.agents.size(); ++i) {
        const AgentSpec& a = c.agents[i];
        auto [it, fresh] = seen.emplace(a.id, i);
        if (!fresh)
            throw ScenarioError("agents[" + std::to_string(i) + "].id: duplicate id " +
                                std::to_string(a.id));
    }

    Workspace w = c.build_workspace();
    for (size_t i = 0; i < c.agents.size(); ++i) {
        const AgentSpec& a = c.agents[i];
        std::string path = "agents[" + std::to_string(i) + "]";
        for (size_t r = 0; r < w.planning.size(); ++r) {
            if (w.planning[r].contains_closed(a.start))
                throw ScenarioError(path + ".start_meters: safe-initialization violated: agent " +
                                    std::to_string(a.id) + " start inside planning obstacle " +
                                    std::to_string(r));
            if (w.planning[r].contains_closed(a.goal))
                throw ScenarioError(path + ".goal_meters: safe-initialization violated: agent " +
                                    std::to_string(a.id) + " goal inside planning obstacle " +
                                    std::to_string(r));
        }
        if (!w.bounds.contains_closed(a.start))
            throw ScenarioError(path + ".start_meters: outside workspace bounds");
        if (!w.bounds.contains_closed(a.goal))
            throw ScenarioError(path + ".goal_meters: outside workspace bounds");
    }
    for (size_t i = 0; i < c.agents.size(); ++i) {
        for (size_t k = i + 1; k < c.agents.size(); ++k) {
            double d = inf_norm_dist(c.agents[i].start, c.agents[k].start);
            if (d < sp.delta_min) {
                std::ostringstream os;
                os << "agents: start separation violated: agents " << c.agents[i].id << ","
                   << c.agents[k].id << " are " << d << " m apart (< delta_min " << sp.delta_min
                   << ")";
                throw ScenarioError(os.str());
            }
        }
    }
}

namespace {

json rect_json(const AARect& r) { return json::array({r.xmin, r.xmax, r.ymin, r.ymax}); }
json point_json(const Point2& p) { return json::array({p.x, p.y}); }

}  // namespace

std::string serialize_scenario(const ScenarioConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    json w;
    w["bounds_meters"] = rect_json(c.bounds);
    json obs = json::array();
    for (const auto& r : c.obstacles) obs.push_back(rect_json(r));
    w["obstacles_meters"] = obs;
    j["workspace"] = w;
    json agents = json::array();
    for (const auto& a : c.agents) {
        json aj;
        aj["id"] = a.id;
        aj["start_meters"] = point_json(a.start);
        aj["goal_meters"] = point_json(a.goal);
        agents.push_back(aj);
    }
    j["agents"] = agents;
    const SimParams& sp = c.params;
    json p;
    p["delta_min_meters"] = sp.delta_min;
    p["delta_meters"] = sp.delta;
    p["goal_tolerance_meters"] = sp.goal_tolerance;
    p["dt_seconds"] = sp.dt;
    p["outer_period_seconds"] = sp.outer_period;
    p["v_max_meters_per_second"] = sp.v_max;
    p["max_outer_iterations"] = sp.max_outer_iterations;
    p["epsilon_c_meters"] = sp.epsilon_c;
    p["master_seed"] = sp.master_seed;
    p["mode"] = sp.mode == RunMode::DecLos ? "declos" : "clairvoyant";
    p["token_mode"] = sp.token_mode == TokenMode::RoundRobin ? "round_robin" : "bid_based";
    json inf;
    inf["mode"] = sp.inflation == InflationMode::Full ? "full" : "adaptive";
    inf["cap_length_meters"] = sp.cap_length;
    p["inflation"] = inf;
    json pl;
    pl["steer_step_meters"] = sp.planner.steer_step;
    pl["goal_bias"] = sp.planner.goal_bias;
    pl["rewire_radius_meters"] = sp.planner.rewire_radius;
    pl["max_rrt_iterations"] = sp.planner.max_rrt_iterations;
    p["planner"] = pl;
    j["params"] = p;
    return j.dump(2);
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("scenario: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario_text(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

}  // namespace declos
