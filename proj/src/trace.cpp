#include "declos/trace.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace declos {

using json = nlohmann::ordered_json;

namespace {

json partition_json(const SubgraphPartition& p) {
    json out = json::array();
    for (const auto& s : p.subgraphs) out.push_back(s);
    return out;
}

json record_json(const TickRecord& r, double dt) {
    json j;
    j["type"] = "tick";
    j["tick"] = r.tick;
    j["t_seconds"] = r.tick * dt;
    j["k"] = r.k;
    json pos;
    for (const auto& [id, p] : r.positions) pos[std::to_string(id)] = json::array({p.x, p.y});
    j["positions_meters"] = pos;
    j["partition"] = partition_json(r.partition);
    if (!r.events.empty()) {
        json evs = json::array();
        for (const auto& e : r.events) {
            json ej;
            ej["kind"] = e.kind;
            if (e.agent >= 0) ej["agent"] = e.agent;
            if (!e.members.empty()) ej["members"] = e.members;
            if (e.kind == "commit") ej["cost_meters"] = e.value;
            evs.push_back(ej);
        }
        j["events"] = evs;
    }
    return j;
}

}  // namespace

std::string serialize_trace(const SimTrace& trace) {
    std::ostringstream out;
    json header;
    header["type"] = "header";
    header["schema"] = "declos-trace";
    header["schema_version"] = trace.schema_version;
    header["config"] = json::parse(serialize_scenario(trace.config));
    out << header.dump() << "\n";
    double dt = trace.config.params.dt;
    for (const auto& r : trace.records) out << record_json(r, dt).dump() << "\n";
    return out.str();
}

void write_trace(const SimTrace& trace, const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: no platform newline surprises
    if (!f) throw std::runtime_error("trace: cannot open for write: " + path);
    f << serialize_trace(trace);
}

SimTrace parse_trace_text(const std::string& text) {
    SimTrace trace;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": bad JSON: " +
                                     e.what());
        }
        std::string type = j.value("type", std::string());
        if (type == "header") {
            trace.schema_version = j.value("schema_version", 1);
            if (j.value("schema", std::string()) != "declos-trace")
                throw std::runtime_error("trace: unrecognized schema tag");
            trace.config = parse_scenario_text(j.at("config").dump());
            have_header = true;
        } else if (type == "tick") {
            if (!have_header) throw std::runtime_error("trace: tick record before header");
            TickRecord r;
            r.tick = j.at("tick").get<long>();
            r.k = j.at("k").get<int>();
            for (const auto& [key, val] : j.at("positions_meters").items())
                r.positions[std::stoi(key)] = Point2{val[0].get<double>(), val[1].get<double>()};
            for (const auto& s : j.at("partition"))
                r.partition.subgraphs.push_back(s.get<std::vector<AgentId>>());
            r.partition.epoch = r.tick;
            if (j.contains("events")) {
                for (const auto& ej : j["events"]) {
                    TraceEvent e;
                    e.kind = ej.at("kind").get<std::string>();
                    e.agent = ej.value("agent", -1);
                    if (ej.contains("members"))
                        e.members = ej["members"].get<std::vector<AgentId>>();
                    e.value = ej.value("cost_meters", 0.0);
                    r.events.push_back(e);
                }
            }
            trace.records.push_back(std::move(r));
        } else {
            throw std::runtime_error("trace line " + std::to_string(lineno) +
                                     ": unknown record type '" + type + "'");
        }
    }
    if (!have_header) throw std::runtime_error("trace: missing header record");
    return trace;
}

SimTrace read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("trace: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace_text(buf.str());
}

}  // namespace declos
