#pragma once

#include <string>
#include <vector>

#include "declos/scenario.hpp"
#include "declos/visibility.hpp"

namespace declos {

// Events attached to the tick at which they occurred.
//   brake  — agent emergency-stopped because its subgraph changed
//   reinit — a new subgraph (re)initialized coordination (members listed)
//   commit — agent replaced its committed plan this outer iteration (value = path cost)
//   goal   — agent entered its goal ball for the first time
struct TraceEvent {
    std::string kind;
    AgentId agent = -1;
    std::vector<AgentId> members;  // reinit only
    double value = 0.0;            // commit only (path cost)

    bool operator==(const TraceEvent& o) const {
        return kind == o.kind && agent == o.agent && members == o.members && value == o.value;
    }
};

struct TickRecord {
    long tick = 0;  // global tick index; t = tick * dt
    int k = 0;      // outer iteration this tick belongs to (tick 0 -> k 0)
    PositionMap positions;
    SubgraphPartition partition;
    std::vector<TraceEvent> events;
};

struct SimTrace {
    int schema_version = 1;
    ScenarioConfig config;  // full snapshot; replay needs nothing else
    std::vector<TickRecord> records;

    double time_of(const TickRecord& r) const { return r.tick * config.params.dt; }
};

// Line-delimited JSON: one header record (schema + config snapshot), then one
// record per tick. Doubles print in shortest round-trip form, so identical runs
// produce byte-identical files.
std::string serialize_trace(const SimTrace& trace);
void write_trace(const SimTrace& trace, const std::string& path);
SimTrace parse_trace_text(const std::string& text);
SimTrace read_trace(const std::string& path);

}  // namespace declos
