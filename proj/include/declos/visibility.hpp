#pragma once

#include <map>
#include <vector>

#include "declos/geometry.hpp"

namespace declos {

using AgentId = int;
using PositionMap = std::map<AgentId, Point2>;

// Two agents are connected iff the open segment between them misses every
// physical obstacle interior. Grazing an obstacle edge still counts as visible.
bool in_los(const Point2& a, const Point2& b, const std::vector<AARect>& physical);

// Canonical partition of the agents into line-of-sight connected components:
// each component sorted ascending, components ordered by smallest member.
// `epoch` records the tick at which the partition was computed; equality
// compares the component structure only.
struct SubgraphPartition {
    std::vector<std::vector<AgentId>> subgraphs;
    long epoch = 0;

    bool operator==(const SubgraphPartition& o) const { return subgraphs == o.subgraphs; }
    bool operator!=(const SubgraphPartition& o) const { return !(*this == o); }
};

SubgraphPartition compute_subgraphs(const PositionMap& positions,
                                    const std::vector<AARect>& physical);

// The degenerate partition used by the clairvoyant baseline: one subgraph
// holding every agent, regardless of geometry.
SubgraphPartition single_subgraph(const PositionMap& positions);

}  // namespace declos
