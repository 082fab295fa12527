#include "declos/visibility.hpp"

#include <algorithm>
#include <numeric>

namespace declos {

bool in_los(const Point2& a, const Point2& b, const std::vector<AARect>& physical) {
    return !segment_blocked(a, b, physical);
}

namespace {

// small union-find with path halving + union by size
struct DisjointSet {
    std::vector<int> parent, size;
    explicit DisjointSet(int n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

}  // namespace

SubgraphPartition compute_subgraphs(const PositionMap& positions,
                                    const std::vector<AARect>& physical) {
    std::vector<AgentId> ids;
    std::vector<Point2> pts;
    for (const auto& [id, p] : positions) {
        ids.push_back(id);
        pts.push_back(p);
    }
    int n = static_cast<int>(ids.size());
    DisjointSet dsu(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (in_los(pts[i], pts[j], physical)) dsu.unite(i, j);

    std::map<int, std::vector<AgentId>> groups;  // root -> members (ids already ascend)
    for (int i = 0; i < n; ++i) groups[dsu.find(i)].push_back(ids[i]);

    SubgraphPartition out;
    for (auto& [root, members] : groups) out.subgraphs.push_back(std::move(members));
    std::sort(out.subgraphs.begin(), out.subgraphs.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

SubgraphPartition single_subgraph(const PositionMap& positions) {
    SubgraphPartition out;
    if (positions.empty()) return out;
    out.subgraphs.emplace_back();
    for (const auto& [id, p] : positions) out.subgraphs.front().push_back(id);
    return out;
}

}  // namespace declos
