#include "nacnet/census.hpp"

#include "nacnet/histology_map.hpp"

#include <algorithm>

namespace nacnet {

std::int64_t CensusTable::totalEdges() const {
    std::int64_t total = 0;
    for (const auto& [key, count] : edge_counts) total += count;
    return total;
}

std::int64_t CensusTable::totalTriangles() const {
    std::int64_t total = repeated_label_triangles;
    for (const auto& [key, count] : triangle_counts) total += count;
    return total;
}

CensusTable computeCensus(const TmeGraph& g) {
    CensusTable table;
    for (const auto& [i, j] : g.edges) {
        int a = g.nodes[i].label;
        int b = g.nodes[j].label;
        if (a > b) std::swap(a, b);
        ++table.edge_counts[{a, b}];
    }

    // Each triangle {u, v, w} with u < v < w is found exactly once from its
    // lowest edge (u, v) by intersecting the (sorted) neighbor lists and
    // keeping only third vertices above v.
    const std::vector<std::vector<int>> adj = g.adjacencyList();
    for (const auto& [u, v] : g.edges) {
        const std::vector<int>& nu = adj[u];
        const std::vector<int>& nv = adj[v];
        std::size_t a = 0;
        std::size_t b = 0;
        while (a < nu.size() && b < nv.size()) {
            if (nu[a] < nv[b]) {
                ++a;
            } else if (nu[a] > nv[b]) {
                ++b;
            } else {
                const int w = nu[a];
                if (w > v) {
                    std::array<int, 3> labels = {g.nodes[u].label, g.nodes[v].label,
                                                 g.nodes[w].label};
                    std::sort(labels.begin(), labels.end());
                    if (labels[0] != labels[1] && labels[1] != labels[2]) {
                        ++table.triangle_counts[labels];
                    } else {
                        ++table.repeated_label_triangles;
                    }
                }
                ++a;
                ++b;
            }
        }
    }
    return table;
}

std::string edgeKeyName(const std::pair<int, int>& key) {
    return labelSlug(key.first) + "-" + labelSlug(key.second);
}

std::string triangleKeyName(const std::array<int, 3>& key) {
    return labelSlug(key[0]) + "-" + labelSlug(key[1]) + "-" + labelSlug(key[2]);
}

std::string censusCsv(const CensusTable& t) {
    std::string out = "kind,key,count\n";
    for (const auto& [key, count] : t.edge_counts) {
        if (count == 0) continue;
        out += "edge," + edgeKeyName(key) + ',' + std::to_string(count) + '\n';
    }
    for (const auto& [key, count] : t.triangle_counts) {
        if (count == 0) continue;
        out += "triangle," + triangleKeyName(key) + ',' + std::to_string(count) + '\n';
    }
    if (t.repeated_label_triangles > 0) {
        out += "triangle,repeated_label," + std::to_string(t.repeated_label_triangles) + '\n';
    }
    out += "total,edges," + std::to_string(t.totalEdges()) + '\n';
    out += "total,triangles," + std::to_string(t.totalTriangles()) + '\n';
    return out;
}

} // namespace nacnet
