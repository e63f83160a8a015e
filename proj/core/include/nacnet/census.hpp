#pragma once

#include "nacnet/tme_graph.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace nacnet {

/// Edge and triangle counts of a TME graph keyed by histology-label
/// combination. Distinct-label triangles are keyed individually; triangles
/// with a repeated label share one bucket so the totals stay conserved.
struct CensusTable {
    /// Key: label pair (a, b) with a <= b. Same-label pairs included.
    std::map<std::pair<int, int>, std::int64_t> edge_counts;
    /// Key: strictly increasing label triple (a, b, c), a < b < c.
    std::map<std::array<int, 3>, std::int64_t> triangle_counts;
    /// Triangles whose three node labels are not pairwise distinct.
    std::int64_t repeated_label_triangles = 0;

    std::int64_t totalEdges() const;
    std::int64_t totalTriangles() const;
    bool operator==(const CensusTable&) const = default;
};

/// Counts every edge and every 3-clique of g exactly once.
CensusTable computeCensus(const TmeGraph& g);

/// Stable text keys used in census/compare CSV output, e.g.
/// "immune_cells-tumor" or "mvd-stroma-tumor".
std::string edgeKeyName(const std::pair<int, int>& key);
std::string triangleKeyName(const std::array<int, 3>& key);

/// CSV rows `kind,key,count` for every nonzero bucket plus edge/triangle
/// totals, in deterministic key order.
std::string censusCsv(const CensusTable& t);

} // namespace nacnet
