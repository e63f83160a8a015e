#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nacnet {

/// One spatial cluster of same-label tiles: the graph node. Centroids are
/// in full-resolution pixel coordinates (x along columns, y along rows).
struct TmeNode {
    int id = 0;
    int label = 0;       // histology code 1..12, never background
    int count = 0;       // member tiles in the cluster
    double cx = 0.0;
    double cy = 0.0;

    bool operator==(const TmeNode&) const = default;
};

/// Undirected spatial graph over TME nodes. Edges are stored as sorted
/// (i, j) pairs with i < j; adjacency is derivable and always symmetric
/// with a zero diagonal.
struct TmeGraph {
    std::vector<TmeNode> nodes;
    std::vector<std::pair<int, int>> edges;

    int numNodes() const { return static_cast<int>(nodes.size()); }
    int numEdges() const { return static_cast<int>(edges.size()); }

    /// Neighbor lists, id-indexed.
    std::vector<std::vector<int>> adjacencyList() const;

    /// Dense n*n 0/1 matrix, row-major.
    std::vector<double> adjacencyMatrix() const;

    bool operator==(const TmeGraph&) const = default;
};

/// Parses the .tmeg text form:
///   TMEG 1 <num_nodes> <num_edges>
///   NODE <id> <label> <count> <cx> <cy>     (ids 0..n-1, each once)
///   EDGE <i> <j>                            (i < j, no duplicates)
/// '#' comment lines are skipped. Dangling endpoints, duplicate ids and
/// malformed records are reported with line numbers.
TmeGraph parseGraph(const std::string& text);

/// Canonical form: nodes by id, edges sorted lexicographically, shortest
/// round-trip number formatting. parseGraph(writeGraph(g)) == g.
std::string writeGraph(const TmeGraph& g);

} // namespace nacnet
