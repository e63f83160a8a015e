#pragma once

#include "nacnet/tme_graph.hpp"

#include <vector>

namespace nacnet {

/// Per-node degree: row sums of the adjacency matrix.
std::vector<int> degreeCentrality(const TmeGraph& g);

/// Unnormalized betweenness over unordered pairs {s,t}: for each node v,
/// the summed fraction of s-t shortest paths passing through v. Pairs in
/// different components contribute zero. Brandes' accumulation.
std::vector<double> betweennessCentrality(const TmeGraph& g, int threads = 1);

/// Closeness restricted to the reachable set: (|R(v)|-1) / sum of
/// distances, 0 for isolated nodes.
std::vector<double> closenessCentrality(const TmeGraph& g, int threads = 1);

struct PageRankResult {
    std::vector<double> scores;
    int iterations = 0;
    bool converged = true;
};

/// Undirected PageRank by power iteration. Isolated nodes are dangling;
/// their rank mass is redistributed uniformly, so scores always sum to 1.
/// Stops when the L1 change drops below tol; a non-converged run still
/// returns the last iterate with converged=false.
PageRankResult pageRank(const TmeGraph& g, double damping = 0.85, double tol = 1e-10,
                        int max_iter = 1000);

} // namespace nacnet
