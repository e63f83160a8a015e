#pragma once

#include "nacnet/histology_map.hpp"
#include "nacnet/tme_graph.hpp"

#include <set>
#include <vector>

namespace nacnet {

/// Clustering and edge thresholds for graph construction. The six
/// clinically critical classes cluster at the lower threshold so they are
/// prominently represented; the rest need larger blobs to form nodes.
struct BuilderConfig {
    int window = 10;           // tiles per (non-overlapping) window side
    int eta_high = 5;          // min cluster size for high-relevance labels
    int eta_low = 10;          // min cluster size for the others
    std::set<int> high_relevance_set = {kLabelTumor,  kLabelNecrosis, kLabelImmuneCells,
                                        kLabelMvd,    kLabelStroma,   kLabelPgcc};
    double epsilon_px = 1500.0;  // centroid distance bound, strict
    int connectivity = 4;        // 4 or 8

    /// Threshold for a label code.
    int eta(int label) const {
        return high_relevance_set.count(label) ? eta_high : eta_low;
    }

    void validate() const;
};

/// A surviving within-window cluster, in tile coordinates.
struct WindowCluster {
    int label = 0;
    int count = 0;
    double centroid_row = 0.0;
    double centroid_col = 0.0;
};

/// Connected components of equal nonzero labels inside one window
/// (clipped at map borders), with components below eta(label) dropped.
/// Components are returned in row-major discovery order.
std::vector<WindowCluster> clusterWindow(const HistologyMap& m, int win_row, int win_col,
                                         const BuilderConfig& cfg);

/// Full Stage-1 construction: cluster every window, assign node ids in
/// row-major window order then discovery order, convert tile centroids to
/// pixel centers, and connect every node pair with centroid distance
/// strictly below epsilon_px. Deterministic; `threads` only parallelizes
/// the per-window work.
TmeGraph buildGraph(const HistologyMap& m, const BuilderConfig& cfg, int threads = 1);

} // namespace nacnet
