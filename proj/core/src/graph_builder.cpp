#include "nacnet/graph_builder.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace nacnet {

void BuilderConfig::validate() const {
    if (window < 1) throw ConfigError("window must be >= 1");
    if (eta_high < 1 || eta_low < 1) throw ConfigError("eta thresholds must be positive");
    if (eta_high > eta_low) throw ConfigError("eta_high must be <= eta_low");
    if (epsilon_px <= 0.0) throw ConfigError("epsilon_px must be positive");
    if (connectivity != 4 && connectivity != 8) throw ConfigError("connectivity must be 4 or 8");
    for (int label : high_relevance_set) {
        if (label < 1 || label > kMaxLabelCode) {
            throw ConfigError("high_relevance_set entries must be histology codes 1..12");
        }
    }
}

std::vector<WindowCluster> clusterWindow(const HistologyMap& m, int win_row, int win_col,
                                         const BuilderConfig& cfg) {
    const int r0 = win_row * cfg.window;
    const int c0 = win_col * cfg.window;
    const int r1 = std::min(r0 + cfg.window, m.rows);
    const int c1 = std::min(c0 + cfg.window, m.cols);
    const int h = r1 - r0, w = c1 - c0;

    std::vector<WindowCluster> out;
    if (h <= 0 || w <= 0) return out;

    std::vector<bool> visited(static_cast<std::size_t>(h) * w, false);
    auto idx = [w](int r, int c) { return static_cast<std::size_t>(r) * w + c; };

    static const int dr4[] = {-1, 1, 0, 0};
    static const int dc4[] = {0, 0, -1, 1};
    static const int dr8[] = {-1, 1, 0, 0, -1, -1, 1, 1};
    static const int dc8[] = {0, 0, -1, 1, -1, 1, -1, 1};
    const int* dr = cfg.connectivity == 8 ? dr8 : dr4;
    const int* dc = cfg.connectivity == 8 ? dc8 : dc4;
    const int ndirs = cfg.connectivity;

    std::vector<std::pair<int, int>> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (visited[idx(r, c)]) continue;
            int label = m.at(r0 + r, c0 + c);
            visited[idx(r, c)] = true;
            if (label == 0) continue;

            long count = 0;
            long sum_r = 0, sum_c = 0;
            stack.clear();
            stack.emplace_back(r, c);
            while (!stack.empty()) {
                auto [cr, cc] = stack.back();
                stack.pop_back();
                ++count;
                sum_r += cr;
                sum_c += cc;
                for (int d = 0; d < ndirs; ++d) {
                    int nr = cr + dr[d], nc = cc + dc[d];
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    if (visited[idx(nr, nc)]) continue;
                    if (m.at(r0 + nr, c0 + nc) != label) continue;
                    visited[idx(nr, nc)] = true;
                    stack.emplace_back(nr, nc);
                }
            }
            if (count < cfg.eta(label)) continue;
            WindowCluster cl;
            cl.label = label;
            cl.count = static_cast<int>(count);
            cl.centroid_row = r0 + static_cast<double>(sum_r) / static_cast<double>(count);
            cl.centroid_col = c0 + static_cast<double>(sum_c) / static_cast<double>(count);
            out.push_back(cl);
        }
    }
    return out;
}

TmeGraph buildGraph(const HistologyMap& m, const BuilderConfig& cfg, int threads) {
    cfg.validate();
    const int win_rows = (m.rows + cfg.window - 1) / cfg.window;
    const int win_cols = (m.cols + cfg.window - 1) / cfg.window;
    const int num_windows = win_rows * win_cols;

    // Per-window results land in a slot keyed by window index, so the
    // merge is identical for any thread count or processing order.
    std::vector<std::vector<WindowCluster>> per_window(static_cast<std::size_t>(num_windows));
    parallelFor(num_windows, threads, [&](int wi) {
        per_window[static_cast<std::size_t>(wi)] =
            clusterWindow(m, wi / win_cols, wi % win_cols, cfg);
    });

    TmeGraph g;
    for (const auto& clusters : per_window) {
        for (const auto& cl : clusters) {
            TmeNode node;
            node.id = g.numNodes();
            node.label = cl.label;
            node.count = cl.count;
            node.cx = (cl.centroid_col + 0.5) * m.tile_px;
            node.cy = (cl.centroid_row + 0.5) * m.tile_px;
            g.nodes.push_back(node);
        }
    }

    const double eps2 = cfg.epsilon_px * cfg.epsilon_px;
    for (int i = 0; i < g.numNodes(); ++i) {
        for (int j = i + 1; j < g.numNodes(); ++j) {
            double dx = g.nodes[static_cast<std::size_t>(i)].cx - g.nodes[static_cast<std::size_t>(j)].cx;
            double dy = g.nodes[static_cast<std::size_t>(i)].cy - g.nodes[static_cast<std::size_t>(j)].cy;
            if (dx * dx + dy * dy < eps2) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

} // namespace nacnet
