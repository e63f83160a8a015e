#include "nacnet/tme_graph.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/histology_map.hpp"
#include "nacnet/text_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace nacnet {

std::vector<std::vector<int>> TmeGraph::adjacencyList() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (const auto& [i, j] : edges) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

std::vector<double> TmeGraph::adjacencyMatrix() const {
    std::size_t n = nodes.size();
    std::vector<double> a(n * n, 0.0);
    for (const auto& [i, j] : edges) {
        a[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = 1.0;
        a[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)] = 1.0;
    }
    return a;
}

TmeGraph parseGraph(const std::string& text) {
    std::istringstream in(text);
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError("empty .tmeg input");

    auto toks = splitWs(line);
    if (toks.size() != 4 || toks[0] != "TMEG" || toks[1] != "1") {
        throw ParseError("line " + std::to_string(reader.lineNumber()) +
                         ": expected header 'TMEG 1 <num_nodes> <num_edges>'");
    }
    long n = parseLong(toks[2], "num_nodes");
    long m = parseLong(toks[3], "num_edges");
    if (n < 0 || m < 0) throw ParseError("negative node or edge count");

    TmeGraph g;
    g.nodes.resize(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::set<std::pair<int, int>> edge_set;

    long got_nodes = 0, got_edges = 0;
    while (reader.next(line)) {
        auto t = splitWs(line);
        const std::string where = "line " + std::to_string(reader.lineNumber());
        if (t.empty()) continue;
        if (t[0] == "NODE") {
            if (t.size() != 6) throw ParseError(where + ": expected 'NODE <id> <label> <count> <cx> <cy>'");
            long id = parseLong(t[1], where + " node id");
            if (id < 0 || id >= n) throw ParseError(where + ": node id " + t[1] + " out of range 0.." + std::to_string(n - 1));
            if (seen[static_cast<std::size_t>(id)]) throw ParseError(where + ": duplicate node id " + t[1]);
            TmeNode node;
            node.id = static_cast<int>(id);
            node.label = static_cast<int>(parseLong(t[2], where + " label"));
            if (node.label < 1 || node.label > kMaxLabelCode) {
                throw ParseError(where + ": node label " + t[2] + " out of range 1..12");
            }
            node.count = static_cast<int>(parseLong(t[3], where + " count"));
            if (node.count <= 0) throw ParseError(where + ": node count must be positive");
            node.cx = parseDouble(t[4], where + " cx");
            node.cy = parseDouble(t[5], where + " cy");
            g.nodes[static_cast<std::size_t>(id)] = node;
            seen[static_cast<std::size_t>(id)] = true;
            ++got_nodes;
        } else if (t[0] == "EDGE") {
            if (t.size() != 3) throw ParseError(where + ": expected 'EDGE <i> <j>'");
            long i = parseLong(t[1], where + " edge endpoint");
            long j = parseLong(t[2], where + " edge endpoint");
            if (i < 0 || i >= n || j < 0 || j >= n) {
                throw ParseError(where + ": edge endpoint out of range (graph has " + std::to_string(n) + " nodes)");
            }
            if (i >= j) throw ParseError(where + ": edge endpoints must satisfy i < j");
            auto e = std::make_pair(static_cast<int>(i), static_cast<int>(j));
            if (!edge_set.insert(e).second) throw ParseError(where + ": duplicate edge");
            ++got_edges;
        } else {
            throw ParseError(where + ": unknown record '" + t[0] + "'");
        }
    }
    if (got_nodes != n) {
        throw ParseError("expected " + std::to_string(n) + " NODE records, got " + std::to_string(got_nodes));
    }
    if (got_edges != m) {
        throw ParseError("expected " + std::to_string(m) + " EDGE records, got " + std::to_string(got_edges));
    }
    g.edges.assign(edge_set.begin(), edge_set.end());
    return g;
}

std::string writeGraph(const TmeGraph& g) {
    std::string out;
    out += "TMEG 1 " + std::to_string(g.numNodes()) + ' ' + std::to_string(g.numEdges()) + '\n';
    for (const auto& node : g.nodes) {
        out += "NODE " + std::to_string(node.id) + ' ' + std::to_string(node.label) + ' ' +
               std::to_string(node.count) + ' ' + formatDouble(node.cx) + ' ' + formatDouble(node.cy) + '\n';
    }
    auto edges = g.edges;
    std::sort(edges.begin(), edges.end());
    for (const auto& [i, j] : edges) {
        out += "EDGE " + std::to_string(i) + ' ' + std::to_string(j) + '\n';
    }
    return out;
}

} // namespace nacnet
