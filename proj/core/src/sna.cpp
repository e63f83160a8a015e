#include "nacnet/sna.hpp"

#include "nacnet/parallel.hpp"

#include <cmath>
#include <queue>

namespace nacnet {

std::vector<int> degreeCentrality(const TmeGraph& g) {
    std::vector<int> deg(static_cast<std::size_t>(g.numNodes()), 0);
    for (const auto& [i, j] : g.edges) {
        ++deg[static_cast<std::size_t>(i)];
        ++deg[static_cast<std::size_t>(j)];
    }
    return deg;
}

std::vector<double> betweennessCentrality(const TmeGraph& g, int threads) {
    const int n = g.numNodes();
    const auto adj = g.adjacencyList();
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(n));

    parallelFor(n, threads, [&](int s) {
        // Brandes: one BFS per source, dependencies accumulated backwards.
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
        std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
        std::vector<std::vector<int>> pred(static_cast<std::size_t>(n));
        std::vector<int> order;
        order.reserve(static_cast<std::size_t>(n));

        dist[static_cast<std::size_t>(s)] = 0;
        sigma[static_cast<std::size_t>(s)] = 1.0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            order.push_back(v);
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    q.push(w);
                }
                if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(v)] + 1) {
                    sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
                    pred[static_cast<std::size_t>(w)].push_back(v);
                }
            }
        }
        std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int v : pred[static_cast<std::size_t>(w)]) {
                delta[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(v)] /
                                                      sigma[static_cast<std::size_t>(w)] *
                                                      (1.0 + delta[static_cast<std::size_t>(w)]);
            }
            if (w != s) acc[static_cast<std::size_t>(w)] = delta[static_cast<std::size_t>(w)];
        }
        partial[static_cast<std::size_t>(s)] = std::move(acc);
    });

    std::vector<double> bc(static_cast<std::size_t>(n), 0.0);
    for (const auto& acc : partial) {
        for (int v = 0; v < n; ++v) bc[static_cast<std::size_t>(v)] += acc[static_cast<std::size_t>(v)];
    }
    // Each unordered pair was counted from both endpoints.
    for (double& v : bc) v *= 0.5;
    return bc;
}

std::vector<double> closenessCentrality(const TmeGraph& g, int threads) {
    const int n = g.numNodes();
    const auto adj = g.adjacencyList();
    std::vector<double> cc(static_cast<std::size_t>(n), 0.0);
    parallelFor(n, threads, [&](int s) {
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        long reached = 0;
        long total = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            if (v != s) {
                ++reached;
                total += dist[static_cast<std::size_t>(v)];
            }
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    q.push(w);
                }
            }
        }
        cc[static_cast<std::size_t>(s)] =
            reached > 0 ? static_cast<double>(reached) / static_cast<double>(total) : 0.0;
    });
    return cc;
}

PageRankResult pageRank(const TmeGraph& g, double damping, double tol, int max_iter) {
    const int n = g.numNodes();
    PageRankResult res;
    if (n == 0) return res;

    const auto adj = g.adjacencyList();
    const auto deg = degreeCentrality(g);
    std::vector<double> pr(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);

    for (int iter = 0; iter < max_iter; ++iter) {
        double dangling = 0.0;
        for (int v = 0; v < n; ++v) {
            if (deg[static_cast<std::size_t>(v)] == 0) dangling += pr[static_cast<std::size_t>(v)];
        }
        double base = (1.0 - damping) / n + damping * dangling / n;
        for (int v = 0; v < n; ++v) {
            double sum = 0.0;
            for (int u : adj[static_cast<std::size_t>(v)]) {
                sum += pr[static_cast<std::size_t>(u)] / deg[static_cast<std::size_t>(u)];
            }
            next[static_cast<std::size_t>(v)] = base + damping * sum;
        }
        double change = 0.0;
        for (int v = 0; v < n; ++v) {
            change += std::abs(next[static_cast<std::size_t>(v)] - pr[static_cast<std::size_t>(v)]);
        }
        pr.swap(next);
        res.iterations = iter + 1;
        if (change < tol) {
            res.scores = std::move(pr);
            res.converged = true;
            return res;
        }
    }
    res.scores = std::move(pr);
    res.converged = false;
    return res;
}

} // namespace nacnet
