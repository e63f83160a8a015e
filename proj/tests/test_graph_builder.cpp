#include <doctest.h>

#include "nacnet/errors.hpp"
#include "nacnet/graph_builder.hpp"
#include "nacnet/rng.hpp"
#include "nacnet/tme_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace nacnet;

namespace {

/// Fills a rectangle of the map with one label.
void paint(HistologyMap& m, int r0, int c0, int rows, int cols, int label) {
    for (int r = r0; r < r0 + rows; ++r)
        for (int c = c0; c < c0 + cols; ++c) m.at(r, c) = static_cast<std::uint8_t>(label);
}

HistologyMap randomMap(int rows, int cols, Rng& rng, double density = 0.5) {
    HistologyMap m = makeMap(rows, cols);
    for (auto& cell : m.cells) {
        if (rng.uniform() < density) cell = static_cast<std::uint8_t>(1 + rng.below(12));
    }
    return m;
}

std::set<std::pair<int, int>> edgeSet(const TmeGraph& g) {
    return {g.edges.begin(), g.edges.end()};
}

} // namespace

TEST_CASE("a full tumor window forms one centered cluster") {
    HistologyMap m = makeMap(10, 10);
    paint(m, 0, 0, 10, 10, kLabelTumor);
    const auto clusters = clusterWindow(m, 0, 0, BuilderConfig{});
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].label == kLabelTumor);
    CHECK(clusters[0].count == 100);
    CHECK(clusters[0].centroid_row == doctest::Approx(4.5));
    CHECK(clusters[0].centroid_col == doctest::Approx(4.5));
}

TEST_CASE("clusters below their label threshold are dropped") {
    // Tumor thresholds at 5, so 4 tiles vanish and 5 survive.
    HistologyMap m = makeMap(10, 10);
    paint(m, 0, 0, 2, 2, kLabelTumor);
    CHECK(clusterWindow(m, 0, 0, BuilderConfig{}).empty());

    paint(m, 0, 0, 1, 5, kLabelTumor);
    m.at(1, 0) = 0;
    m.at(1, 1) = 0;
    const auto clusters = clusterWindow(m, 0, 0, BuilderConfig{});
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].count == 5);
}

TEST_CASE("low-relevance labels need the higher threshold") {
    // Adipose tissue thresholds at 10: a 9-tile blob is dropped, 10 survive.
    HistologyMap m = makeMap(10, 10);
    paint(m, 0, 0, 3, 3, kLabelAdiposeTissue);
    CHECK(clusterWindow(m, 0, 0, BuilderConfig{}).empty());
    m.at(3, 0) = kLabelAdiposeTissue;
    CHECK(clusterWindow(m, 0, 0, BuilderConfig{}).size() == 1);
}

TEST_CASE("diagonal-only contact separates blobs under 4-connectivity") {
    // Two 6-tile stroma blobs touching only at a corner.
    HistologyMap m = makeMap(10, 10);
    paint(m, 0, 0, 2, 3, kLabelStroma);
    paint(m, 2, 3, 2, 3, kLabelStroma);
    BuilderConfig cfg;
    CHECK(clusterWindow(m, 0, 0, cfg).size() == 2);
    cfg.connectivity = 8;
    CHECK(clusterWindow(m, 0, 0, cfg).size() == 1);
}

TEST_CASE("all-background map builds an empty graph") {
    const TmeGraph g = buildGraph(makeMap(40, 40), BuilderConfig{});
    CHECK(g.numNodes() == 0);
    CHECK(g.numEdges() == 0);
}

TEST_CASE("the epsilon rule is strict at 1500 px") {
    // Two one-column tumor bars of 10 tiles in horizontally adjacent
    // windows. cx = (mean tile col + 0.5) * 150, so bars at cols 4 and 13
    // sit 9 * 150 = 1350 px apart (edge) and cols 2 / 13 sit 1650 px
    // apart (no edge).
    HistologyMap near = makeMap(10, 20);
    paint(near, 0, 4, 10, 1, kLabelTumor);   // cx 675
    paint(near, 0, 13, 10, 1, kLabelTumor);  // cx 2025
    const TmeGraph g_near = buildGraph(near, BuilderConfig{});
    REQUIRE(g_near.numNodes() == 2);
    CHECK(g_near.numEdges() == 1);

    HistologyMap far = makeMap(10, 20);
    paint(far, 0, 2, 10, 1, kLabelTumor);    // cx 375
    paint(far, 0, 13, 10, 1, kLabelTumor);   // cx 2025
    const TmeGraph g_far = buildGraph(far, BuilderConfig{});
    REQUIRE(g_far.numNodes() == 2);
    CHECK(g_far.numEdges() == 0);

    // Exactly epsilon apart -> no edge (strict inequality).
    HistologyMap at = makeMap(10, 20);
    paint(at, 0, 2, 10, 1, kLabelTumor);     // cx 375
    paint(at, 0, 12, 10, 1, kLabelTumor);    // cx 1875, exactly 1500 away
    CHECK(buildGraph(at, BuilderConfig{}).numEdges() == 0);
}

TEST_CASE("centroids convert to tile-center pixels") {
    HistologyMap m = makeMap(10, 10);
    paint(m, 2, 3, 2, 3, kLabelTumor);  // rows 2..3, cols 3..5
    const TmeGraph g = buildGraph(m, BuilderConfig{});
    REQUIRE(g.numNodes() == 1);
    CHECK(g.nodes[0].cx == doctest::Approx((4.0 + 0.5) * 150.0));  // mean col 4
    CHECK(g.nodes[0].cy == doctest::Approx((2.5 + 0.5) * 150.0));  // mean row 2.5
    CHECK(g.nodes[0].count == 6);
}

TEST_CASE("a blob spanning two windows becomes two nodes") {
    HistologyMap m = makeMap(10, 20);
    paint(m, 0, 5, 2, 10, kLabelTumor);  // crosses the col-10 window border
    const TmeGraph g = buildGraph(m, BuilderConfig{});
    CHECK(g.numNodes() == 2);
}

TEST_CASE("huge epsilon yields the complete graph on surviving nodes") {
    Rng rng(19);
    const HistologyMap m = randomMap(40, 40, rng);
    BuilderConfig cfg;
    cfg.epsilon_px = 1e9;
    const TmeGraph g = buildGraph(m, cfg);
    const int n = g.numNodes();
    CHECK(g.numEdges() == n * (n - 1) / 2);
}

TEST_CASE("edge set matches the all-pairs distance oracle") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const HistologyMap m = randomMap(30, 30, rng, 0.6);
        const BuilderConfig cfg;
        const TmeGraph g = buildGraph(m, cfg);
        std::set<std::pair<int, int>> expect;
        for (int i = 0; i < g.numNodes(); ++i) {
            for (int j = i + 1; j < g.numNodes(); ++j) {
                const double dx = g.nodes[i].cx - g.nodes[j].cx;
                const double dy = g.nodes[i].cy - g.nodes[j].cy;
                if (std::sqrt(dx * dx + dy * dy) < cfg.epsilon_px) expect.insert({i, j});
            }
        }
        CHECK(edgeSet(g) == expect);
    }
}

TEST_CASE("every built node satisfies its threshold and label bounds") {
    Rng rng(31);
    const HistologyMap m = randomMap(40, 40, rng);
    const BuilderConfig cfg;
    for (const TmeNode& node : buildGraph(m, cfg).nodes) {
        CHECK(node.label >= 1);
        CHECK(node.label <= 12);
        CHECK(node.count >= cfg.eta(node.label));
    }
}

TEST_CASE("builder output is deterministic and thread-invariant") {
    Rng rng(37);
    const HistologyMap m = randomMap(40, 40, rng);
    const std::string once = writeGraph(buildGraph(m, BuilderConfig{}, 1));
    CHECK(writeGraph(buildGraph(m, BuilderConfig{}, 1)) == once);
    CHECK(writeGraph(buildGraph(m, BuilderConfig{}, 4)) == once);
    CHECK(writeGraph(buildGraph(m, BuilderConfig{}, 3)) == once);
}

TEST_CASE("edge sets grow monotonically with epsilon") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const HistologyMap m = randomMap(30, 30, rng, 0.6);
        BuilderConfig small, large;
        small.epsilon_px = 900.0;
        large.epsilon_px = 2100.0;
        const auto e_small = edgeSet(buildGraph(m, small));
        const auto e_large = edgeSet(buildGraph(m, large));
        CHECK(std::includes(e_large.begin(), e_large.end(), e_small.begin(), e_small.end()));
    }
}

TEST_CASE("config validation") {
    BuilderConfig cfg;
    cfg.eta_high = 11;  // must stay <= eta_low
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = BuilderConfig{};
    cfg.epsilon_px = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = BuilderConfig{};
    cfg.connectivity = 6;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = BuilderConfig{};
    cfg.window = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
