#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mpslime/region_graph.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

namespace mpslime {
namespace {

TEST(BuildRegionGraph, TwoTouchingSegments) {
    const auto g = build_region_graph(SuperpixelMap(2, 1, {0, 1}));
    EXPECT_EQ(g.num_vertices(), 2);
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(BuildRegionGraph, QuadrantsHaveNoDiagonalEdges) {
    // 4x4 label map, one segment per quadrant.
    const SuperpixelMap map(4, 4, {0, 0, 1, 1,
                                   0, 0, 1, 1,
                                   2, 2, 3, 3,
                                   2, 2, 3, 3});
    const auto g = build_region_graph(map);
    EXPECT_EQ(g.num_vertices(), 4);
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
    EXPECT_FALSE(g.adjacent(0, 3));
    EXPECT_FALSE(g.adjacent(1, 2));
}

TEST(BuildRegionGraph, SingleSegment) {
    const auto g = build_region_graph(SuperpixelMap(3, 3, std::vector<int>(9, 0)));
    EXPECT_EQ(g.num_vertices(), 1);
    EXPECT_EQ(g.num_edges(), 0u);
}

TEST(BuildRegionGraph, MatchesBruteForceOnRandomLabelMaps) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 12), h = 1 + static_cast<int>(rng() % 12);
        const int labels_n = 1 + static_cast<int>(rng() % 8);
        std::vector<int> labels(static_cast<std::size_t>(w) * h);
        for (auto& l : labels) l = static_cast<int>(rng() % labels_n);
        const SuperpixelMap map(w, h, labels);
        const auto g = build_region_graph(map);
        const auto expected = oracle::pixel_adjacency(w, h, labels);
        EXPECT_EQ(std::set<Edge>(g.edges().begin(), g.edges().end()), expected);
        // Symmetric adjacency, no self-loops.
        for (int u = 0; u < g.num_vertices(); ++u) {
            for (int v : g.neighbors(u)) {
                EXPECT_NE(u, v);
                EXPECT_TRUE(g.adjacent(v, u));
            }
        }
    }
}

TEST(BuildRegionGraph, PlanarEdgeBoundOnSegmentations) {
    for (std::uint32_t seed = 0; seed < 6; ++seed) {
        const auto map = segment_image(scenes::random_scene(seed), {});
        const auto g = build_region_graph(map);
        const auto d = static_cast<std::size_t>(g.num_vertices());
        ASSERT_GE(d, 3u);
        EXPECT_LE(g.num_edges(), 3 * d - 6);
        // Connected: BFS from 0 reaches everything.
        std::vector<char> seen(d, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        for (std::size_t i = 0; i < queue.size(); ++i)
            for (int v : g.neighbors(queue[i]))
                if (!seen[v]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
        EXPECT_EQ(queue.size(), d);
    }
}

TEST(RegionGraphTest, RejectsSelfLoopsAndOutOfRange) {
    EXPECT_THROW(RegionGraph(3, {{1, 1}}), ParameterError);
    EXPECT_THROW(RegionGraph(3, {{0, 3}}), IndexError);
    const RegionGraph g(3, {{2, 0}, {0, 2}, {1, 2}});
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 2}, {1, 2}}));
}

TEST(EdgeListExport, SortedPairsPerLine) {
    std::ostringstream out;
    write_edge_list(out, RegionGraph(4, {{2, 3}, {1, 0}, {0, 2}}));
    EXPECT_EQ(out.str(), "0 1\n0 2\n2 3\n");
}

} // namespace
} // namespace mpslime
