#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mpslime/error.hpp"
#include "mpslime/segmentation.hpp"

namespace mpslime {

using Edge = std::pair<int, int>;  // always first < second

// Undirected region adjacency graph over superpixels.
class RegionGraph {
public:
    RegionGraph() = default;

    // Builds from an edge list; pairs are canonicalized and deduplicated.
    RegionGraph(int num_vertices, std::vector<Edge> edges)
        : num_vertices_(num_vertices), adjacency_(static_cast<std::size_t>(num_vertices)) {
        if (num_vertices < 0) throw ParameterError("negative vertex count");
        for (auto& [u, v] : edges) {
            if (u == v) throw ParameterError("self-loop on vertex " + std::to_string(u));
            if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices) {
                throw IndexError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                 ") out of range");
            }
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);
        for (const auto& [u, v] : edges_) {
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
    }

    int num_vertices() const noexcept { return num_vertices_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<int>& neighbors(int v) const noexcept { return adjacency_[v]; }

    bool adjacent(int u, int v) const noexcept {
        const auto& nb = adjacency_[u];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    friend bool operator==(const RegionGraph&, const RegionGraph&) = default;

private:
    int num_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

// Segments u and v are joined iff some pixel of u is 4-adjacent to a pixel of v.
// Diagonal-only contact does not create an edge.
inline RegionGraph build_region_graph(const SuperpixelMap& map) {
    std::vector<Edge> edges;
    const int w = map.width(), h = map.height();
    const auto& labels = map.labels();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            if (x + 1 < w && labels[p + 1] != labels[p]) {
                edges.emplace_back(std::min(labels[p], labels[p + 1]),
                                   std::max(labels[p], labels[p + 1]));
            }
            if (y + 1 < h && labels[p + w] != labels[p]) {
                edges.emplace_back(std::min(labels[p], labels[p + w]),
                                   std::max(labels[p], labels[p + w]));
            }
        }
    }
    return RegionGraph(map.num_segments(), std::move(edges));
}

// One "u v" line per edge, sorted.
inline void write_edge_list(std::ostream& out, const RegionGraph& graph) {
    for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

} // namespace mpslime
