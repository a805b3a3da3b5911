#pragma once

// Perturbation sets: the clique set C1 ∪ C2 ∪ C3 of the region graph
// (correlation-aware sampler) and the uniform Bernoulli(0.5) baseline.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mpslime/error.hpp"
#include "mpslime/mask.hpp"
#include "mpslime/region_graph.hpp"

namespace mpslime {

// Vertex set of size 1..3, members strictly increasing.
struct Clique {
    std::vector<int> members;

    std::size_t size() const noexcept { return members.size(); }

    // Canonical order: by size, then lexicographically.
    friend std::strong_ordering operator<=>(const Clique& a, const Clique& b) {
        if (auto c = a.members.size() <=> b.members.size(); c != 0) return c;
        return a.members <=> b.members;
    }
    friend bool operator==(const Clique&, const Clique&) = default;
};

enum class MaskPolarity {
    deactivate_clique,  // members hidden, everything else present
    activate_clique,    // members present, everything else hidden
};

namespace detail {

// Depth-first search for simple paths start = p0, p1, ..., p(n-1) that close
// back onto start. Every closed path is recorded in canonical sorted form, so a
// triangle found from each of its vertices in both directions is kept once.
inline void clique_dfs(const RegionGraph& graph, int v, int start, int remaining,
                       std::vector<char>& visited, std::vector<int>& path,
                       std::set<Clique>& found) {
    if (remaining == 0) {
        if (path.size() <= 2 || graph.adjacent(v, start)) {
            Clique c{path};
            std::sort(c.members.begin(), c.members.end());
            found.insert(std::move(c));
        }
        return;
    }
    visited[v] = 1;
    for (int next : graph.neighbors(v)) {
        if (visited[next]) continue;
        path.push_back(next);
        clique_dfs(graph, next, start, remaining - 1, visited, path, found);
        path.pop_back();
    }
    visited[v] = 0;
}

} // namespace detail

// All singletons, edges and triangles of the graph, each exactly once, in
// canonical order. |result| = d' + |E| + #triangles. Larger cliques are never
// emitted, even when the graph contains K4.
inline std::vector<Clique> enumerate_cliques(const RegionGraph& graph) {
    std::set<Clique> found;
    const int d = graph.num_vertices();
    std::vector<char> visited(static_cast<std::size_t>(d), 0);
    std::vector<int> path;
    for (int start = 0; start < d; ++start) {
        for (int length = 1; length <= 3; ++length) {
            path.assign(1, start);
            detail::clique_dfs(graph, start, start, length - 1, visited, path, found);
        }
    }
    return {found.begin(), found.end()};
}

inline PerturbationMask clique_to_mask(const Clique& clique, std::size_t num_segments,
                                       MaskPolarity polarity = MaskPolarity::deactivate_clique) {
    const bool member_bit = polarity == MaskPolarity::activate_clique;
    auto mask = PerturbationMask::filled(num_segments, !member_bit);
    for (int m : clique.members) {
        if (m < 0 || static_cast<std::size_t>(m) >= num_segments) {
            throw IndexError("clique member " + std::to_string(m) + " out of range for " +
                             std::to_string(num_segments) + " segments");
        }
        mask.set(static_cast<std::size_t>(m), member_bit);
    }
    return mask;
}

// n_samples masks with i.i.d. fair bits. Bits come straight from mt19937_64
// output words, so a seed reproduces the same masks on every platform.
inline std::vector<PerturbationMask> uniform_sampler(std::size_t num_segments, std::size_t n_samples,
                                                     std::uint64_t seed) {
    if (num_segments < 1) throw ParameterError("uniform sampler needs at least one segment");
    if (n_samples < 1) throw ParameterError("uniform sampler needs n_samples >= 1");
    std::mt19937_64 rng(seed);
    std::vector<PerturbationMask> out;
    out.reserve(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto mask = PerturbationMask::zeros(num_segments);
        std::uint64_t word = 0;
        for (std::size_t i = 0; i < num_segments; ++i) {
            if (i % 64 == 0) word = rng();
            mask.set(i, (word >> (i % 64)) & 1U);
        }
        out.push_back(std::move(mask));
    }
    return out;
}

// One clique per line, members space-separated.
inline void write_clique_list(std::ostream& out, const std::vector<Clique>& cliques) {
    for (const auto& c : cliques) {
        for (std::size_t i = 0; i < c.members.size(); ++i) {
            if (i) out << ' ';
            out << c.members[i];
        }
        out << '\n';
    }
}

} // namespace mpslime
