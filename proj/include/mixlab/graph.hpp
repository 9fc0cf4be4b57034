#ifndef MIXLAB_GRAPH_HPP
#define MIXLAB_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/group.hpp"
#include "mixlab/numeric.hpp"

namespace mixlab {

// Finite undirected graph with unit edge rates. Edges are stored as sorted
// (u < v) pairs in a flat sorted list so that iteration order is
// deterministic across runs. Optional per-vertex coordinate labels record
// product structure (factor-local indices, factor 0 least significant).
struct Graph {
    std::uint32_t vertex_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::vector<std::uint32_t>> labels; // empty unless a product

    std::size_t edge_count() const { return edges.size(); }
    std::vector<std::vector<std::uint32_t>> adjacency() const;
    std::uint32_t degree(std::uint32_t v) const;
    bool connected() const;
    bool has_edge(std::uint32_t u, std::uint32_t v) const;

    // Validates: no self-loops, no duplicates, endpoints in range, labels
    // distinct (when present).
    static Graph make(std::uint32_t vertex_count,
                      std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                      std::vector<std::vector<std::uint32_t>> labels = {});

    std::string to_json() const;
    static Graph from_json(const std::string& text);
};

Graph complete_graph(std::uint32_t m);
Graph path_graph(std::uint32_t m);
Graph cycle_graph(std::uint32_t m); // m = 2 degenerates to K_2
Graph star_graph(std::uint32_t m);  // K_{1,m-1}

// Cartesian product: neighbors obtained by replacing one coordinate with a
// neighbor in that factor. Labels are coordinate tuples.
Graph cartesian_product(const std::vector<Graph>& factors);

Graph hamming_graph(std::uint32_t n, std::uint32_t ell, std::uint64_t cap = kGraphVertexCap);

// Cayley graph of Z_ell^n; generator set must be symmetric and exclude 0.
Graph cayley_graph(std::uint32_t n, std::uint32_t ell, const std::vector<GroupPoint>& generators,
                   std::uint64_t cap = kGraphVertexCap);

// Parses compact spec strings: "complete:4", "path:3", "cycle:4", "star:5",
// "hamming:n=3,l=2", "torus:n=2,l=4", "cayley:n=2,l=3,spheres=1+2",
// "product:path3 x cycle4", or a JSON object string.
Graph parse_graph_spec(const std::string& spec);

// Canonical form under vertex relabelling (min adjacency bitmask over all
// permutations); only for vertex_count <= 8.
std::uint64_t canonical_form(const Graph& g);

// All connected graphs on m vertices up to isomorphism, deterministic order.
std::vector<Graph> connected_graph_catalog(std::uint32_t m);

} // namespace mixlab

#endif
