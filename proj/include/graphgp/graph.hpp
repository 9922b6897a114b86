// Simple undirected graphs and configuration-model sampling (stub matching
// with erasure of self-loops and duplicate edges), plus the plain-text edge
// list format used by the CLI.
#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "graphgp/degree_distribution.hpp"
#include "graphgp/rng.hpp"

namespace graphgp {

struct Graph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // u < v, sorted, unique
    std::vector<std::vector<int>> adjacency; // sorted neighbor lists
    std::vector<int> degrees;                // realized degrees

    int n_edges() const { return static_cast<int>(edges.size()); }
};

// Build a Graph from an edge list, validating simplicity and vertex range.
Graph make_graph(int n_vertices, std::vector<std::pair<int, int>> edge_list);

// Configuration model: uniform stub matching for the given degree sequence,
// then erasure of self-loops and duplicate edges. Realized degrees can fall
// below the requested ones at erased stubs. Requires an even degree sum.
Graph sample_graph(const std::vector<int>& degree_sequence, rng_t& rng);

// Convenience: degree sequence from the ensemble, then stub matching.
Graph sample_graph(const DegreeDistribution& dist, int n_vertices, rng_t& rng);

// Text format: first line "V E", then E lines "u v" with 0-based ids, u < v.
void write_graph(const Graph& g, std::ostream& out);
Graph read_graph(std::istream& in);

} // namespace graphgp
