#include "graphgp/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "graphgp/errors.hpp"
#include "graphgp/format.hpp"

namespace graphgp {

namespace {

Graph build_from_sorted_unique(int n_vertices, std::vector<std::pair<int, int>> edges) {
    Graph g;
    g.n_vertices = n_vertices;
    g.adjacency.assign(static_cast<std::size_t>(n_vertices), {});
    for (const auto& [u, v] : edges) {
        g.adjacency[static_cast<std::size_t>(u)].push_back(v);
        g.adjacency[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nbrs : g.adjacency)
        std::sort(nbrs.begin(), nbrs.end());
    g.degrees.resize(static_cast<std::size_t>(n_vertices));
    for (int i = 0; i < n_vertices; ++i)
        g.degrees[static_cast<std::size_t>(i)] =
            static_cast<int>(g.adjacency[static_cast<std::size_t>(i)].size());
    g.edges = std::move(edges);
    return g;
}

} // namespace

Graph make_graph(int n_vertices, std::vector<std::pair<int, int>> edge_list) {
    if (n_vertices < 0)
        throw std::invalid_argument("make_graph: negative vertex count");
    for (auto& [u, v] : edge_list) {
        if (u > v)
            std::swap(u, v);
        if (u < 0 || v >= n_vertices)
            throw std::invalid_argument("make_graph: edge endpoint out of range");
        if (u == v)
            throw std::invalid_argument("make_graph: self-loop not allowed");
    }
    std::sort(edge_list.begin(), edge_list.end());
    if (std::adjacent_find(edge_list.begin(), edge_list.end()) != edge_list.end())
        throw std::invalid_argument("make_graph: duplicate edge");
    return build_from_sorted_unique(n_vertices, std::move(edge_list));
}

Graph sample_graph(const std::vector<int>& degree_sequence, rng_t& rng) {
    long long sum = 0;
    for (int d : degree_sequence) {
        if (d < 0)
            throw std::invalid_argument("sample_graph: negative degree");
        sum += d;
    }
    if (sum % 2 != 0)
        throw std::invalid_argument("sample_graph: degree sum must be even");

    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(sum));
    for (int i = 0; i < static_cast<int>(degree_sequence.size()); ++i)
        for (int k = 0; k < degree_sequence[static_cast<std::size_t>(i)]; ++k)
            stubs.push_back(i);
    std::shuffle(stubs.begin(), stubs.end(), rng);

    std::vector<std::pair<int, int>> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        int u = stubs[k];
        int v = stubs[k + 1];
        if (u == v)
            continue; // erase self-loop
        if (u > v)
            std::swap(u, v);
        edges.emplace_back(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end()); // erase duplicates
    return build_from_sorted_unique(static_cast<int>(degree_sequence.size()),
                                    std::move(edges));
}

Graph sample_graph(const DegreeDistribution& dist, int n_vertices, rng_t& rng) {
    return sample_graph(dist.sample_degree_sequence(n_vertices, rng), rng);
}

void write_graph(const Graph& g, std::ostream& out) {
    out << g.n_vertices << ' ' << g.n_edges() << '\n';
    for (const auto& [u, v] : g.edges)
        out << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& in) {
    int n_vertices = 0, n_edges = 0;
    if (!(in >> n_vertices >> n_edges))
        throw config_error("read_graph: malformed header (expected 'V E')");
    if (n_vertices < 0 || n_edges < 0)
        throw config_error("read_graph: negative counts in header");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n_edges));
    for (int k = 0; k < n_edges; ++k) {
        int u = 0, v = 0;
        if (!(in >> u >> v))
            throw config_error("read_graph: truncated edge list at edge " +
                               format_int(k));
        edges.emplace_back(u, v);
    }
    try {
        return make_graph(n_vertices, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("read_graph: ") + e.what());
    }
}

} // namespace graphgp
