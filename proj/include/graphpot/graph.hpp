#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "graphpot/errors.hpp"

namespace graphpot {

using VertexId = std::int64_t;

// Vertex sets at the API surface are sorted, duplicate-free id lists.
using VertexSet = std::vector<VertexId>;

struct Edge {
    std::int32_t u = 0;  // dense endpoint indices, u < v
    std::int32_t v = 0;
    double w = 1.0;      // conductance
    double ell = 1.0;    // length
};

struct Adjacency {
    std::int32_t other;  // dense index of the neighbor
    std::int32_t edge;   // index into edges()
};

// Finite weighted graph: positive vertex measures mu, positive edge
// conductances w and lengths ell. Connected, no self-loops, no duplicate
// edges. Immutable after construction; vertices carry stable integer ids,
// dense indices follow insertion order.
class WeightedGraph {
public:
    class Builder;

    int size() const { return static_cast<int>(mu_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    VertexId id_of(int idx) const { return ids_[static_cast<std::size_t>(idx)]; }
    const std::vector<VertexId>& ids() const { return ids_; }

    bool contains(VertexId id) const { return index_.count(id) != 0; }
    int index_of(VertexId id) const;

    double mu(int idx) const { return mu_[static_cast<std::size_t>(idx)]; }
    double total_volume() const { return total_volume_; }

    std::span<const Edge> edges() const { return edges_; }
    std::span<const Adjacency> neighbors(int idx) const {
        auto b = adj_offsets_[static_cast<std::size_t>(idx)];
        auto e = adj_offsets_[static_cast<std::size_t>(idx) + 1];
        return {adj_.data() + b, adj_.data() + e};
    }
    int degree(int idx) const {
        return static_cast<int>(adj_offsets_[static_cast<std::size_t>(idx) + 1] -
                                adj_offsets_[static_cast<std::size_t>(idx)]);
    }

    // Dense mask (size()) with 1 at every vertex of s. Throws DomainError on
    // ids absent from the graph.
    std::vector<char> mask_of(const VertexSet& s) const;

private:
    std::vector<VertexId> ids_;
    std::unordered_map<VertexId, int> index_;
    std::vector<double> mu_;
    std::vector<Edge> edges_;
    std::vector<Adjacency> adj_;
    std::vector<std::size_t> adj_offsets_;
    double total_volume_ = 0.0;
};

class WeightedGraph::Builder {
public:
    Builder& add_vertex(VertexId id, double mu = 1.0);
    Builder& add_edge(VertexId u, VertexId v, double w = 1.0, double ell = 1.0);
    bool has_vertex(VertexId id) const { return index_.count(id) != 0; }
    int vertex_count() const { return static_cast<int>(ids_.size()); }

    // Validates positivity, simple-graph structure and connectivity.
    WeightedGraph build() &&;

private:
    std::vector<VertexId> ids_;
    std::unordered_map<VertexId, int> index_;
    std::vector<double> mu_;
    struct RawEdge {
        int u, v;
        double w, ell;
    };
    std::vector<RawEdge> raw_edges_;
};

// Sum of vertex measures over s.
double volume(const WeightedGraph& g, const VertexSet& s);

VertexSet all_vertices(const WeightedGraph& g);

// Set helpers used throughout; inputs and outputs are sorted unique lists.
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
bool set_contains(const VertexSet& s, VertexId v);
VertexSet normalized(VertexSet s);  // sort + unique

}  // namespace graphpot
