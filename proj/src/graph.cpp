#include "graphpot/graph.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace graphpot {

int WeightedGraph::index_of(VertexId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw DomainError("vertex id " + std::to_string(id) + " is not in the graph");
    return it->second;
}

std::vector<char> WeightedGraph::mask_of(const VertexSet& s) const {
    std::vector<char> m(static_cast<std::size_t>(size()), 0);
    for (VertexId v : s) m[static_cast<std::size_t>(index_of(v))] = 1;
    return m;
}

WeightedGraph::Builder& WeightedGraph::Builder::add_vertex(VertexId id, double mu) {
    if (mu <= 0.0) throw ConfigError("vertex measure must be positive");
    if (index_.count(id)) throw ConfigError("duplicate vertex id " + std::to_string(id));
    index_.emplace(id, static_cast<int>(ids_.size()));
    ids_.push_back(id);
    mu_.push_back(mu);
    return *this;
}

WeightedGraph::Builder& WeightedGraph::Builder::add_edge(VertexId u, VertexId v, double w,
                                                         double ell) {
    if (w <= 0.0 || ell <= 0.0) throw ConfigError("edge conductance and length must be positive");
    if (u == v) throw ConfigError("self-loop at vertex " + std::to_string(u));
    auto iu = index_.find(u), iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end())
        throw ConfigError("edge endpoint not added as a vertex");
    raw_edges_.push_back({iu->second, iv->second, w, ell});
    return *this;
}

WeightedGraph WeightedGraph::Builder::build() && {
    if (ids_.empty()) throw ConfigError("graph has no vertices");

    WeightedGraph g;
    g.ids_ = std::move(ids_);
    g.index_ = std::move(index_);
    g.mu_ = std::move(mu_);
    for (double m : g.mu_) g.total_volume_ += m;

    std::set<std::pair<int, int>> seen;
    g.edges_.reserve(raw_edges_.size());
    for (const auto& e : raw_edges_) {
        int a = std::min(e.u, e.v), b = std::max(e.u, e.v);
        if (!seen.insert({a, b}).second)
            throw ConfigError("duplicate edge " + std::to_string(g.ids_[a]) + "-" +
                              std::to_string(g.ids_[b]));
        g.edges_.push_back({a, b, e.w, e.ell});
    }

    const int n = g.size();
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const auto& e : g.edges_) {
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
    }
    g.adj_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i)
        g.adj_offsets_[static_cast<std::size_t>(i) + 1] =
            g.adj_offsets_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(deg[i]);
    g.adj_.resize(g.adj_offsets_.back());
    std::vector<std::size_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
    for (int ei = 0; ei < g.edge_count(); ++ei) {
        const auto& e = g.edges_[static_cast<std::size_t>(ei)];
        g.adj_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, ei};
        g.adj_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, ei};
    }

    // Connectivity (BFS from vertex 0).
    std::vector<char> vis(static_cast<std::size_t>(n), 0);
    std::vector<int> stack = {0};
    vis[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (const auto& a : g.neighbors(x)) {
            if (!vis[static_cast<std::size_t>(a.other)]) {
                vis[static_cast<std::size_t>(a.other)] = 1;
                ++reached;
                stack.push_back(a.other);
            }
        }
    }
    if (reached != n) throw ConfigError("graph is not connected");
    return g;
}

double volume(const WeightedGraph& g, const VertexSet& s) {
    double v = 0.0;
    for (VertexId id : s) v += g.mu(g.index_of(id));
    return v;
}

VertexSet all_vertices(const WeightedGraph& g) {
    VertexSet s = g.ids();
    std::sort(s.begin(), s.end());
    return s;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool set_contains(const VertexSet& s, VertexId v) {
    return std::binary_search(s.begin(), s.end(), v);
}

VertexSet normalized(VertexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace graphpot
