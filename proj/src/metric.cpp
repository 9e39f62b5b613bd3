#include "graphpot/metric.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace graphpot {

std::vector<double> shortest_paths(const WeightedGraph& g, int src) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(g.size()), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(src)] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d > dist[static_cast<std::size_t>(x)]) continue;
        for (const auto& a : g.neighbors(x)) {
            double nd = d + g.edges()[static_cast<std::size_t>(a.edge)].ell;
            if (nd < dist[static_cast<std::size_t>(a.other)]) {
                dist[static_cast<std::size_t>(a.other)] = nd;
                pq.push({nd, a.other});
            }
        }
    }
    return dist;
}

VertexSet ball(const Truncation& t, VertexId x0, double R) {
    if (R <= 0) throw DomainError("ball radius must be positive");
    const auto& g = t.graph;
    auto dist = shortest_paths(g, g.index_of(x0));
    const double eps = 1e-12 * (1.0 + R);
    auto horizon_mask = g.mask_of(t.horizon);
    VertexSet out;
    for (int i = 0; i < g.size(); ++i) {
        double d = dist[static_cast<std::size_t>(i)];
        if (d <= R + eps) {
            if (horizon_mask[static_cast<std::size_t>(i)] && d < R - eps)
                throw TruncationEscape("ball escapes truncation: horizon vertex " +
                                       std::to_string(g.id_of(i)) + " at distance " +
                                       std::to_string(d) + " < R");
            out.push_back(g.id_of(i));
        }
    }
    return normalized(std::move(out));
}

std::vector<int> hop_distance(const WeightedGraph& g, const std::vector<char>& source_mask) {
    std::vector<int> dist(static_cast<std::size_t>(g.size()), -1);
    std::queue<int> q;
    for (int i = 0; i < g.size(); ++i)
        if (source_mask[static_cast<std::size_t>(i)]) {
            dist[static_cast<std::size_t>(i)] = 0;
            q.push(i);
        }
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (const auto& a : g.neighbors(x))
            if (dist[static_cast<std::size_t>(a.other)] < 0) {
                dist[static_cast<std::size_t>(a.other)] = dist[static_cast<std::size_t>(x)] + 1;
                q.push(a.other);
            }
    }
    return dist;
}

}  // namespace graphpot
