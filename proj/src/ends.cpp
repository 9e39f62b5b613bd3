#include "graphpot/ends.hpp"

#include <algorithm>
#include <limits>

namespace graphpot {

ComplementSplit split_complement(const Truncation& t, const VertexSet& K) {
    const auto& g = t.graph;
    if (K.empty()) throw DomainError("compact set K must be nonempty");
    auto k_mask = g.mask_of(K);
    auto horizon_mask = g.mask_of(t.horizon);
    for (VertexId v : K)
        if (horizon_mask[static_cast<std::size_t>(g.index_of(v))])
            throw DomainError("compact set K must be disjoint from the horizon");

    std::vector<int> comp(static_cast<std::size_t>(g.size()), -1);
    int n_comp = 0;
    for (int s = 0; s < g.size(); ++s) {
        if (k_mask[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] >= 0)
            continue;
        std::vector<int> stack = {s};
        comp[static_cast<std::size_t>(s)] = n_comp;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (const auto& a : g.neighbors(x)) {
                if (k_mask[static_cast<std::size_t>(a.other)]) continue;
                if (comp[static_cast<std::size_t>(a.other)] < 0) {
                    comp[static_cast<std::size_t>(a.other)] = n_comp;
                    stack.push_back(a.other);
                }
            }
        }
        ++n_comp;
    }

    std::vector<VertexSet> members(static_cast<std::size_t>(n_comp));
    std::vector<char> touches(static_cast<std::size_t>(n_comp), 0);
    for (int i = 0; i < g.size(); ++i) {
        int c = comp[static_cast<std::size_t>(i)];
        if (c < 0) continue;
        members[static_cast<std::size_t>(c)].push_back(g.id_of(i));
        if (horizon_mask[static_cast<std::size_t>(i)]) touches[static_cast<std::size_t>(c)] = 1;
    }

    ComplementSplit out;
    for (int c = 0; c < n_comp; ++c) {
        VertexSet component = normalized(std::move(members[static_cast<std::size_t>(c)]));
        if (!touches[static_cast<std::size_t>(c)]) {
            out.bounded.push_back(std::move(component));
            continue;
        }
        End e;
        e.compact = K;
        VertexId rep = std::numeric_limits<VertexId>::max();
        VertexSet boundary;
        for (VertexId v : component) {
            bool adj_k = false;
            for (const auto& a : g.neighbors(g.index_of(v)))
                if (k_mask[static_cast<std::size_t>(a.other)]) {
                    adj_k = true;
                    boundary.push_back(g.id_of(a.other));
                }
            if (adj_k) rep = std::min(rep, v);
        }
        e.component = std::move(component);
        e.boundary = normalized(std::move(boundary));
        e.representative = rep;
        out.ends.push_back(std::move(e));
    }
    std::sort(out.ends.begin(), out.ends.end(),
              [](const End& a, const End& b) { return a.representative < b.representative; });
    return out;
}

std::vector<End> end_decomposition(const Truncation& t, const VertexSet& K) {
    return split_complement(t, K).ends;
}

End find_end(const Truncation& t, const VertexSet& K, VertexId representative) {
    for (auto& e : end_decomposition(t, K))
        if (set_contains(e.component, representative)) return e;
    throw DomainError("no end contains representative " + std::to_string(representative));
}

DoubledEnd double_of_end(const Truncation& parent, const End& e) {
    const auto& g = parent.graph;
    auto comp_mask = g.mask_of(e.component);
    auto bdy_mask = g.mask_of(e.boundary);

    WeightedGraph::Builder b;
    // Seam first, then copy A, then copy B, each in parent dense order.
    for (int i = 0; i < g.size(); ++i)
        if (bdy_mask[static_cast<std::size_t>(i)]) b.add_vertex(g.id_of(i), 2.0 * g.mu(i));
    for (int i = 0; i < g.size(); ++i)
        if (comp_mask[static_cast<std::size_t>(i)]) b.add_vertex(g.id_of(i), g.mu(i));
    for (int i = 0; i < g.size(); ++i)
        if (comp_mask[static_cast<std::size_t>(i)])
            b.add_vertex(g.id_of(i) + kDoubleCopyOffset, g.mu(i));

    for (const auto& ed : g.edges()) {
        bool uc = comp_mask[static_cast<std::size_t>(ed.u)],
             vc = comp_mask[static_cast<std::size_t>(ed.v)];
        bool ub = bdy_mask[static_cast<std::size_t>(ed.u)],
             vb = bdy_mask[static_cast<std::size_t>(ed.v)];
        VertexId u = g.id_of(ed.u), v = g.id_of(ed.v);
        if (uc && vc) {
            b.add_edge(u, v, ed.w, ed.ell);
            b.add_edge(u + kDoubleCopyOffset, v + kDoubleCopyOffset, ed.w, ed.ell);
        } else if (ub && vc) {
            b.add_edge(u, v, ed.w, ed.ell);
            b.add_edge(u, v + kDoubleCopyOffset, ed.w, ed.ell);
        } else if (uc && vb) {
            b.add_edge(u, v, ed.w, ed.ell);
            b.add_edge(u + kDoubleCopyOffset, v, ed.w, ed.ell);
        } else if (ub && vb) {
            b.add_edge(u, v, ed.w, ed.ell);
        }
    }

    DoubledEnd out;
    out.seam = e.boundary;
    VertexSet horizon;
    for (VertexId h : set_intersection(e.component, parent.horizon)) {
        horizon.push_back(h);
        horizon.push_back(h + kDoubleCopyOffset);
    }
    out.truncation = {std::move(b).build(), parent.level, normalized(std::move(horizon))};
    for (VertexId s : e.boundary) out.mirror[s] = s;
    for (VertexId c : e.component) {
        out.mirror[c] = c + kDoubleCopyOffset;
        out.mirror[c + kDoubleCopyOffset] = c;
    }
    return out;
}

Truncation end_subgraph(const Truncation& parent, const End& e) {
    const auto& g = parent.graph;
    auto comp_mask = g.mask_of(e.component);
    auto bdy_mask = g.mask_of(e.boundary);
    WeightedGraph::Builder b;
    for (int i = 0; i < g.size(); ++i)
        if (comp_mask[static_cast<std::size_t>(i)] || bdy_mask[static_cast<std::size_t>(i)])
            b.add_vertex(g.id_of(i), g.mu(i));
    for (const auto& ed : g.edges()) {
        bool u_in = comp_mask[static_cast<std::size_t>(ed.u)] || bdy_mask[static_cast<std::size_t>(ed.u)];
        bool v_in = comp_mask[static_cast<std::size_t>(ed.v)] || bdy_mask[static_cast<std::size_t>(ed.v)];
        if (u_in && v_in) b.add_edge(g.id_of(ed.u), g.id_of(ed.v), ed.w, ed.ell);
    }
    return {std::move(b).build(), parent.level, set_intersection(e.component, parent.horizon)};
}

}  // namespace graphpot
