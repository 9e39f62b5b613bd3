#include "graphpot/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "graphpot/fit.hpp"

namespace graphpot {
namespace {

Potential solve_end_problem(const Truncation& sub, const End& e, double p,
                            const SolverConfig& cfg) {
    DirichletProblem prob;
    VertexSet fixed = set_union(e.boundary, sub.horizon);
    prob.interior = set_difference(all_vertices(sub.graph), fixed);
    for (VertexId v : fixed)
        prob.boundary.emplace_back(v, set_contains(e.boundary, v) ? 1.0 : 0.0);
    SolverConfig scfg = cfg;
    scfg.p = p;
    return solve_dirichlet(sub.graph, prob, scfg);
}

double min_over(const WeightedGraph& g, const Potential& phi, const VertexSet& s) {
    double m = std::numeric_limits<double>::infinity();
    for (VertexId v : s) m = std::min(m, value_at(g, phi, v));
    return m;
}

double max_over(const WeightedGraph& g, const Potential& phi, const VertexSet& s) {
    double m = -std::numeric_limits<double>::infinity();
    for (VertexId v : s) m = std::max(m, value_at(g, phi, v));
    return m;
}

}  // namespace

EndPotentialResult end_potential(const FamilySpec& spec, const VertexSet& K,
                                 VertexId representative, double p,
                                 const std::vector<int>& levels, const SolverConfig& cfg) {
    if (levels.size() < 3) throw DomainError("end potential needs at least 3 levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1]) throw DomainError("levels must be strictly increasing");

    EndPotentialResult out;
    out.levels = levels;

    // Values of the previous level, extended by zero, for monotonicity.
    std::unordered_map<VertexId, double> prev;
    out.monotone_in_level = true;

    for (std::size_t li = 0; li < levels.size(); ++li) {
        Truncation t = generate(spec, levels[li]);
        End e = find_end(t, K, representative);
        Truncation sub = end_subgraph(t, e);
        Potential h = solve_end_problem(sub, e, p, cfg);

        if (li == 0)
            out.window = set_difference(e.component, sub.horizon);

        for (VertexId b : e.boundary)
            if (std::abs(value_at(sub.graph, h, b) - 1.0) > 1e-12)
                throw ConsistencyError("end potential is not 1 on the end boundary");
        for (double v : h.values)
            if (v < -1e-9 || v > 1.0 + 1e-9)
                throw ConsistencyError("end potential leaves [0, 1]");
        if (!out.energies.empty() && h.energy > out.energies.back() + 1e-9)
            throw ConsistencyError("end-potential energies increased at level " +
                                   std::to_string(levels[li]));
        out.energies.push_back(h.energy);
        out.interior_min.push_back(min_over(sub.graph, h, set_difference(e.component, sub.horizon)));
        out.window_min.push_back(min_over(sub.graph, h, out.window));
        out.window_max.push_back(max_over(sub.graph, h, out.window));

        if (!prev.empty()) {
            for (const auto& [id, val] : prev)
                if (value_at(sub.graph, h, id) < val - 1e-9) out.monotone_in_level = false;
        }
        prev.clear();
        for (int i = 0; i < sub.graph.size(); ++i)
            prev.emplace(sub.graph.id_of(i), h.values[static_cast<std::size_t>(i)]);

        if (li + 1 == levels.size()) {
            out.h = std::move(h);
            out.end = std::move(e);
            out.domain = std::move(sub);
        }
    }

    out.window_min_limit = fit_power_law(out.levels, out.window_min).limit;
    out.window_max_limit = fit_power_law(out.levels, out.window_max).limit;
    return out;
}

MultiEndResult multi_end_harmonic(const FamilySpec& spec, const VertexSet& K, double p,
                                  const std::vector<int>& levels, const SolverConfig& cfg,
                                  double classify_threshold) {
    if (levels.size() < 3) throw DomainError("multi-end construction needs at least 3 levels");

    Truncation first = generate(spec, levels.front());
    auto ends = end_decomposition(first, K);
    if (ends.size() < 2)
        throw DomainError("multi-end construction needs at least 2 ends, found " +
                          std::to_string(ends.size()));

    // Pick the first two hyperbolic ends in representative order.
    std::vector<std::pair<VertexId, Classification>> hyperbolic;
    for (const auto& e : ends) {
        Classification c = classify(
            end_capacity_sequence(spec, K, e.representative, p, levels, cfg), classify_threshold);
        if (c.verdict == Verdict::hyperbolic && hyperbolic.size() < 2)
            hyperbolic.emplace_back(e.representative, std::move(c));
    }
    if (hyperbolic.size() < 2)
        throw DomainError("multi-end construction needs two hyperbolic ends at the explored depth");

    MultiEndResult out;
    out.rep1 = hyperbolic[0].first;
    out.rep2 = hyperbolic[1].first;
    out.end1 = std::move(hyperbolic[0].second);
    out.end2 = std::move(hyperbolic[1].second);

    for (std::size_t li = 0; li < levels.size(); ++li) {
        Truncation t = generate(spec, levels[li]);
        End e1 = find_end(t, K, out.rep1);
        End e2 = find_end(t, K, out.rep2);

        DirichletProblem prob;
        prob.interior = set_difference(all_vertices(t.graph), t.horizon);
        VertexSet one_side = set_intersection(e1.component, t.horizon);
        for (VertexId v : t.horizon)
            prob.boundary.emplace_back(v, set_contains(one_side, v) ? 1.0 : 0.0);
        SolverConfig scfg = cfg;
        scfg.p = p;
        Potential u = solve_dirichlet(t.graph, prob, scfg);

        Truncation sub1 = end_subgraph(t, e1);
        Truncation sub2 = end_subgraph(t, e2);
        Potential h1 = solve_end_problem(sub1, e1, p, cfg);
        Potential h2 = solve_end_problem(sub2, e2, p, cfg);

        MultiEndRow row;
        row.level = levels[li];
        row.energy = u.energy;
        row.cap_bound = h1.energy;

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (VertexId v : prob.interior) {
            double x = value_at(t.graph, u, v);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        row.oscillation = hi - lo;

        double m1 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < sub1.graph.size(); ++i) {
            VertexId id = sub1.graph.id_of(i);
            m1 = std::min(m1, value_at(t.graph, u, id) -
                                  (1.0 - h1.values[static_cast<std::size_t>(i)]));
        }
        row.sandwich_margin_e1 = m1;
        double m2 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < sub2.graph.size(); ++i) {
            VertexId id = sub2.graph.id_of(i);
            m2 = std::min(m2, h2.values[static_cast<std::size_t>(i)] - value_at(t.graph, u, id));
        }
        row.sandwich_margin_e2 = m2;

        for (double v : u.values)
            if (v < -1e-8 || v > 1.0 + 1e-8)
                throw ConsistencyError("two-ended solution leaves [0, 1]");
        if (row.sandwich_margin_e1 < -1e-8 || row.sandwich_margin_e2 < -1e-8)
            throw ConsistencyError("sandwich comparison fails at level " +
                                   std::to_string(row.level));
        if (row.energy > row.cap_bound + 1e-9)
            throw ConsistencyError("energy exceeds its capacity bound at level " +
                                   std::to_string(row.level));
        out.rows.push_back(row);

        if (li + 1 == levels.size()) {
            out.u = std::move(u);
            out.deepest = std::move(t);
        }
    }
    return out;
}

}  // namespace graphpot
