#include "graphpot/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "graphpot/fit.hpp"

namespace graphpot {

Condenser make_condenser(Truncation ambient, VertexSet inner) {
    Condenser c;
    c.grounded = ambient.horizon;
    c.ambient = std::move(ambient);
    c.inner = std::move(inner);
    return c;
}

std::pair<double, Potential> capacity(const Condenser& c, double p, const SolverConfig& cfg) {
    const auto& g = c.ambient.graph;
    if (c.inner.empty()) throw DomainError("condenser inner set must be nonempty");
    if (!set_intersection(c.inner, c.grounded).empty())
        throw DomainError("condenser inner and grounded sets must be disjoint");

    if (c.grounded.empty()) {
        // Constants are admissible test functions; nothing to separate from.
        Potential h;
        h.values.assign(static_cast<std::size_t>(g.size()), 1.0);
        h.energy = 0.0;
        h.residual = 0.0;
        return {0.0, std::move(h)};
    }

    DirichletProblem prob;
    VertexSet fixed = set_union(c.inner, c.grounded);
    prob.interior = set_difference(all_vertices(g), fixed);
    for (VertexId v : fixed)
        prob.boundary.emplace_back(v, set_contains(c.inner, v) ? 1.0 : 0.0);

    SolverConfig scfg = cfg;
    scfg.p = p;
    Potential h = solve_dirichlet(g, prob, scfg);
    return {h.energy, std::move(h)};
}

CapacitySequence capacity_sequence_via(const std::function<Condenser(int)>& condenser_at,
                                       const std::vector<int>& levels, double p,
                                       const SolverConfig& cfg) {
    if (levels.size() < 2) throw DomainError("capacity sequence needs at least 2 levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1]) throw DomainError("levels must be strictly increasing");

    // Level solves are independent; fan them out.
    std::vector<std::future<double>> futs;
    futs.reserve(levels.size());
    for (int level : levels)
        futs.push_back(std::async(std::launch::async, [&condenser_at, level, p, &cfg] {
            return capacity(condenser_at(level), p, cfg).first;
        }));

    CapacitySequence seq;
    seq.levels = levels;
    for (auto& f : futs) seq.values.push_back(f.get());

    for (std::size_t i = 1; i < seq.values.size(); ++i)
        if (seq.values[i] > seq.values[i - 1] + 1e-9)
            throw ConsistencyError("capacity sequence not non-increasing at level " +
                                   std::to_string(levels[i]) + ": " +
                                   std::to_string(seq.values[i - 1]) + " -> " +
                                   std::to_string(seq.values[i]));

    if (seq.values.size() >= 3) {
        PowerLawFit fit = fit_power_law(seq.levels, seq.values);
        seq.fitted_limit = std::max(0.0, fit.limit);
        seq.fit_exponent = fit.exponent;
        seq.fit_residual_rel = fit.residual_rel;
    } else {
        seq.fitted_limit = seq.values.back();
    }
    return seq;
}

CapacitySequence capacity_sequence(const FamilySpec& spec, const VertexSet& K, double p,
                                   const std::vector<int>& levels, const SolverConfig& cfg) {
    if (levels.empty()) throw DomainError("no levels given");
    {
        Truncation t0 = generate(spec, levels.front());
        for (VertexId v : K)
            if (!t0.graph.contains(v))
                throw DomainError("K must be contained in the smallest truncation");
        if (!set_intersection(normalized(K), t0.horizon).empty())
            throw DomainError("K must be disjoint from the smallest truncation's horizon");
    }
    auto make = [&spec, K](int level) { return make_condenser(generate(spec, level), K); };
    return capacity_sequence_via(make, levels, p, cfg);
}

CapacitySequence end_capacity_sequence(const FamilySpec& spec, const VertexSet& K,
                                       VertexId representative, double p,
                                       const std::vector<int>& levels, const SolverConfig& cfg) {
    auto make = [&spec, K, representative](int level) {
        Truncation t = generate(spec, level);
        End e = find_end(t, K, representative);
        Truncation sub = end_subgraph(t, e);
        Condenser c;
        c.inner = e.boundary;
        c.grounded = sub.horizon;
        c.ambient = std::move(sub);
        return c;
    };
    return capacity_sequence_via(make, levels, p, cfg);
}

CapacitySequence double_capacity_sequence(const FamilySpec& spec, const VertexSet& K,
                                          VertexId representative, double p,
                                          const std::vector<int>& levels,
                                          const SolverConfig& cfg) {
    auto make = [&spec, K, representative](int level) {
        Truncation t = generate(spec, level);
        End e = find_end(t, K, representative);
        DoubledEnd d = double_of_end(t, e);
        Condenser c;
        c.inner = d.seam;
        c.grounded = d.truncation.horizon;
        c.ambient = std::move(d.truncation);
        return c;
    };
    return capacity_sequence_via(make, levels, p, cfg);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::parabolic: return "parabolic";
        case Verdict::hyperbolic: return "hyperbolic";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Classification classify(const CapacitySequence& seq, double threshold) {
    if (seq.levels.size() < 3) throw DomainError("classification needs at least 3 levels");
    if (threshold <= 0) throw DomainError("classification threshold must be positive");
    Classification c;
    c.evidence = seq;
    c.threshold = threshold;
    if (seq.fit_residual_rel > 0.1)
        c.verdict = Verdict::inconclusive;
    else if (seq.fitted_limit >= threshold)
        c.verdict = Verdict::hyperbolic;
    else
        c.verdict = Verdict::parabolic;
    return c;
}

std::optional<PoincareWitness> poincare_witness(const FamilySpec& spec, const VertexSet& K,
                                                double p, double C,
                                                const std::vector<int>& levels,
                                                const SolverConfig& cfg) {
    if (C < 0) throw DomainError("Poincare constant C must be nonnegative");
    for (int level : levels) {
        Truncation t = generate(spec, level);
        Condenser c = make_condenser(std::move(t), K);
        auto [cap, h] = capacity(c, p, cfg);
        // h = 1 on K and vanishes on the horizon: compactly supported.
        double lhs = std::pow(volume(c.ambient.graph, K), 1.0 / p);
        double rhs = C * std::pow(cap, 1.0 / p);
        if (lhs > rhs) {
            PoincareWitness w;
            w.v = std::move(h);
            w.level = level;
            w.ambient = std::move(c.ambient);
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace graphpot
