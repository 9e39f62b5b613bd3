#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "graphpot/graph.hpp"

namespace graphpot {

struct SolverConfig {
    double grad_tol = 1e-10;      // residual target, mu-weighted max norm
    int max_iter = 10000;
    double hessian_floor = 1e-12; // floor for the per-edge Hessian weight
    double p = 2.0;               // p >= 2
    bool trace = false;           // record per-iteration energy/residual
};

struct TraceRow {
    int iter;
    double energy;
    double residual;
};

// A vertex function together with its energy and the max-norm residual of the
// discrete p-Laplacian over the vertices it was solved on. Values follow the
// graph's dense vertex order.
struct Potential {
    std::vector<double> values;
    double energy = 0.0;
    double residual = 0.0;
    std::vector<TraceRow> trace;
};

inline double value_at(const WeightedGraph& g, const Potential& phi, VertexId id) {
    return phi.values[static_cast<std::size_t>(g.index_of(id))];
}

// Dirichlet data: solve for the interior, hold the listed boundary values
// fixed. The problem must be closed (interior neighbors lie in interior or
// boundary) and every interior component must reach the boundary.
struct DirichletProblem {
    VertexSet interior;
    std::vector<std::pair<VertexId, double>> boundary;  // sorted by id, unique

    void validate(const WeightedGraph& g) const;
};

// Edge coefficient of the p-Dirichlet energy: w * ell^(1-p), so a unit edge
// contributes w*ell*(|du|/ell)^p.
inline double edge_conductance(double w, double ell, double p) {
    return w * std::pow(ell, 1.0 - p);
}

// Sum over edges of c_e |u - v|^p. values must cover every vertex.
double p_energy(const WeightedGraph& g, std::span<const double> values, double p);
inline double p_energy(const WeightedGraph& g, const Potential& phi, double p) {
    return p_energy(g, std::span<const double>(phi.values), p);
}

// (1/mu(x)) * sum over neighbors of c_e |u(y)-u(x)|^(p-2) (u(y)-u(x)).
double p_laplacian(const WeightedGraph& g, std::span<const double> values, double p, int x);

// Max |p_laplacian| over the masked vertices.
double max_residual(const WeightedGraph& g, std::span<const double> values, double p,
                    const std::vector<char>& mask);

// Unique minimizer of the p-energy among functions with the given boundary
// values. p = 2 is an exact sparse linear solve; p > 2 runs damped Newton with
// floored edge Hessian weights, Armijo backtracking and a gradient-descent
// fallback, warm-started from the p = 2 solution (or from warm_start).
Potential solve_dirichlet(const WeightedGraph& g, const DirichletProblem& prob,
                          const SolverConfig& cfg,
                          const std::vector<double>* warm_start = nullptr);

// True when the discrete p-Laplacian is >= -tol at every vertex of region.
bool verify_subharmonic(const WeightedGraph& g, std::span<const double> values, double p,
                        const VertexSet& region, double tol = 1e-8);

}  // namespace graphpot
