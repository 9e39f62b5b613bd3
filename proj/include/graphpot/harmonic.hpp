#pragma once

#include <vector>

#include "graphpot/capacity.hpp"
#include "graphpot/ends.hpp"
#include "graphpot/solver.hpp"

namespace graphpot {

// Equilibrium-style potential of one end across deepening truncations:
// h = 1 on the end boundary, h = 0 on the end's share of the horizon.
// The deepest solution approximates the limit function; per-level statistics
// and their power-law extrapolations witness its behavior at infinity.
struct EndPotentialResult {
    Potential h;        // deepest-level solution on the end closure
    Truncation domain;  // deepest-level end subgraph
    End end;            // deepest-level end

    std::vector<int> levels;
    std::vector<double> energies;      // non-increasing in level
    std::vector<double> interior_min;  // min over component \ horizon, per level
    std::vector<double> window_min;    // min over the first-level window, per level
    std::vector<double> window_max;    // max over the first-level window, per level
    double window_min_limit = 0.0;     // extrapolated; 1 iff the end is parabolic
    double window_max_limit = 0.0;
    bool monotone_in_level = false;    // h at level i <= h at level i+1 pointwise
    VertexSet window;                  // first-level component minus its horizon
};

EndPotentialResult end_potential(const FamilySpec& spec, const VertexSet& K,
                                 VertexId representative, double p,
                                 const std::vector<int>& levels, const SolverConfig& cfg = {});

// The two-hyperbolic-ends construction: per level solve with boundary 1 on
// the first hyperbolic end's horizon and 0 elsewhere on the horizon. Checks
// ride along as per-level rows.
struct MultiEndRow {
    int level = 0;
    double energy = 0.0;             // full-graph energy of u_t
    double cap_bound = 0.0;          // end-1 equilibrium energy at this level
    double oscillation = 0.0;        // max - min of u_t over the interior
    double sandwich_margin_e1 = 0.0; // min over end 1 of u - (1 - h_1)
    double sandwich_margin_e2 = 0.0; // min over end 2 of h_2 - u
};

struct MultiEndResult {
    Potential u;         // deepest-level solution
    Truncation deepest;
    Classification end1; // classification evidence for the two ends used
    Classification end2;
    VertexId rep1 = 0;
    VertexId rep2 = 0;
    std::vector<MultiEndRow> rows;
};

// Needs >= 2 ends of K with at least two classified hyperbolic over the given
// levels (>= 3 of them); throws DomainError otherwise.
MultiEndResult multi_end_harmonic(const FamilySpec& spec, const VertexSet& K, double p,
                                  const std::vector<int>& levels, const SolverConfig& cfg = {},
                                  double classify_threshold = 1e-3);

}  // namespace graphpot
