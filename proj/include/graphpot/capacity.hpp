#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphpot/ends.hpp"
#include "graphpot/families.hpp"
#include "graphpot/solver.hpp"

namespace graphpot {

// Condenser (K, ambient truncation): test functions are 1 on inner and 0 on
// grounded (default: the horizon, standing in for compact support).
struct Condenser {
    VertexSet inner;
    Truncation ambient;
    VertexSet grounded;
};

Condenser make_condenser(Truncation ambient, VertexSet inner);

// Energy of the equilibrium potential (1 on inner, 0 on grounded) together
// with the potential itself. With an empty grounded set the constant 1 is
// admissible and the capacity is 0.
std::pair<double, Potential> capacity(const Condenser& c, double p, const SolverConfig& cfg = {});

struct CapacitySequence {
    std::vector<int> levels;
    std::vector<double> values;        // non-increasing up to 1e-9 slack
    double fitted_limit = 0.0;         // power-law extrapolation, clamped at 0
    double fit_exponent = 0.0;
    double fit_residual_rel = 0.0;
};

// Per-level capacities of (K, truncation(level)) grounded at the horizon.
// Verifies monotone non-increase; fits the tail to limit + a*level^-b.
CapacitySequence capacity_sequence(const FamilySpec& spec, const VertexSet& K, double p,
                                   const std::vector<int>& levels, const SolverConfig& cfg = {});

// Same, for one end of K: ambient is the end closure, inner its boundary,
// grounded the end's share of the horizon. The end is tracked across levels
// by its representative.
CapacitySequence end_capacity_sequence(const FamilySpec& spec, const VertexSet& K,
                                       VertexId representative, double p,
                                       const std::vector<int>& levels,
                                       const SolverConfig& cfg = {});

// Same, on the double of that end, grounded at the doubled horizon with the
// seam as inner set.
CapacitySequence double_capacity_sequence(const FamilySpec& spec, const VertexSet& K,
                                          VertexId representative, double p,
                                          const std::vector<int>& levels,
                                          const SolverConfig& cfg = {});

// Generic core: condensers indexed by level.
CapacitySequence capacity_sequence_via(const std::function<Condenser(int)>& condenser_at,
                                       const std::vector<int>& levels, double p,
                                       const SolverConfig& cfg);

enum class Verdict { parabolic, hyperbolic, inconclusive };
std::string to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::inconclusive;
    CapacitySequence evidence;
    double threshold = 1e-3;
};

// Hyperbolic when the extrapolated capacity stays above the threshold,
// parabolic when it decays below, inconclusive when the fit is unstable
// (relative fit residual > 0.1). Needs >= 3 levels.
Classification classify(const CapacitySequence& seq, double threshold = 1e-3);

struct PoincareWitness {
    Potential v;
    int level = 0;
    Truncation ambient;
};

// Searches the per-level equilibrium potentials for a compactly supported v
// with ||v||_{L^p(K)} > C ||grad v||_{L^p}. Returns the first witness found,
// or nothing at the explored depths.
std::optional<PoincareWitness> poincare_witness(const FamilySpec& spec, const VertexSet& K,
                                                double p, double C,
                                                const std::vector<int>& levels,
                                                const SolverConfig& cfg = {});

}  // namespace graphpot
