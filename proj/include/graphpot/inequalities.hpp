#pragma once

#include <optional>
#include <vector>

#include "graphpot/families.hpp"
#include "graphpot/metric.hpp"
#include "graphpot/solver.hpp"

namespace graphpot {

// Parameters of an L^{q,p} inequality S ||phi||_q <= ||grad phi||_p.
struct SobolevParams {
    double p = 2.0;
    double q = 4.0;
    double S = 0.0;
    std::optional<int> m;  // nominal dimension

    void validate() const;  // q > p >= 2, S >= 0, and 1/p - 1/q <= 1/m when m given
};

struct SearchOptions {
    int restarts = 8;
    unsigned long long seed = 12345;
    int max_iters = 400;
};

// Vertex-measure s-norm (sum mu |v|^s)^(1/s).
double lp_norm(const WeightedGraph& g, std::span<const double> values, double s);
// Edge-energy norm (p_energy)^(1/p).
double grad_lp_norm(const WeightedGraph& g, std::span<const double> values, double p);
// ||grad phi||_p / ||phi||_q; throws DomainError on phi == 0.
double sobolev_quotient(const WeightedGraph& g, std::span<const double> values, double p,
                        double q);
// p-Rayleigh quotient of a single function: p_energy / ||phi||_p^p.
double rayleigh_quotient(const WeightedGraph& g, std::span<const double> values, double p);

struct SobolevEstimate {
    double value = 0.0;
    Potential minimizer;  // certifies the value: recomputing the quotient reproduces it
};

// Upper estimate of the best constant of the truncation over functions
// vanishing on the horizon: min quotient over tents, equilibrium potentials,
// refined random starts and any extra candidates. Non-increasing across
// nested truncations when chained through sobolev_trend.
SobolevEstimate sobolev_upper_bound(const Truncation& t, double p, double q,
                                    const SearchOptions& opts = {},
                                    const std::vector<std::vector<double>>* extra = nullptr);

// Per-level estimates with the previous level's minimizer injected as a
// candidate (extended by zero), which makes the sequence non-increasing.
std::vector<double> sobolev_trend(const FamilySpec& spec, const std::vector<int>& levels,
                                  double p, double q, const SearchOptions& opts = {});

// Smallest p-Rayleigh quotient over functions vanishing outside region.
// Exact generalized eigensolve for p = 2; seeded multistart search for p > 2.
double rayleigh_lambda(const Truncation& t, const VertexSet& region, double p,
                       const SearchOptions& opts = {});

struct RayleighResult {
    double value = 0.0;
    std::vector<double> minimizer;  // full-graph vector, zero outside region
};
RayleighResult rayleigh_minimize(const Truncation& t, const VertexSet& region, double p,
                                 const SearchOptions& opts = {});

// vol(region)^((q-p)/q) * lambda(region) >= S_used^p, with S_used tightened by
// the Rayleigh minimizer's own Sobolev quotient so both sides range over the
// same admissible class.
struct LambdaVolumeReport {
    double lambda = 0.0;
    double vol = 0.0;
    double lhs = 0.0;
    double s_supplied = 0.0;
    double s_used = 0.0;
    double rhs = 0.0;
    bool pass = false;
};
LambdaVolumeReport check_lambda_volume_lower(const Truncation& t, const VertexSet& region,
                                             double p, double q, double S, double tol = 1e-9,
                                             const SearchOptions& opts = {});

// Explicit cone test function phi = R - d(x, x0) on the ball, and the bound
// lambda(B_R) <= 2^p vol(B_R) / (R^p vol(B_{R/2})).
struct BallQuotientReport {
    double R = 0.0;
    double lambda = 0.0;
    double test_quotient = 0.0;
    double bound = 0.0;
    double cone_energy = 0.0;      // ||grad phi||_p^p
    double cone_mass_full = 0.0;   // sum over B_R of mu phi^p
    double cone_mass_half = 0.0;   // sum over B_{R/2} of mu phi^p
    double vol_ball = 0.0;
    double vol_half = 0.0;
    bool pass = false;
};
BallQuotientReport lambda_ball_upper(const Truncation& t, VertexId x0, double R, double p,
                                     double tol = 1e-9, const SearchOptions& opts = {});

// Closed forms from the iterated volume-doubling argument.
struct VolumeGrowthConstants {
    double alpha = 0.0;      // q / (2q - p)
    double alpha_bar = 0.0;  // q (2q - p) / (q - p)^2
    double C1 = 0.0;         // 2^(-p alpha_bar) (2^-p S^p)^(q/(q-p))
    double C2 = 0.0;         // p q / (q - p)
};
VolumeGrowthConstants volume_growth_constants(double p, double q, double S);

struct VolumeGrowthRow {
    double R = 0.0;
    double vol = 0.0;
    double bound = 0.0;             // C1 R^C2
    double elementary_bound = 0.0;  // (S vol(B_1)^(1/q) / 4)^p R^p
    bool pass = false;
};
struct VolumeGrowthReport {
    VolumeGrowthConstants consts;
    double elementary_C = 0.0;
    std::vector<VolumeGrowthRow> rows;
    bool all_pass = true;
    std::optional<double> failing_radius;
};
VolumeGrowthReport volume_growth_check(const Truncation& t, VertexId x0,
                                       const std::vector<double>& radii,
                                       const VolumeGrowthConstants& consts, double S, double p,
                                       double q, double tol = 1e-9);

// Cutoff gluing of an inner (core + collar) and an outer Sobolev estimate:
// checks ||v||_q <= C1 (||grad v||_p + ||v||_{L^p(collar region)}) over seeded
// random and structured candidates. The inner/outer constants are tightened
// by the split candidates themselves, so a ratio above 1 signals a bug.
struct GlueReport {
    double s_inner = 0.0;
    double s_outer = 0.0;
    double grad_rho_max = 0.0;   // max |d rho| / ell over edges
    double edge_density = 0.0;   // max incident edge volume / mu over the collar
    double c1 = 0.0;
    double max_ratio = 0.0;
    int trials = 0;
    bool vacuous = false;        // outer class degenerate at this depth
    std::vector<double> ratios;  // one per (nonzero) trial, in trial order
};
GlueReport sobolev_glue_check(const Truncation& t, const VertexSet& core, int collar_width,
                              int trials, double p, double q, const SearchOptions& opts = {});

// Schrodinger data: a nonnegative vertex potential (dense order) and the
// coupling H.
struct SchrodingerSpec {
    std::vector<double> potential;
    double H = 1.0;

    static SchrodingerSpec uniform(const WeightedGraph& g, double q_value, double H);
    void validate(const WeightedGraph& g) const;
};

// Bottom of the quadratic form (energy minus H * potential mass) over the
// measure mass, among functions vanishing on the horizon. May be negative.
double schrodinger_bottom(const Truncation& t, const SchrodingerSpec& spec);

// Spectral-hypothesis gate: H must exceed p^2 / (4(p-1)).
bool spectral_gate_admits(double H, double p);
void require_spectral_gate(double H, double p);  // throws DomainError when rejected

}  // namespace graphpot
