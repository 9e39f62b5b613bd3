#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "graphpot/graph.hpp"

namespace graphpot {

// Concrete infinite graph families observed through nested finite truncations.
//
//   lattice(m)       integer lattice Z^m, truncated to sup-norm boxes [-L,L]^m
//   regular_tree(d)  infinite d-regular tree rooted at 0 (root has d children,
//                    every other vertex d-1), truncated at depth L
//   cylinder(c)      Z x C_c, truncated to ring indices -L..L
//   model_end(b)     rooted tree where every level-k vertex has b[k] children
//                    (the last entry of b repeats); b = {2} is the binary tree
//   glue(ends)       tree-shaped end families attached to a hub clique with
//                    one hub vertex per end
//
// All vertices get measure mu, all edges conductance w and length ell from the
// spec (defaults 1).
struct FamilySpec {
    enum class Kind { lattice, regular_tree, cylinder, model_end, glue };

    Kind kind = Kind::lattice;
    int dim = 1;                   // lattice: m in 1..4
    int degree = 3;                // regular_tree: >= 3
    int circumference = 3;         // cylinder: >= 3
    std::vector<int> branching;    // model_end: nonempty, entries >= 1
    std::vector<FamilySpec> ends;  // glue: >= 1 tree-shaped end specs

    double mu = 1.0;
    double w = 1.0;
    double ell = 1.0;

    static FamilySpec lattice_spec(int m);
    static FamilySpec regular_tree_spec(int degree);
    static FamilySpec cylinder_spec(int circumference);
    static FamilySpec model_end_spec(std::vector<int> branching);
    static FamilySpec binary_tree_spec() { return model_end_spec({2}); }
    static FamilySpec glue_spec(std::vector<FamilySpec> ends);

    void validate() const;  // throws ConfigError
    std::string describe() const;
};

// A finite truncation of an infinite family. The horizon is the frontier
// where the cut happened; it separates this truncation from every deeper one.
struct Truncation {
    WeightedGraph graph;
    int level = 0;
    VertexSet horizon;
};

// Level-th truncation, level >= 1. Deterministic; truncations of the same
// spec are nested (vertex ids and edge attributes agree on the overlap).
Truncation generate(const FamilySpec& spec, int level);

// Canonical base vertex: lattice origin, tree root, cylinder ring-0 vertex 0,
// first hub vertex of a glue.
VertexId origin_vertex(const FamilySpec& spec);

// The hub clique of a glue spec (one vertex per glued end).
VertexSet hub_vertices(const FamilySpec& spec);

// For a glue of exactly two structurally identical ends: the involutive
// automorphism exchanging the two sides. Keyed by vertex id.
std::unordered_map<VertexId, VertexId> glue_swap_map(const FamilySpec& spec,
                                                     const Truncation& t);

}  // namespace graphpot
