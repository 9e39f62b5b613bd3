#pragma once

#include <unordered_map>
#include <vector>

#include "graphpot/families.hpp"
#include "graphpot/graph.hpp"

namespace graphpot {

// One unbounded-direction component of the complement of a compact set K:
// a connected component of graph \ K that touches the truncation horizon.
struct End {
    VertexSet compact;    // K
    VertexSet component;  // the complement component
    VertexSet boundary;   // vertices of K adjacent to the component
    // Smallest-id component vertex adjacent to the boundary. Stable across
    // deepening truncations, used to track the same end between levels.
    VertexId representative = 0;
};

struct ComplementSplit {
    std::vector<End> ends;             // components touching the horizon
    std::vector<VertexSet> bounded;    // components that do not
};

// Splits graph \ K into horizon-touching ends and bounded components.
// K must be nonempty and disjoint from the horizon.
ComplementSplit split_complement(const Truncation& t, const VertexSet& K);

// Just the ends, sorted by representative.
std::vector<End> end_decomposition(const Truncation& t, const VertexSet& K);

// The end whose component contains the given representative vertex.
End find_end(const Truncation& t, const VertexSet& K, VertexId representative);

// Copy-B vertices of a double get their parent id plus this offset.
inline constexpr VertexId kDoubleCopyOffset = VertexId{1} << 40;

// Two copies of component + boundary glued along the boundary. Identified
// boundary vertices keep their id, carry twice the measure and the union of
// both copies' incident edges; the horizon is the union of both copies'
// horizon parts.
struct DoubledEnd {
    Truncation truncation;                          // graph, parent level, doubled horizon
    VertexSet seam;                                 // identified boundary ids
    std::unordered_map<VertexId, VertexId> mirror;  // the involutive automorphism
};

DoubledEnd double_of_end(const Truncation& parent, const End& e);

// Induced subgraph on component + boundary (the closure of the end), with
// horizon = component's share of the parent horizon.
Truncation end_subgraph(const Truncation& parent, const End& e);

}  // namespace graphpot
