#pragma once

#include <vector>

#include "graphpot/families.hpp"
#include "graphpot/graph.hpp"

namespace graphpot {

// Shortest-path distances from src (dense index) using edge lengths.
std::vector<double> shortest_paths(const WeightedGraph& g, int src);

// Closed metric ball of radius R around x0, using edge lengths. Throws
// TruncationEscape when some horizon vertex lies strictly inside the ball --
// the ball then is not faithful to the infinite graph and the caller must
// deepen the truncation.
VertexSet ball(const Truncation& t, VertexId x0, double R);

// Hop distance (unit edge count) from a vertex set; -1 where unreachable.
std::vector<int> hop_distance(const WeightedGraph& g, const std::vector<char>& source_mask);

}  // namespace graphpot
