#pragma once

#include <vector>

namespace graphpot {

// Least-squares fit of values[i] ~ limit + a * levels[i]^(-b) over the tail
// of a level sequence, with b chosen from a log grid. Used to extrapolate
// capacity sequences and end-potential statistics to the infinite graph.
struct PowerLawFit {
    double limit = 0.0;
    double coefficient = 0.0;
    double exponent = 0.0;      // the fitted b
    double residual_rel = 0.0;  // RMS misfit over the tail, relative scale
};

PowerLawFit fit_power_law(const std::vector<int>& levels, const std::vector<double>& values);

}  // namespace graphpot
