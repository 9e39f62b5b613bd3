#include "graphpot/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphpot/errors.hpp"

namespace graphpot {

PowerLawFit fit_power_law(const std::vector<int>& levels, const std::vector<double>& values) {
    if (levels.size() != values.size() || levels.size() < 3)
        throw DomainError("power-law fit needs at least 3 (level, value) pairs");

    const std::size_t n = levels.size();
    const std::size_t tail = std::min<std::size_t>(n, 5);
    const std::size_t off = n - tail;

    double scale = 0.0;
    for (std::size_t i = off; i < n; ++i) scale += std::abs(values[i]);
    scale = std::max(scale / static_cast<double>(tail), 1e-300);

    // Linear LSQ in (limit, a) for fixed decay exponent b.
    auto solve_for = [&](double b) {
        double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
        for (std::size_t i = off; i < n; ++i) {
            double x = std::pow(static_cast<double>(levels[i]), -b);
            double y = values[i];
            s11 += 1;
            s1x += x;
            sxx += x * x;
            s1y += y;
            sxy += x * y;
        }
        double det = s11 * sxx - s1x * s1x;
        PowerLawFit f;
        f.exponent = b;
        if (std::abs(det) < 1e-14 * (s11 * sxx + 1e-300)) {
            f.limit = s1y / s11;
            f.coefficient = 0.0;
        } else {
            f.limit = (s1y * sxx - sxy * s1x) / det;
            f.coefficient = (s11 * sxy - s1x * s1y) / det;
        }
        double sse = 0.0;
        for (std::size_t i = off; i < n; ++i) {
            double r = values[i] -
                       (f.limit + f.coefficient * std::pow(static_cast<double>(levels[i]), -b));
            sse += r * r;
        }
        f.residual_rel = std::sqrt(sse / static_cast<double>(tail)) / scale;
        return f;
    };

    // Log grid over decay exponents, then a local continuous refinement.
    const double b_min = 0.05, b_max = 14.0;
    const int grid = 80;
    PowerLawFit best;
    best.residual_rel = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 0; k <= grid; ++k) {
        double b = b_min * std::pow(b_max / b_min, static_cast<double>(k) / grid);
        PowerLawFit f = solve_for(b);
        if (f.residual_rel < best.residual_rel) {
            best = f;
            best_k = k;
        }
    }
    double lo = b_min * std::pow(b_max / b_min, std::max(0, best_k - 1) / static_cast<double>(grid));
    double hi = b_min * std::pow(b_max / b_min, std::min(grid, best_k + 1) / static_cast<double>(grid));
    for (int it = 0; it < 80; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (solve_for(m1).residual_rel <= solve_for(m2).residual_rel)
            hi = m2;
        else
            lo = m1;
    }
    PowerLawFit refined = solve_for(0.5 * (lo + hi));
    if (refined.residual_rel < best.residual_rel) best = refined;
    return best;
}

}  // namespace graphpot
