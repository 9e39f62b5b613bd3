#include "graphpot/solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>

namespace graphpot {
namespace {

// |d|^(p-2) * d without 0^negative trouble (p >= 2).
double signed_power(double d, double p) {
    if (d == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(d), p - 1.0), d);
}

struct ProblemIndex {
    std::vector<int> free_index;   // dense vertex -> unknown slot, -1 if fixed
    std::vector<int> free_verts;   // unknown slot -> dense vertex
    std::vector<char> interior_mask;
};

ProblemIndex index_problem(const WeightedGraph& g, const DirichletProblem& prob) {
    ProblemIndex ix;
    ix.free_index.assign(static_cast<std::size_t>(g.size()), -1);
    ix.interior_mask.assign(static_cast<std::size_t>(g.size()), 0);
    for (VertexId v : prob.interior) {
        int i = g.index_of(v);
        ix.interior_mask[static_cast<std::size_t>(i)] = 1;
        ix.free_index[static_cast<std::size_t>(i)] = static_cast<int>(ix.free_verts.size());
        ix.free_verts.push_back(i);
    }
    return ix;
}

// Weighted-Laplacian solve with per-edge weights h_e, restricted to the free
// vertices. Returns the free values.
Eigen::VectorXd laplacian_solve(const WeightedGraph& g, const ProblemIndex& ix,
                                const std::vector<double>& edge_weight,
                                const std::vector<double>& fixed_values,
                                const Eigen::VectorXd* rhs_extra) {
    const int nf = static_cast<int>(ix.free_verts.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(g.edge_count()) * 4);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    std::vector<double> diag(static_cast<std::size_t>(nf), 0.0);

    const auto edges = g.edges();
    for (int ei = 0; ei < g.edge_count(); ++ei) {
        const auto& e = edges[static_cast<std::size_t>(ei)];
        double h = edge_weight[static_cast<std::size_t>(ei)];
        int fu = ix.free_index[static_cast<std::size_t>(e.u)];
        int fv = ix.free_index[static_cast<std::size_t>(e.v)];
        if (fu >= 0 && fv >= 0) {
            diag[static_cast<std::size_t>(fu)] += h;
            diag[static_cast<std::size_t>(fv)] += h;
            trip.emplace_back(fu, fv, -h);
            trip.emplace_back(fv, fu, -h);
        } else if (fu >= 0) {
            diag[static_cast<std::size_t>(fu)] += h;
            rhs[fu] += h * fixed_values[static_cast<std::size_t>(e.v)];
        } else if (fv >= 0) {
            diag[static_cast<std::size_t>(fv)] += h;
            rhs[fv] += h * fixed_values[static_cast<std::size_t>(e.u)];
        }
    }
    for (int i = 0; i < nf; ++i) trip.emplace_back(i, i, diag[static_cast<std::size_t>(i)]);

    Eigen::SparseMatrix<double> L(nf, nf);
    L.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(L);
    if (chol.info() != Eigen::Success)
        throw SolverError("sparse factorization failed", std::numeric_limits<double>::quiet_NaN());
    Eigen::VectorXd b = rhs_extra ? Eigen::VectorXd(rhs + *rhs_extra) : rhs;
    Eigen::VectorXd x = chol.solve(b);
    if (chol.info() != Eigen::Success)
        throw SolverError("sparse solve failed", std::numeric_limits<double>::quiet_NaN());
    return x;
}

// Exact minimizer of the energy slice through vertex x: bisection on the
// monotone 1-d derivative, bracketed by the neighbor values.
double exact_slice_min(const WeightedGraph& g, const std::vector<double>& values, double p,
                       int x) {
    double lo = values[static_cast<std::size_t>(x)], hi = lo;
    for (const auto& a : g.neighbors(x)) {
        lo = std::min(lo, values[static_cast<std::size_t>(a.other)]);
        hi = std::max(hi, values[static_cast<std::size_t>(a.other)]);
    }
    auto derivative = [&](double t) {
        double d = 0.0;
        for (const auto& a : g.neighbors(x)) {
            const auto& e = g.edges()[static_cast<std::size_t>(a.edge)];
            d += edge_conductance(e.w, e.ell, p) *
                 signed_power(t - values[static_cast<std::size_t>(a.other)], p);
        }
        return d;
    };
    for (int it = 0; it < 120 && hi - lo > 1e-17 * (1.0 + std::abs(hi) + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (derivative(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Gauss-Seidel tail for p > 2: flat (third-order) directions of the energy,
// e.g. hanging interior vertices, sit below what residual-based stopping can
// certify; exact coordinate solves contract them to the unique minimizer.
void polish(const WeightedGraph& g, const ProblemIndex& ix, std::vector<double>& values,
            double p) {
    double scale = 1.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    for (int sweep = 0; sweep < 60; ++sweep) {
        double max_change = 0.0;
        for (int x : ix.free_verts) {
            double nv = exact_slice_min(g, values, p, x);
            max_change = std::max(max_change, std::abs(nv - values[static_cast<std::size_t>(x)]));
            values[static_cast<std::size_t>(x)] = nv;
        }
        if (max_change < 1e-14 * scale) break;
    }
}

// Energy gradient with respect to the free values.
Eigen::VectorXd energy_gradient(const WeightedGraph& g, const ProblemIndex& ix,
                                const std::vector<double>& values, double p) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<int>(ix.free_verts.size()));
    const auto edges = g.edges();
    for (const auto& e : edges) {
        double c = edge_conductance(e.w, e.ell, p);
        double d = values[static_cast<std::size_t>(e.u)] - values[static_cast<std::size_t>(e.v)];
        double t = p * c * signed_power(d, p);
        int fu = ix.free_index[static_cast<std::size_t>(e.u)];
        int fv = ix.free_index[static_cast<std::size_t>(e.v)];
        if (fu >= 0) grad[fu] += t;
        if (fv >= 0) grad[fv] -= t;
    }
    return grad;
}

}  // namespace

void DirichletProblem::validate(const WeightedGraph& g) const {
    if (boundary.empty()) throw DomainError("Dirichlet problem needs a nonempty boundary");
    std::vector<char> is_bdy(static_cast<std::size_t>(g.size()), 0);
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        if (i > 0 && boundary[i].first <= boundary[i - 1].first)
            throw DomainError("boundary values must be sorted by vertex id and unique");
        is_bdy[static_cast<std::size_t>(g.index_of(boundary[i].first))] = 1;
    }
    auto interior_mask = g.mask_of(interior);
    for (VertexId v : interior)
        if (is_bdy[static_cast<std::size_t>(g.index_of(v))])
            throw DomainError("interior and boundary overlap at vertex " + std::to_string(v));

    // Closed: interior neighbors lie in interior or boundary; and every
    // interior component must reach the boundary.
    std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
    for (VertexId v : interior) {
        int s = g.index_of(v);
        if (seen[static_cast<std::size_t>(s)]) continue;
        std::vector<int> stack = {s};
        seen[static_cast<std::size_t>(s)] = 1;
        bool touches_boundary = false;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (const auto& a : g.neighbors(x)) {
                if (is_bdy[static_cast<std::size_t>(a.other)]) {
                    touches_boundary = true;
                } else if (interior_mask[static_cast<std::size_t>(a.other)]) {
                    if (!seen[static_cast<std::size_t>(a.other)]) {
                        seen[static_cast<std::size_t>(a.other)] = 1;
                        stack.push_back(a.other);
                    }
                } else {
                    throw DomainError("Dirichlet problem is not closed at vertex " +
                                      std::to_string(g.id_of(a.other)));
                }
            }
        }
        if (!touches_boundary)
            throw DomainError("ill-posed Dirichlet problem: interior component around vertex " +
                              std::to_string(v) + " has no boundary contact");
    }
}

double p_energy(const WeightedGraph& g, std::span<const double> values, double p) {
    if (p < 2.0) throw DomainError("p must be >= 2");
    if (static_cast<int>(values.size()) != g.size())
        throw DomainError("potential does not cover every vertex");
    double e = 0.0;
    for (const auto& ed : g.edges()) {
        double d = values[static_cast<std::size_t>(ed.u)] - values[static_cast<std::size_t>(ed.v)];
        e += edge_conductance(ed.w, ed.ell, p) * std::pow(std::abs(d), p);
    }
    return e;
}

double p_laplacian(const WeightedGraph& g, std::span<const double> values, double p, int x) {
    if (p < 2.0) throw DomainError("p must be >= 2");
    if (static_cast<int>(values.size()) != g.size())
        throw DomainError("potential does not cover every vertex");
    double acc = 0.0;
    for (const auto& a : g.neighbors(x)) {
        const auto& e = g.edges()[static_cast<std::size_t>(a.edge)];
        double d = values[static_cast<std::size_t>(a.other)] - values[static_cast<std::size_t>(x)];
        acc += edge_conductance(e.w, e.ell, p) * signed_power(d, p);
    }
    return acc / g.mu(x);
}

double max_residual(const WeightedGraph& g, std::span<const double> values, double p,
                    const std::vector<char>& mask) {
    double r = 0.0;
    for (int i = 0; i < g.size(); ++i)
        if (mask[static_cast<std::size_t>(i)])
            r = std::max(r, std::abs(p_laplacian(g, values, p, i)));
    return r;
}

Potential solve_dirichlet(const WeightedGraph& g, const DirichletProblem& prob,
                          const SolverConfig& cfg, const std::vector<double>* warm_start) {
    const double p = cfg.p;
    if (p < 2.0) throw DomainError("p must be >= 2");
    prob.validate(g);

    ProblemIndex ix = index_problem(g, prob);
    const int nf = static_cast<int>(ix.free_verts.size());

    std::vector<double> values(static_cast<std::size_t>(g.size()), 0.0);
    for (const auto& [id, val] : prob.boundary)
        values[static_cast<std::size_t>(g.index_of(id))] = val;

    Potential out;
    auto finish = [&](std::vector<double> vals) {
        out.values = std::move(vals);
        out.energy = p_energy(g, std::span<const double>(out.values), p);
        out.residual = max_residual(g, std::span<const double>(out.values), p, ix.interior_mask);
        return out;
    };

    if (nf == 0) return finish(std::move(values));

    // p = 2 linear solve; also the warm start for p > 2.
    {
        std::vector<double> ew(static_cast<std::size_t>(g.edge_count()));
        for (int ei = 0; ei < g.edge_count(); ++ei) {
            const auto& e = g.edges()[static_cast<std::size_t>(ei)];
            ew[static_cast<std::size_t>(ei)] = edge_conductance(e.w, e.ell, 2.0);
        }
        Eigen::VectorXd x = laplacian_solve(g, ix, ew, values, nullptr);
        for (int i = 0; i < nf; ++i)
            values[static_cast<std::size_t>(ix.free_verts[static_cast<std::size_t>(i)])] = x[i];
    }
    if (warm_start) {
        if (static_cast<int>(warm_start->size()) != g.size())
            throw DomainError("warm start does not cover every vertex");
        for (int v : ix.free_verts)
            values[static_cast<std::size_t>(v)] = (*warm_start)[static_cast<std::size_t>(v)];
    }
    if (p == 2.0 && !warm_start) return finish(std::move(values));

    // Damped Newton on the p-energy.
    double energy = p_energy(g, std::span<const double>(values), p);
    std::vector<double> trial(values);
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        double res = max_residual(g, std::span<const double>(values), p, ix.interior_mask);
        if (cfg.trace) out.trace.push_back({iter, energy, res});
        if (res <= cfg.grad_tol) {
            polish(g, ix, values, p);
            if (max_residual(g, std::span<const double>(values), p, ix.interior_mask) <=
                cfg.grad_tol)
                return finish(std::move(values));
            // polish moved a flat patch; keep iterating from the better point
            energy = p_energy(g, std::span<const double>(values), p);
            continue;
        }

        Eigen::VectorXd grad = energy_gradient(g, ix, values, p);

        std::vector<double> hw(static_cast<std::size_t>(g.edge_count()));
        for (int ei = 0; ei < g.edge_count(); ++ei) {
            const auto& e = g.edges()[static_cast<std::size_t>(ei)];
            double c = edge_conductance(e.w, e.ell, p);
            double d = values[static_cast<std::size_t>(e.u)] - values[static_cast<std::size_t>(e.v)];
            double curv = p * (p - 1.0) * std::pow(std::abs(d), p - 2.0);
            hw[static_cast<std::size_t>(ei)] = c * std::max(curv, cfg.hessian_floor);
        }
        Eigen::VectorXd minus_grad = -grad;
        std::vector<double> zeros(static_cast<std::size_t>(g.size()), 0.0);
        Eigen::VectorXd dir = laplacian_solve(g, ix, hw, zeros, &minus_grad);

        // Floored curvature can blow up the step along flat coordinates; cap
        // it at a multiple of the value range so the line search stays sane.
        double value_range = 1.0;
        for (double v : values) value_range = std::max(value_range, std::abs(v));
        double dmax = dir.cwiseAbs().maxCoeff();
        if (dmax > 10.0 * value_range) dir *= 10.0 * value_range / dmax;

        double slope = grad.dot(dir);
        if (!(slope < 0.0)) {  // not a descent direction; fall back to steepest descent
            dir = minus_grad;
            slope = grad.dot(dir);
            if (!(slope < 0.0)) return finish(std::move(values));  // stationary
        }

        // Armijo backtracking.
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (int i = 0; i < nf; ++i) {
                int v = ix.free_verts[static_cast<std::size_t>(i)];
                trial[static_cast<std::size_t>(v)] = values[static_cast<std::size_t>(v)] + step * dir[i];
            }
            double trial_energy = p_energy(g, std::span<const double>(trial), p);
            if (trial_energy <= energy + 1e-4 * step * slope) {
                values = trial;
                energy = trial_energy;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            polish(g, ix, values, p);
            double final_res = max_residual(g, std::span<const double>(values), p, ix.interior_mask);
            if (final_res <= cfg.grad_tol) return finish(std::move(values));
            throw SolverError("line search stalled at residual " + std::to_string(final_res),
                              final_res);
        }

        // One exact coordinate sweep per iteration knocks out the flat
        // directions the quadratic model cannot see.
        for (int x : ix.free_verts)
            values[static_cast<std::size_t>(x)] = exact_slice_min(g, values, p, x);
        energy = p_energy(g, std::span<const double>(values), p);
    }
    double final_res = max_residual(g, std::span<const double>(values), p, ix.interior_mask);
    throw SolverError("no convergence within max_iter; residual " + std::to_string(final_res),
                      final_res);
}

bool verify_subharmonic(const WeightedGraph& g, std::span<const double> values, double p,
                        const VertexSet& region, double tol) {
    for (VertexId v : region)
        if (p_laplacian(g, values, p, g.index_of(v)) < -tol) return false;
    return true;
}

}  // namespace graphpot
