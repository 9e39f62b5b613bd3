#include "doctest.h"

#include <random>

#include "graphpot/families.hpp"
#include "graphpot/solver.hpp"
#include "oracles.hpp"

using namespace graphpot;
using namespace graphpot::testing;

TEST_CASE("p-energy on explicit functions") {
    WeightedGraph g = path_graph(4);
    std::vector<double> linear = {1.0, 0.75, 0.5, 0.25, 0.0};
    std::vector<double> constant(5, 3.2);
    CHECK(p_energy(g, std::span<const double>(constant), 2.0) == doctest::Approx(0.0));
    CHECK(p_energy(g, std::span<const double>(linear), 2.0) == doctest::Approx(0.25));
    CHECK(p_energy(g, std::span<const double>(linear), 3.0) == doctest::Approx(0.0625));
    CHECK_THROWS_AS(p_energy(g, std::span<const double>(linear), 1.5), DomainError);
    std::vector<double> short_vec = {1.0, 2.0};
    CHECK_THROWS_AS(p_energy(g, std::span<const double>(short_vec), 2.0), DomainError);
}

TEST_CASE("discrete p-Laplacian") {
    WeightedGraph g = path_graph(2);  // vertices 0,1,2
    std::vector<double> step = {0.0, 0.0, 1.0};
    CHECK(p_laplacian(g, std::span<const double>(step), 2.0, 1) == doctest::Approx(1.0));
    std::vector<double> constant(3, 7.0);
    for (int x = 0; x < 3; ++x)
        CHECK(p_laplacian(g, std::span<const double>(constant), 3.0, x) == doctest::Approx(0.0));
    std::vector<double> linear = {0.0, 0.5, 1.0};
    for (double p : {2.0, 3.0, 4.0})
        CHECK(p_laplacian(g, std::span<const double>(linear), p, 1) ==
              doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("Dirichlet solve on a path") {
    WeightedGraph g = path_graph(4);
    DirichletProblem prob;
    prob.interior = {1, 2, 3};
    prob.boundary = {{0, 1.0}, {4, 0.0}};

    SUBCASE("p = 2 equals the exact linear solve") {
        SolverConfig cfg;
        Potential h = solve_dirichlet(g, prob, cfg);
        std::vector<double> expect = {1.0, 0.75, 0.5, 0.25, 0.0};
        CHECK(sup_diff(h.values, expect) < 1e-10);
        CHECK(sup_diff(h.values, dense_linear_dirichlet(g, prob)) < 1e-10);
        CHECK(h.energy == doctest::Approx(0.25));
        CHECK(h.residual <= cfg.grad_tol);
    }
    SUBCASE("p = 3 is still linear, matching the brute-force minimizer") {
        SolverConfig cfg;
        cfg.p = 3.0;
        Potential h = solve_dirichlet(g, prob, cfg);
        std::vector<double> expect = {1.0, 0.75, 0.5, 0.25, 0.0};
        CHECK(sup_diff(h.values, expect) < 1e-8);
        CHECK(sup_diff(h.values, brute_force_dirichlet(g, prob, 3.0)) < 1e-8);
        CHECK(h.residual <= cfg.grad_tol);
    }
    SUBCASE("constant boundary pins the interior, zero energy") {
        DirichletProblem cprob;
        cprob.interior = {1, 2, 3};
        cprob.boundary = {{0, 0.7}, {4, 0.7}};
        for (double p : {2.0, 3.0, 4.0}) {
            SolverConfig cfg;
            cfg.p = p;
            Potential h = solve_dirichlet(g, cprob, cfg);
            for (double v : h.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
            CHECK(h.energy == doctest::Approx(0.0));
        }
    }
    SUBCASE("solver trace is recorded when asked") {
        SolverConfig cfg;
        cfg.p = 3.0;
        cfg.trace = true;
        Potential h = solve_dirichlet(g, prob, cfg);
        CHECK(!h.trace.empty());
    }
}

TEST_CASE("problem validation") {
    WeightedGraph g = path_graph(3);
    SUBCASE("unclosed problems are rejected") {
        DirichletProblem prob;
        prob.interior = {1};
        prob.boundary = {{0, 1.0}};
        CHECK_THROWS_AS(solve_dirichlet(g, prob, {}), DomainError);  // vertex 2 dangling
    }
    SUBCASE("empty boundary is rejected") {
        DirichletProblem prob;
        prob.interior = {0, 1, 2, 3};
        CHECK_THROWS_AS(solve_dirichlet(g, prob, {}), DomainError);
    }
    SUBCASE("overlapping interior and boundary are rejected") {
        DirichletProblem prob;
        prob.interior = {1, 2};
        prob.boundary = {{1, 0.0}, {3, 0.0}};
        CHECK_THROWS_AS(solve_dirichlet(g, prob, {}), DomainError);
    }
    SUBCASE("p below 2 is rejected") {
        DirichletProblem prob;
        prob.interior = {1, 2};
        prob.boundary = {{0, 1.0}, {3, 0.0}};
        SolverConfig cfg;
        cfg.p = 1.5;
        CHECK_THROWS_AS(solve_dirichlet(g, prob, cfg), DomainError);
    }
}

TEST_CASE("solver agrees with independent oracles on random graphs") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 8; ++trial) {
        RandomProblem rp = random_connected_problem(rng);
        CAPTURE(trial);
        for (double p : {2.0, 3.0, 4.0}) {
            SolverConfig cfg;
            cfg.p = p;
            Potential h = solve_dirichlet(rp.g, rp.prob, cfg);
            if (p == 2.0)
                CHECK(sup_diff(h.values, dense_linear_dirichlet(rp.g, rp.prob)) < 1e-10);
            CHECK(sup_diff(h.values, brute_force_dirichlet(rp.g, rp.prob, p)) < 1e-8);
        }
    }
}

TEST_CASE("variational optimality against perturbations") {
    std::mt19937_64 rng(7);
    RandomProblem rp = random_connected_problem(rng);
    std::uniform_real_distribution<double> eps(-0.3, 0.3);
    for (double p : {2.0, 3.0}) {
        SolverConfig cfg;
        cfg.p = p;
        Potential h = solve_dirichlet(rp.g, rp.prob, cfg);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> other = h.values;
            for (VertexId v : rp.prob.interior)
                other[static_cast<std::size_t>(rp.g.index_of(v))] += eps(rng);
            CHECK(h.energy <= p_energy(rp.g, std::span<const double>(other), p) + 1e-9);
        }
    }
}

TEST_CASE("uniqueness: different initializations agree") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 4; ++trial) {
        RandomProblem rp = random_connected_problem(rng);
        SolverConfig cfg;
        cfg.p = 3.0;
        Potential a = solve_dirichlet(rp.g, rp.prob, cfg);
        std::vector<double> init(static_cast<std::size_t>(rp.g.size()));
        for (auto& x : init) x = u(rng);
        Potential b = solve_dirichlet(rp.g, rp.prob, cfg, &init);
        CHECK(sup_diff(a.values, b.values) < 1e-8);
    }
}

TEST_CASE("maximum and comparison principles on random problems") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 25; ++trial) {
        RandomProblem rp = random_connected_problem(rng);
        for (double p : {2.0, 3.0}) {
            SolverConfig cfg;
            cfg.p = p;
            Potential h = solve_dirichlet(rp.g, rp.prob, cfg);
            CHECK(h.residual <= cfg.grad_tol);
            CHECK(h.energy ==
                  doctest::Approx(p_energy(rp.g, h, p)).epsilon(1e-14));
            double bmin = 1e300, bmax = -1e300;
            for (auto& [id, val] : rp.prob.boundary) {
                bmin = std::min(bmin, val);
                bmax = std::max(bmax, val);
            }
            for (VertexId v : rp.prob.interior) {
                double x = value_at(rp.g, h, v);
                CHECK(x >= bmin - 1e-8);
                CHECK(x <= bmax + 1e-8);
            }

            // comparison: lift the boundary data, solutions lift too
            DirichletProblem lifted = rp.prob;
            std::uniform_real_distribution<double> up(0.0, 1.0);
            for (auto& [id, val] : lifted.boundary) val += up(rng);
            Potential h2 = solve_dirichlet(rp.g, lifted, cfg);
            for (VertexId v : rp.prob.interior)
                CHECK(value_at(rp.g, h2, v) >= value_at(rp.g, h, v) - 1e-8);
        }
    }
}

TEST_CASE("strong maximum principle: strict inequalities inside") {
    // Star with non-constant boundary: the center stays strictly between.
    WeightedGraph::Builder b;
    b.add_vertex(0).add_vertex(1).add_vertex(2).add_vertex(3);
    b.add_edge(0, 1).add_edge(0, 2).add_edge(0, 3);
    WeightedGraph g = std::move(b).build();
    DirichletProblem prob;
    prob.interior = {0};
    prob.boundary = {{1, 1.0}, {2, 1.0}, {3, 0.0}};
    for (double p : {2.0, 3.0}) {
        SolverConfig cfg;
        cfg.p = p;
        Potential h = solve_dirichlet(g, prob, cfg);
        double c = value_at(g, h, 0);
        CHECK(c > 0.0);
        CHECK(c < 1.0);
    }
}

TEST_CASE("subharmonicity checks") {
    WeightedGraph g = path_graph(4);
    DirichletProblem prob;
    prob.interior = {1, 2, 3};
    prob.boundary = {{0, 1.0}, {4, 0.0}};
    SolverConfig cfg;
    cfg.p = 3.0;
    Potential h = solve_dirichlet(g, prob, cfg);
    CHECK(verify_subharmonic(g, h.values, 3.0, prob.interior));

    // strict interior peak is not subharmonic
    std::vector<double> bump = {0.0, 0.2, 1.0, 0.2, 0.0};
    CHECK_FALSE(verify_subharmonic(g, std::span<const double>(bump), 2.0, {2}));

    // max of two p-harmonic functions is p-subharmonic
    DirichletProblem rev;
    rev.interior = {1, 2, 3};
    rev.boundary = {{0, 0.0}, {4, 1.0}};
    Potential h2 = solve_dirichlet(g, rev, cfg);
    std::vector<double> vmax(5);
    for (int i = 0; i < 5; ++i)
        vmax[static_cast<std::size_t>(i)] = std::max(h.values[static_cast<std::size_t>(i)],
                                                     h2.values[static_cast<std::size_t>(i)]);
    CHECK(verify_subharmonic(g, std::span<const double>(vmax), 3.0, {1, 2, 3}));
}
