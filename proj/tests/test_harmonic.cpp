#include "doctest.h"

#include <cmath>

#include "graphpot/harmonic.hpp"
#include "oracles.hpp"

using namespace graphpot;
using namespace graphpot::testing;

TEST_CASE("end potential on the half-line (parabolic): limit is the constant 1") {
    auto r = end_potential(FamilySpec::lattice_spec(1), {0}, 1, 2.0, {8, 16, 32, 64});
    CHECK(r.window == VertexSet{1, 2, 3, 4, 5, 6, 7});
    for (std::size_t i = 0; i < r.levels.size(); ++i) {
        double n = r.levels[i];
        CHECK(r.energies[i] == doctest::Approx(1.0 / n).epsilon(1e-8));
        CHECK(r.window_min[i] == doctest::Approx(1.0 - 7.0 / n).epsilon(1e-8));
    }
    CHECK(r.monotone_in_level);
    CHECK(std::abs(r.window_min_limit - 1.0) < 1e-6);
    CHECK(std::abs(r.window_max_limit - 1.0) < 1e-6);
    // boundary maximum principle signature: sup over the end = value on the
    // boundary, recovered in the limit
    CHECK(value_at(r.domain.graph, r.h, 0) == doctest::Approx(1.0));
}

TEST_CASE("end potential on a binary-tree end (hyperbolic)") {
    // K = root; the end is the subtree hanging off child 1.
    auto r = end_potential(FamilySpec::binary_tree_spec(), {0}, 1, 2.0, {4, 5, 6, 7, 8});
    SUBCASE("0 < h <= 1 and h = 1 exactly on the boundary") {
        CHECK(value_at(r.domain.graph, r.h, 0) == doctest::Approx(1.0));
        for (VertexId v : set_difference(r.end.component, r.domain.horizon)) {
            double x = value_at(r.domain.graph, r.h, v);
            CHECK(x > 0.0);
            CHECK(x <= 1.0);
        }
    }
    SUBCASE("levels are monotone: h increases, energy decreases, interior min -> 0") {
        CHECK(r.monotone_in_level);
        for (std::size_t i = 1; i < r.levels.size(); ++i) {
            CHECK(r.energies[i] <= r.energies[i - 1] + 1e-9);
            CHECK(r.interior_min[i] <= r.interior_min[i - 1] + 1e-9);
        }
        CHECK(r.interior_min.back() < 0.01);
    }
    SUBCASE("the limit is non-constant: window statistics stay below 1") {
        // depth-1 vertex tends to 1/2 in the infinite subtree
        CHECK(r.window_max_limit > 0.4);
        CHECK(r.window_max_limit < 0.6);
        CHECK(r.window_min_limit < 0.2);
    }
    SUBCASE("per-level energies approach the end capacity") {
        auto seq = end_capacity_sequence(FamilySpec::binary_tree_spec(), {0}, 1, 2.0, {4, 5, 6, 7, 8});
        for (std::size_t i = 0; i < seq.values.size(); ++i)
            CHECK(r.energies[i] == doctest::Approx(seq.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("multi-end construction on the two-tree dumbbell") {
    auto spec =
        FamilySpec::glue_spec({FamilySpec::binary_tree_spec(), FamilySpec::binary_tree_spec()});
    VertexSet hub = hub_vertices(spec);
    std::vector<int> levels = {4, 5, 6, 7, 8};
    auto r = multi_end_harmonic(spec, hub, 2.0, levels);

    CHECK(r.end1.verdict == Verdict::hyperbolic);
    CHECK(r.end2.verdict == Verdict::hyperbolic);

    SUBCASE("0 <= u <= 1 and the oscillation is large") {
        for (double v : r.u.values) {
            CHECK(v >= -1e-10);
            CHECK(v <= 1.0 + 1e-10);
        }
        CHECK(r.rows.back().oscillation >= 0.5);
    }
    SUBCASE("sandwich and energy bounds hold at every level") {
        for (const auto& row : r.rows) {
            CHECK(row.sandwich_margin_e1 >= -1e-8);
            CHECK(row.sandwich_margin_e2 >= -1e-8);
            CHECK(row.energy <= row.cap_bound + 1e-9);
        }
    }
    SUBCASE("swap antisymmetry: u(swap(x)) = 1 - u(x)") {
        auto swap_map = glue_swap_map(spec, r.deepest);
        for (VertexId v : r.deepest.graph.ids()) {
            double a = value_at(r.deepest.graph, r.u, v);
            double b = value_at(r.deepest.graph, r.u, swap_map.at(v));
            CHECK(std::abs(a + b - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("multi-end construction needs two hyperbolic ends") {
    // The line has two ends, both parabolic.
    CHECK_THROWS_AS(multi_end_harmonic(FamilySpec::lattice_spec(1), {0}, 2.0, {8, 16, 32}),
                    DomainError);
    // A single-ended family fails outright.
    CHECK_THROWS_AS(multi_end_harmonic(FamilySpec::lattice_spec(2), {0}, 2.0, {4, 6, 8}),
                    DomainError);
}

TEST_CASE("parabolic Liouville consistency: equal boundary data gives a constant") {
    Truncation t = generate(FamilySpec::lattice_spec(1), 12);
    DirichletProblem prob;
    prob.interior = set_difference(all_vertices(t.graph), t.horizon);
    for (VertexId v : t.horizon) prob.boundary.emplace_back(v, 1.0);
    for (double p : {2.0, 3.0}) {
        SolverConfig cfg;
        cfg.p = p;
        Potential u = solve_dirichlet(t.graph, prob, cfg);
        for (double v : u.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("double consistency: an end and its double classify identically") {
    struct Case {
        FamilySpec spec;
        VertexSet K;
        VertexId rep;
        std::vector<int> levels;
    };
    std::vector<Case> cases = {
        {FamilySpec::lattice_spec(1), {0}, 1, {6, 9, 12, 16}},         // half-line
        {FamilySpec::binary_tree_spec(), {0}, 1, {4, 5, 6, 7}},        // binary subtree
        {FamilySpec::cylinder_spec(4), {0, 1, 2, 3}, 4, {4, 6, 8, 10}} // half-cylinder
    };
    for (const auto& c : cases) {
        CAPTURE(c.spec.describe());
        for (double p : {2.0, 3.0}) {
            CAPTURE(p);
            auto end_seq = end_capacity_sequence(c.spec, c.K, c.rep, p, c.levels);
            auto dbl_seq = double_capacity_sequence(c.spec, c.K, c.rep, p, c.levels);
            CHECK(classify(end_seq).verdict == classify(dbl_seq).verdict);
        }
    }
}
