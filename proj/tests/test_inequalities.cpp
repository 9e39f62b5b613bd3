#include "doctest.h"

#include <cmath>

#include "graphpot/inequalities.hpp"
#include "oracles.hpp"

using namespace graphpot;
using namespace graphpot::testing;

TEST_CASE("Sobolev parameter validation") {
    SobolevParams ok{2.0, 4.0, 0.5, 2};
    CHECK_NOTHROW(ok.validate());
    CHECK_THROWS_AS((SobolevParams{2.0, 2.0, 0.5, {}}).validate(), DomainError);
    CHECK_THROWS_AS((SobolevParams{1.5, 4.0, 0.5, {}}).validate(), DomainError);
    // 1/2 - 1/4 = 1/4 > 1/5
    CHECK_THROWS_AS((SobolevParams{2.0, 4.0, 0.5, 5}).validate(), DomainError);
}

TEST_CASE("norms and quotients on a hand-computed tent") {
    Truncation t = generate(FamilySpec::lattice_spec(1), 3);
    std::vector<double> tent(7, 0.0);
    for (VertexId c = -3; c <= 3; ++c)
        tent[static_cast<std::size_t>(t.graph.index_of(c))] =
            std::max(0.0, 2.0 - std::abs(static_cast<double>(c)));
    double p = 2.0, q = 4.0;
    // 4 unit-slope edges; |phi|_4^4 = 2*1 + 2^4
    double expect = std::pow(4.0, 1.0 / p) / std::pow(18.0, 1.0 / q);
    CHECK(std::abs(sobolev_quotient(t.graph, tent, p, q) - expect) < 1e-12);
    CHECK(grad_lp_norm(t.graph, tent, 2.0) == doctest::Approx(2.0));
    CHECK(lp_norm(t.graph, tent, 4.0) == doctest::Approx(std::pow(18.0, 0.25)));

    SUBCASE("quotients are scale invariant") {
        std::vector<double> scaled = tent;
        for (auto& x : scaled) x *= -3.7;
        CHECK(sobolev_quotient(t.graph, scaled, p, q) ==
              doctest::Approx(sobolev_quotient(t.graph, tent, p, q)).epsilon(1e-14));
        CHECK(rayleigh_quotient(t.graph, scaled, 3.0) ==
              doctest::Approx(rayleigh_quotient(t.graph, tent, 3.0)).epsilon(1e-14));
    }
    SUBCASE("the zero function has no quotient") {
        std::vector<double> zero(7, 0.0);
        CHECK_THROWS_AS(sobolev_quotient(t.graph, zero, p, q), DomainError);
    }
}

TEST_CASE("Sobolev upper bound") {
    SUBCASE("with an empty horizon constants are admissible: bound 0") {
        Truncation t{path_graph(3), 1, {}};
        auto est = sobolev_upper_bound(t, 2.0, 4.0);
        CHECK(est.value == 0.0);
    }
    SUBCASE("estimates certify themselves") {
        Truncation t = generate(FamilySpec::binary_tree_spec(), 5);
        auto est = sobolev_upper_bound(t, 2.0, 4.0);
        CHECK(est.value > 0.0);
        CHECK(std::abs(sobolev_quotient(t.graph, est.minimizer.values, 2.0, 4.0) - est.value) <
              1e-12);
    }
    SUBCASE("the line carries no Sobolev inequality: the trend decays") {
        auto trend = sobolev_trend(FamilySpec::lattice_spec(1), {4, 8, 16, 32}, 2.0, 4.0);
        for (std::size_t i = 1; i < trend.size(); ++i) CHECK(trend[i] <= trend[i - 1] + 1e-12);
        CHECK(trend.back() < 0.3);
        CHECK(trend.back() < trend.front());
    }
    SUBCASE("nested truncations never raise the estimate") {
        auto trend = sobolev_trend(FamilySpec::binary_tree_spec(), {3, 5, 7}, 2.0, 4.0);
        for (std::size_t i = 1; i < trend.size(); ++i) CHECK(trend[i] <= trend[i - 1] + 1e-12);
        CHECK(trend.back() > 0.1);  // tree keeps a positive constant
    }
}

TEST_CASE("Rayleigh quotients") {
    SUBCASE("single free vertex with a unit edge: lambda = 1") {
        WeightedGraph::Builder b;
        b.add_vertex(0).add_vertex(1);
        b.add_edge(0, 1);
        Truncation t{std::move(b).build(), 1, {1}};
        CHECK(rayleigh_lambda(t, {0}, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("path interior of length 3: 2 - sqrt(2)") {
        Truncation t = generate(FamilySpec::lattice_spec(1), 2);
        CHECK(rayleigh_lambda(t, {-1, 0, 1}, 2.0) ==
              doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("p = 3 search is an upper bound consistent with hand candidates") {
        Truncation t = generate(FamilySpec::lattice_spec(1), 4);
        VertexSet region = {-3, -2, -1, 0, 1, 2, 3};
        double lam = rayleigh_lambda(t, region, 3.0);
        std::vector<double> tent(static_cast<std::size_t>(t.graph.size()), 0.0);
        for (VertexId c = -3; c <= 3; ++c)
            tent[static_cast<std::size_t>(t.graph.index_of(c))] =
                std::max(0.0, 4.0 - std::abs(static_cast<double>(c)));
        CHECK(lam > 0.0);
        CHECK(lam <= rayleigh_quotient(t.graph, tent, 3.0) + 1e-12);
    }
    SUBCASE("region covering everything has no frontier") {
        Truncation t{path_graph(3), 1, {}};
        CHECK_THROWS_AS(rayleigh_lambda(t, {0, 1, 2, 3}, 2.0), DomainError);
    }
}

TEST_CASE("lambda-volume lower bound") {
    Truncation t = generate(FamilySpec::binary_tree_spec(), 6);
    VertexSet region = set_difference(all_vertices(t.graph), t.horizon);
    SUBCASE("S = 0 passes trivially") {
        auto rep = check_lambda_volume_lower(t, region, 2.0, 4.0, 0.0);
        CHECK(rep.pass);
        CHECK(rep.rhs == 0.0);
    }
    SUBCASE("with the estimated constant the theorem holds") {
        double S = sobolev_upper_bound(t, 2.0, 4.0).value;
        auto rep = check_lambda_volume_lower(t, region, 2.0, 4.0, S);
        CHECK(rep.pass);
        CHECK(rep.lhs >= rep.rhs - 1e-9);
        CHECK(rep.s_used <= rep.s_supplied + 1e-15);
    }
    SUBCASE("equality stress: region = support of the best candidate") {
        auto est = sobolev_upper_bound(t, 2.0, 4.0);
        VertexSet support;
        for (int i = 0; i < t.graph.size(); ++i)
            if (std::abs(est.minimizer.values[static_cast<std::size_t>(i)]) > 1e-12)
                support.push_back(t.graph.id_of(i));
        support = normalized(std::move(support));
        auto rep = check_lambda_volume_lower(t, support, 2.0, 4.0, est.value);
        CHECK(rep.pass);
    }
}

TEST_CASE("ball Rayleigh upper bound via the cone function") {
    SUBCASE("the line, R = 4: bound is exactly 0.45 and holds") {
        Truncation t = generate(FamilySpec::lattice_spec(1), 6);
        auto rep = lambda_ball_upper(t, 0, 4.0, 2.0);
        CHECK(rep.vol_ball == doctest::Approx(9.0));
        CHECK(rep.vol_half == doctest::Approx(5.0));
        CHECK(rep.bound == doctest::Approx(0.45).epsilon(1e-12));
        CHECK(rep.pass);
        CHECK(rep.lambda <= rep.test_quotient + 1e-12);
        // chain, termwise: energy <= vol(B_R); cone >= R/2 on the half ball
        CHECK(rep.cone_energy <= rep.vol_ball + 1e-12);
        CHECK(rep.cone_mass_half >= std::pow(2.0, 2.0) * rep.vol_half - 1e-12);
        CHECK(rep.test_quotient <= rep.bound + 1e-12);
    }
    SUBCASE("regular tree, R = 3") {
        Truncation t = generate(FamilySpec::regular_tree_spec(3), 5);
        auto rep = lambda_ball_upper(t, 0, 3.0, 2.0);
        CHECK(rep.pass);
        CHECK(rep.lambda <= rep.test_quotient + 1e-12);
        CHECK(rep.cone_energy <= rep.vol_ball + 1e-12);
    }
    SUBCASE("p = 3 on the binary tree") {
        Truncation t = generate(FamilySpec::binary_tree_spec(), 6);
        auto rep = lambda_ball_upper(t, 0, 3.0, 3.0);
        CHECK(rep.pass);
        CHECK(rep.lambda <= rep.test_quotient + 1e-12);
    }
}

TEST_CASE("volume growth constants") {
    SUBCASE("p = 2, q = 4 closed forms are exact") {
        auto c = volume_growth_constants(2.0, 4.0, 1.0);
        CHECK(c.alpha == 2.0 / 3.0);
        CHECK(c.alpha_bar == 6.0);
        CHECK(c.C2 == 4.0);
        CHECK(c.C1 == doctest::Approx(std::pow(2.0, -16.0)).epsilon(1e-15));
        auto c2 = volume_growth_constants(2.0, 4.0, 0.5);
        CHECK(c2.C1 == doctest::Approx(std::pow(0.5, 4.0) * std::pow(2.0, -16.0)).epsilon(1e-15));
    }
    SUBCASE("alpha_bar matches the series sum j alpha^j") {
        for (auto [p, q] : std::vector<std::pair<double, double>>{{2, 4}, {2, 3}, {3, 5}}) {
            auto c = volume_growth_constants(p, q, 1.0);
            double partial = 0.0;
            for (int j = 1; j <= 400; ++j) partial += j * std::pow(c.alpha, j);
            CHECK(std::abs(partial - c.alpha_bar) < 1e-9);
        }
    }
    SUBCASE("dimension bound: 1/p - 1/q <= 1/m forces C2 >= m") {
        for (auto [p, q, m] : std::vector<std::tuple<double, double, int>>{
                 {2, 4, 2}, {2, 4, 4}, {2, 3, 3}, {3, 6, 4}}) {
            SobolevParams params{p, q, 1.0, m};
            params.validate();
            CHECK(volume_growth_constants(p, q, 1.0).C2 >= m - 1e-12);
        }
    }
    SUBCASE("q <= p is rejected") {
        CHECK_THROWS_AS(volume_growth_constants(3.0, 2.0, 1.0), DomainError);
    }
}

TEST_CASE("volume growth check") {
    Truncation t = generate(FamilySpec::binary_tree_spec(), 8);
    SUBCASE("S = 0 passes vacuously") {
        auto consts = volume_growth_constants(2.0, 4.0, 0.0);
        CHECK(consts.C1 == 0.0);
        auto rep = volume_growth_check(t, 0, {2, 3, 4}, consts, 0.0, 2.0, 4.0);
        CHECK(rep.all_pass);
    }
    SUBCASE("with the estimated constant every radius passes") {
        double S = sobolev_upper_bound(t, 2.0, 4.0).value;
        auto consts = volume_growth_constants(2.0, 4.0, S);
        auto rep = volume_growth_check(t, 0, {2, 3, 4, 5, 6}, consts, S, 2.0, 4.0);
        CHECK(rep.all_pass);
        CHECK_FALSE(rep.failing_radius.has_value());
        for (const auto& row : rep.rows) {
            CHECK(row.vol >= row.bound - 1e-9);
            CHECK(row.vol >= row.elementary_bound - 1e-9);  // cruder cutoff bound
        }
    }
    SUBCASE("lattice(2): admissible exponents for m = 2, rows reported") {
        SobolevParams params{2.0, 4.0, 0.0, 2};
        CHECK_NOTHROW(params.validate());  // 1/2 - 1/4 <= 1/2
        Truncation plane = generate(FamilySpec::lattice_spec(2), 6);
        double S = sobolev_upper_bound(plane, 2.0, 4.0).value;
        auto rep = volume_growth_check(plane, 0, {2, 3, 4}, volume_growth_constants(2.0, 4.0, S),
                                       S, 2.0, 4.0);
        CHECK(rep.rows.size() == 3);
        CHECK(rep.all_pass);
    }
}

TEST_CASE("Sobolev gluing check") {
    Truncation t = generate(FamilySpec::binary_tree_spec(), 6);
    VertexSet core = ball(t, 0, 2.0);
    auto rep = sobolev_glue_check(t, core, 2, 200, 2.0, 4.0);
    REQUIRE_FALSE(rep.vacuous);
    CHECK(rep.max_ratio <= 1.0 + 1e-9);
    CHECK(rep.s_inner > 0.0);
    CHECK(rep.s_outer > 0.0);
    CHECK(rep.c1 > 0.0);

    SUBCASE("support inside the core reduces to the inner inequality") {
        std::vector<double> v(static_cast<std::size_t>(t.graph.size()), 0.0);
        for (VertexId c : core) v[static_cast<std::size_t>(t.graph.index_of(c))] = 1.0;
        CHECK(sobolev_quotient(t.graph, v, 2.0, 4.0) >= rep.s_inner - 1e-9);
    }
    SUBCASE("support outside the collar reduces to the outer inequality") {
        auto hop = hop_distance(t.graph, t.graph.mask_of(core));
        auto horizon_mask = t.graph.mask_of(t.horizon);
        std::vector<double> v(static_cast<std::size_t>(t.graph.size()), 0.0);
        for (int i = 0; i < t.graph.size(); ++i)
            if (hop[static_cast<std::size_t>(i)] > 2 && !horizon_mask[static_cast<std::size_t>(i)])
                v[static_cast<std::size_t>(i)] = 1.0;
        CHECK(sobolev_quotient(t.graph, v, 2.0, 4.0) >= rep.s_outer - 1e-9);
    }
    SUBCASE("a core hugging the horizon is rejected") {
        CHECK_THROWS_AS(sobolev_glue_check(t, ball(t, 0, 5.0), 2, 10, 2.0, 4.0), DomainError);
    }
}

TEST_CASE("Schrodinger bottom") {
    Truncation t = generate(FamilySpec::lattice_spec(1), 2);  // interior -1,0,1
    SUBCASE("zero potential reduces to the Dirichlet bottom eigenvalue") {
        auto spec = SchrodingerSpec::uniform(t.graph, 0.0, 1.0);
        CHECK(schrodinger_bottom(t, spec) ==
              doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
    }
    SUBCASE("constant potentials shift the bottom") {
        auto zero = SchrodingerSpec::uniform(t.graph, 0.0, 1.0);
        auto shifted = SchrodingerSpec::uniform(t.graph, 0.37, 1.0);
        CHECK(schrodinger_bottom(t, shifted) ==
              doctest::Approx(schrodinger_bottom(t, zero) - 0.37).epsilon(1e-10));
        // negative bottoms are allowed
        auto strong = SchrodingerSpec::uniform(t.graph, 10.0, 1.0);
        CHECK(schrodinger_bottom(t, strong) < 0.0);
    }
    SUBCASE("spectral gate") {
        CHECK_FALSE(spectral_gate_admits(1.0, 2.0));
        CHECK(spectral_gate_admits(1.01, 2.0));
        CHECK_THROWS_AS(require_spectral_gate(1.0, 2.0), DomainError);
        CHECK_NOTHROW(require_spectral_gate(1.01, 2.0));
        // p = 3: threshold is 9/8
        CHECK_FALSE(spectral_gate_admits(1.125, 3.0));
        CHECK(spectral_gate_admits(1.13, 3.0));
    }
    SUBCASE("negative potentials and bad sizes are rejected") {
        CHECK_THROWS_AS(SchrodingerSpec::uniform(t.graph, -1.0, 1.0), DomainError);
        SchrodingerSpec bad;
        bad.potential = {0.0};
        bad.H = 1.0;
        CHECK_THROWS_AS(schrodinger_bottom(t, bad), DomainError);
    }
}
