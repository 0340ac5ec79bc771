#include <catch2/catch_amalgamated.hpp>

#include "aircomp_ia/oracles.hpp"

using namespace aircomp_ia;

TEST_CASE("power product matrix worked examples") {
    LemmaInstance inst;
    inst.size = 2;
    inst.vectors = {{Rational(3), Rational(7)}, {Rational(2), Rational(5)}};
    inst.exponents = {{0, 0}, {1, 0}};
    const auto m = lemma_matrix(inst);
    CHECK(m(0, 0) == Rational(1));
    CHECK(m(1, 0) == Rational(1));
    CHECK(m(0, 1) == Rational(3));
    CHECK(m(1, 1) == Rational(7));
    CHECK(determinant_is_nonzero(m));

    // Equal first entries make the matrix singular.
    inst.vectors[0][1] = Rational(3);
    CHECK_FALSE(determinant_is_nonzero(lemma_matrix(inst)));
}

TEST_CASE("equal exponent vectors force rank one") {
    LemmaInstance inst = draw_lemma_instance(3, 5, true);
    CHECK(inst.exponents[0] == inst.exponents[1]);
    CHECK_FALSE(determinant_is_nonzero(lemma_matrix(inst)));
}

TEST_CASE("size one all-zero exponent") {
    LemmaInstance inst;
    inst.size = 1;
    inst.vectors = {{Rational(9, 7)}};
    inst.exponents = {{0}};
    const auto m = lemma_matrix(inst);
    CHECK(m(0, 0) == Rational(1));
    CHECK(determinant_is_nonzero(m));
}

TEST_CASE("random instances are full rank, duplicates never are") {
    CHECK(lemma_trial_campaign(4, 200, 1) == 1.0);
    CHECK(lemma_trial_campaign(6, 50, 2) == 1.0);
    CHECK(lemma_trial_campaign(4, 50, 3, true) == 0.0);
    CHECK_THROWS_AS(lemma_trial_campaign(9, 10, 1), ValidationError);
}

TEST_CASE("drawn instances respect their invariants") {
    const LemmaInstance inst = draw_lemma_instance(6, 42);
    CHECK(inst.exponents.size() == 6);
    std::set<std::vector<int>> distinct(inst.exponents.begin(), inst.exponents.end());
    CHECK(distinct.size() == 6);
    for (const auto& alpha : inst.exponents) {
        for (int e : alpha) {
            CHECK(e >= 0);
            CHECK(e <= 6);
        }
    }
    for (const auto& v : inst.vectors) {
        for (const Rational& s : v) CHECK(sgn(s) != 0);
    }
}

TEST_CASE("time sharing baseline") {
    const Topology fixture = build_topology(3, 2, {1, 1});
    const BaselineReport report = baseline_tdma(fixture, 25, 5, 7);
    CHECK(report.per_cluster_dof == Rational(1, 3));
    CHECK(report.sum_dof == Rational(1));
    CHECK(report.gain_vs_theorem == Rational(3, 2));
    CHECK(report.slot_recovery_ok);

    const Topology degenerate = build_topology(1, 2, {});
    const BaselineReport single = baseline_tdma(degenerate, 5, 5, 7);
    CHECK(single.sum_dof == Rational(1));
    CHECK(single.per_cluster_dof == Rational(1));

    const Topology wide = build_topology(2, 3, {2});
    CHECK(baseline_tdma(wide, 5, 5, 7).gain_vs_theorem == Rational(2, 3));
}

TEST_CASE("alignment-only baseline closed forms") {
    CHECK(baseline_ia_only(build_topology(3, 2, {1, 1})).sum_dof == Rational(3, 4));
    CHECK(baseline_ia_only(build_topology(2, 1, {0})).sum_dof == Rational(1));
    // Singleton clusters reduce to the K/2 alignment bound.
    const Topology singles = build_topology(5, 1, {0, 0, 0, 0});
    CHECK(baseline_ia_only(singles).sum_dof == Rational(5, 2));
    CHECK(baseline_ia_only(singles).sum_dof == theorem_sum_dof(singles));
}
