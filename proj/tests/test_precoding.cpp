#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <tuple>

#include "aircomp_ia/precoding.hpp"
#include "aircomp_ia/transceiver.hpp"

using namespace aircomp_ia;

namespace {
const Topology kFixture = build_topology(3, 2, {1, 1});
const Topology kWide = build_topology(2, 3, {2});
}

TEST_CASE("chain matches its closed forms entry by entry") {
    const auto cs = draw_channels<Rational>(kFixture, 8, ChannelParams{}, 21);
    const CChain<Rational> chain = build_c_chain(kFixture, cs, 21);
    REQUIRE(chain.seed_txs == std::vector<int>{1});
    const auto& c1 = chain.diag_by_tx[0];
    for (std::size_t t = 0; t < 8; ++t) {
        const Rational c2 = cs.diagonal(1, 1)[t] * c1[t] / cs.diagonal(1, 2)[t];
        CHECK(chain.diag_by_tx[1][t] == c2);
        const Rational c3 = cs.diagonal(2, 2)[t] * c2 / cs.diagonal(2, 3)[t];
        CHECK(chain.diag_by_tx[2][t] == c3);
        const Rational c4 = cs.diagonal(3, 3)[t] * c3 / cs.diagonal(3, 4)[t];
        CHECK(chain.diag_by_tx[3][t] == c4);
    }
}

TEST_CASE("disjoint clusters each get a free seed") {
    const Topology t = build_topology(2, 1, {0});
    const auto cs = draw_channels<Rational>(t, 4, ChannelParams{}, 3);
    const CChain<Rational> chain = build_c_chain(t, cs, 3);
    CHECK(chain.seed_txs == std::vector<int>{1, 2});
}

TEST_CASE("equalization condition holds for every cluster") {
    const auto exact = draw_channels<Rational>(kFixture, 16, ChannelParams{}, 5);
    const auto prec_exact = build_single_v(kFixture, exact, 1, 5);
    CHECK(aircomp_residual(kFixture, exact, prec_exact) == 0.0);

    const auto floating = draw_channels<Complex>(kFixture, 65, ChannelParams{}, 5);
    const auto prec_float = build_single_v(kFixture, floating, 1, 5);
    CHECK(aircomp_residual(kFixture, floating, prec_float) < 1e-10);

    const auto wide = draw_channels<Rational>(kWide, 17, ChannelParams{}, 5);
    const auto prec_two = build_two_v(kWide, wide, 1, 5);
    CHECK(aircomp_residual(kWide, wide, prec_two) == 0.0);
}

TEST_CASE("chain refuses wide overlaps") {
    const auto cs = draw_channels<Rational>(kWide, 4, ChannelParams{}, 1);
    CHECK_THROWS_AS(build_c_chain(kWide, cs, 1), UnsupportedMode);
}

TEST_CASE("generator labels mirror the interference pairs") {
    const auto cs = draw_channels<Rational>(kFixture, 8, ChannelParams{}, 2);
    const auto chain = build_c_chain(kFixture, cs, 2);
    const auto gens = build_generator_set_single(kFixture, cs, chain);
    const auto pairs = interference_pairs(kFixture);
    REQUIRE(gens.size() == pairs.size());
    REQUIRE(gens.size() == 6);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(gens.labels[i].observer == pairs[i].first);
        CHECK(gens.labels[i].tx == pairs[i].second);
        for (std::size_t t = 0; t < 8; ++t) {
            const Rational expected =
                cs.diagonal(pairs[i].first, pairs[i].second)[t] *
                chain.diag_by_tx[static_cast<std::size_t>(pairs[i].second - 1)][t];
            CHECK(gens.diagonals[i][t] == expected);
        }
    }

    const Topology singletons = build_topology(2, 1, {0});
    const auto cs2 = draw_channels<Rational>(singletons, 4, ChannelParams{}, 2);
    const auto chain2 = build_c_chain(singletons, cs2, 2);
    CHECK(build_generator_set_single(singletons, cs2, chain2).size() == 2);
}

TEST_CASE("exponent enumeration in lexicographic order") {
    const auto vectors = enumerate_exponents(2, 1);
    REQUIRE(vectors.size() == 4);
    CHECK(vectors[0].values == std::vector<int>{0, 0});
    CHECK(vectors[1].values == std::vector<int>{0, 1});
    CHECK(vectors[2].values == std::vector<int>{1, 0});
    CHECK(vectors[3].values == std::vector<int>{1, 1});

    CHECK(enumerate_exponents(6, 0).size() == 1);
    CHECK(enumerate_exponents(3, 2).size() == 27);
    CHECK_THROWS_AS(enumerate_exponents(30, 1, 1 << 20), SizeOverflow);

    // Round trip through the index map.
    for (std::uint64_t i = 0; i < 27; ++i) {
        CHECK(exponent_index(exponent_at(i, 3, 2).values, 2) == i);
    }
}

TEST_CASE("power product matrices have the right columns") {
    const auto cs = draw_channels<Rational>(kFixture, 65, ChannelParams{}, 9);
    const auto prec = build_single_v(kFixture, cs, 1, 9);
    CHECK(prec.v.cols() == 1);
    CHECK(prec.w.cols() == 64);

    // n = 1: the single V column is the basis itself.
    for (std::int64_t t = 0; t < 65; ++t) CHECK(prec.v(t, 0) == Rational(1));
    // The all-zero exponent column of W equals V's column.
    for (std::int64_t t = 0; t < 65; ++t) CHECK(prec.w(t, 0) == prec.v(t, 0));

    // Column for exponents (1,0,...,0) is the first generator's diagonal
    // applied to the basis.
    const auto idx = exponent_index({1, 0, 0, 0, 0, 0}, 1);
    for (std::int64_t t = 0; t < 65; ++t) {
        CHECK(prec.w(t, static_cast<std::int64_t>(idx)) == prec.generators.diagonals[0][static_cast<std::size_t>(t)]);
    }
}

TEST_CASE("column counts scale as n^g and (n+1)^g") {
    const Topology singletons = build_topology(2, 1, {0});
    const auto cs = draw_channels<Complex>(singletons, 13, ChannelParams{}, 4);
    const auto prec = build_single_v(singletons, cs, 2, 4);
    CHECK(prec.v.cols() == 4);   // 2^2
    CHECK(prec.w.cols() == 9);   // 3^2
}

TEST_CASE("two-V generator sets enumerate every cross-cluster triple") {
    const auto cs = draw_channels<Rational>(kWide, 17, ChannelParams{}, 33);
    const auto prec = build_two_v(kWide, cs, 1, 33);

    // Independent brute-force enumeration of (observer, tx, dest) triples.
    std::set<std::tuple<int, int, int>> expected_odd, expected_even;
    for (int dest = 1; dest <= kWide.cluster_count; ++dest) {
        for (int tx : kWide.group(dest)) {
            for (int obs = 1; obs <= kWide.cluster_count; ++obs) {
                if (obs == dest) continue;
                (cluster_parity(dest) == 1 ? expected_odd : expected_even).insert({obs, tx, dest});
            }
        }
    }
    const auto collect = [](const GeneratorSet<Rational>& gens) {
        std::set<std::tuple<int, int, int>> out;
        for (const auto& label : gens.labels) out.insert({label.observer, label.tx, label.dest_cluster});
        return out;
    };
    CHECK(collect(prec.parity_generators(1)) == expected_odd);
    CHECK(collect(prec.parity_generators(2)) == expected_even);
    CHECK(prec.parity_generators(1).size() == 3);
    CHECK(prec.parity_generators(2).size() == 3);

    const auto [g1, g2] = gamma_two(kWide);
    CHECK(g1 == 3);
    CHECK(g2 == 3);

    // n = 1 column counts: one V column, eight W columns per parity.
    CHECK(prec.parity_v(1).cols() == 1);
    CHECK(prec.parity_v(2).cols() == 1);
    CHECK(prec.parity_w(1).cols() == 8);
    CHECK(prec.parity_w(2).cols() == 8);

    // Exactly one free chain seed per cluster.
    for (int ell = 1; ell <= kWide.cluster_count; ++ell) {
        int seeds = 0;
        for (const auto& [tx, factors] : prec.cluster_chains.factors[static_cast<std::size_t>(ell - 1)]) {
            if (factors.channels.empty()) {
                ++seeds;
                CHECK(factors.seeds.at(ell) == 1);
            }
        }
        CHECK(seeds == 1);
    }
}

TEST_CASE("transmit signal shapes and scaling") {
    const auto cs = draw_channels<Complex>(kFixture, 65, ChannelParams{}, 8);
    const auto prec = build_single_v(kFixture, cs, 1, 8);

    TxPayload<Complex> zero;
    zero.single.assign(1, Complex(0, 0));
    const auto silent = tx_signal(prec, kFixture, 1, zero, Complex(1, 0));
    for (const Complex& v : silent) CHECK(v == Complex(0, 0));

    // n = 1: the signal is scale * chain diagonal * payload per row.
    TxPayload<Complex> one;
    one.single.assign(1, Complex(1.5, 0));
    const Complex scale(0.25, 0);
    const auto x = tx_signal(prec, kFixture, 2, one, scale);
    for (std::size_t t = 0; t < x.size(); ++t) {
        const Complex expected = scale * prec.chain.diag_by_tx[1][t] * Complex(1.5, 0);
        CHECK(std::abs(x[t] - expected) < 1e-14);
    }

    TxPayload<Complex> wrong;
    wrong.single.assign(2, Complex(1, 0));
    CHECK_THROWS_AS(tx_signal(prec, kFixture, 1, wrong, scale), DimensionError);
}

TEST_CASE("shared transmitter superposes both parities") {
    const auto cs = draw_channels<Rational>(kWide, 17, ChannelParams{}, 15);
    const auto prec = build_two_v(kWide, cs, 1, 15);
    TxPayload<Rational> payload;
    payload.by_dest[1] = {Rational(2)};
    payload.by_dest[2] = {Rational(2)};
    const Rational scale(1);
    const auto x = tx_signal(prec, kWide, 2, payload, scale);
    const Rational weight = ScalarTraits<Rational>::from_double(kTwoVTermWeight);
    for (std::size_t t = 0; t < x.size(); ++t) {
        const Rational term1 = prec.cluster_chains.diag[0].at(2)[t] * prec.parity_v(1)(static_cast<std::int64_t>(t), 0);
        const Rational term2 = prec.cluster_chains.diag[1].at(2)[t] * prec.parity_v(2)(static_cast<std::int64_t>(t), 0);
        CHECK(x[t] == weight * (term1 + term2) * Rational(2));
    }
}

TEST_CASE("encoded signals respect the block power bound and scale with sqrt(P)") {
    const auto cs = draw_channels<Complex>(kFixture, 65, ChannelParams{}, 44);
    const auto prec = build_single_v(kFixture, cs, 1, 44);
    const MessageSet msgs = draw_messages(kFixture, Scheme::SingleV, 1, 0, 0, 5, 44);
    const double power = 2.0;
    const auto enc = encode_all(msgs, prec, kFixture, power);
    double worst = 0.0;
    for (const auto& x : enc.signals) {
        double norm2 = 0.0;
        for (const Complex& v : x) norm2 += std::norm(v);
        worst = std::max(worst, norm2 / static_cast<double>(x.size()));
    }
    CHECK(worst <= power + 1e-12);
    CHECK(worst > 0.5 * power);  // the binding transmitter sits at the bound

    const auto enc4 = encode_all(msgs, prec, kFixture, 2.0 * power);
    for (std::size_t q = 0; q < enc.signals.size(); ++q) {
        for (std::size_t t = 0; t < enc.signals[q].size(); ++t) {
            CHECK(std::abs(enc4.signals[q][t] - std::sqrt(2.0) * enc.signals[q][t]) <
                  1e-12 * std::abs(enc.signals[q][t]) + 1e-300);
        }
    }

    // Centered all-zero messages still emit nonzero signals.
    MessageSet zeros = msgs;
    for (auto& w : zeros.by_tx) w.assign(w.size(), 0);
    zeros.p = 2;
    const auto encz = encode_all(zeros, prec, kFixture, power);
    double total = 0.0;
    for (const auto& x : encz.signals) {
        for (const Complex& v : x) total += std::norm(v);
    }
    CHECK(total > 0.0);
}
