#include <catch2/catch_amalgamated.hpp>

#include "aircomp_ia/topology.hpp"

using namespace aircomp_ia;

TEST_CASE("three overlapping clusters of two") {
    const Topology t = build_topology(3, 2, {1, 1});
    CHECK(t.tx_count == 4);
    CHECK(t.group(1) == std::vector<int>{1, 2});
    CHECK(t.group(2) == std::vector<int>{2, 3});
    CHECK(t.group(3) == std::vector<int>{3, 4});
    CHECK(t.cum_overlaps == std::vector<int>{0, 1, 2});
}

TEST_CASE("disjoint singleton clusters") {
    const Topology t = build_topology(2, 1, {0});
    CHECK(t.tx_count == 2);
    CHECK(t.group(1) == std::vector<int>{1});
    CHECK(t.group(2) == std::vector<int>{2});
}

TEST_CASE("two clusters sharing two transmitters") {
    const Topology t = build_topology(2, 3, {2});
    CHECK(t.tx_count == 4);
    CHECK(t.group(1) == std::vector<int>{1, 2, 3});
    CHECK(t.group(2) == std::vector<int>{2, 3, 4});
}

TEST_CASE("interior cluster cannot honor both overlaps") {
    CHECK_THROWS_AS(build_topology(3, 4, {2, 3}), ConstraintViolation);
}

TEST_CASE("overlap vector length must be K-1") {
    CHECK_THROWS_AS(build_topology(3, 2, {1}), DimensionError);
}

TEST_CASE("overlap beyond cluster size is rejected") {
    CHECK_THROWS_AS(build_topology(2, 2, {3}), ConstraintViolation);
}

TEST_CASE("interference pair count is K(M-r)") {
    CHECK(gamma_single(build_topology(3, 2, {1, 1})) == 6);
    CHECK(gamma_single(build_topology(2, 1, {0})) == 2);
    CHECK(gamma_single(build_topology(3, 4, {1, 1})) == 18);
}

TEST_CASE("interference pairs in canonical order") {
    const Topology t = build_topology(3, 2, {1, 1});
    const std::vector<std::pair<int, int>> expected = {{1, 3}, {1, 4}, {2, 1}, {2, 4}, {3, 1}, {3, 2}};
    CHECK(interference_pairs(t) == expected);

    const Topology singletons = build_topology(2, 1, {0});
    const std::vector<std::pair<int, int>> expected2 = {{1, 2}, {2, 1}};
    CHECK(interference_pairs(singletons) == expected2);

    const Topology wide = build_topology(2, 3, {2});
    const std::vector<std::pair<int, int>> expected3 = {{1, 4}, {2, 1}};
    CHECK(interference_pairs(wide) == expected3);
}

TEST_CASE("scheme selection by largest overlap") {
    CHECK(scheme_selector(build_topology(3, 2, {1, 1})) == Scheme::SingleV);
    CHECK(scheme_selector(build_topology(2, 1, {0})) == Scheme::SingleV);
    CHECK(scheme_selector(build_topology(2, 3, {2})) == Scheme::TwoV);
}

TEST_CASE("structural invariants over a sweep of valid layouts") {
    for (int clusters = 1; clusters <= 5; ++clusters) {
        for (int size = 1; size <= 4; ++size) {
            // Enumerate overlap vectors via a mixed-radix counter.
            const int edges = clusters - 1;
            std::vector<int> overlaps(static_cast<std::size_t>(edges), 0);
            while (true) {
                bool valid = true;
                for (int v : overlaps) valid = valid && v <= size;
                for (std::size_t i = 0; i + 1 < overlaps.size(); ++i) {
                    valid = valid && overlaps[i] + overlaps[i + 1] <= size;
                }
                if (valid) {
                    const Topology t = build_topology(clusters, size, overlaps);

                    // Union of groups covers [1, M] without gaps.
                    std::vector<int> cover(static_cast<std::size_t>(t.tx_count), 0);
                    for (int ell = 1; ell <= clusters; ++ell) {
                        for (int q : t.group(ell)) {
                            REQUIRE(q >= 1);
                            REQUIRE(q <= t.tx_count);
                            ++cover[static_cast<std::size_t>(q - 1)];
                        }
                    }
                    for (int owners : cover) {
                        CHECK(owners >= 1);
                        CHECK(owners <= 2);
                    }

                    // Adjacent intersections match the overlap vector; no
                    // sharing at distance >= 2.
                    for (int a = 1; a <= clusters; ++a) {
                        for (int b = a + 1; b <= clusters; ++b) {
                            int shared = 0;
                            for (int q : t.group(a)) shared += t.in_group(b, q) ? 1 : 0;
                            if (b == a + 1) {
                                CHECK(shared == overlaps[static_cast<std::size_t>(a - 1)]);
                            } else {
                                CHECK(shared == 0);
                            }
                        }
                    }

                    // Shared Txs sit at the tail of the left group and the
                    // head of the right group.
                    for (int a = 1; a < clusters; ++a) {
                        const int ov = overlaps[static_cast<std::size_t>(a - 1)];
                        for (int i = 0; i < ov; ++i) {
                            CHECK(t.group(a)[static_cast<std::size_t>(size - ov + i)] ==
                                  t.group(a + 1)[static_cast<std::size_t>(i)]);
                        }
                    }

                    CHECK(static_cast<long>(interference_pairs(t).size()) == gamma_single(t));

                    // Construction is a pure function of its inputs.
                    const Topology again = build_topology(clusters, size, overlaps);
                    CHECK(again.groups == t.groups);
                    CHECK(again.tx_count == t.tx_count);
                }
                // Advance the counter.
                std::size_t pos = 0;
                while (pos < overlaps.size()) {
                    if (++overlaps[pos] <= size) break;
                    overlaps[pos] = 0;
                    ++pos;
                }
                if (pos >= overlaps.size()) break;
            }
            if (edges == 0) continue;
        }
    }
}
