#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "aircomp_ia/errors.hpp"

namespace aircomp_ia {

/// Overlapping-cluster network layout. Cluster and Tx indices are 1-based
/// everywhere they are exposed; immutable once built.
struct Topology {
    int cluster_count = 0;            // K
    int txs_per_cluster = 0;          // r
    std::vector<int> overlaps;        // K-1 entries; [l-1] = shared Txs of clusters l, l+1
    std::vector<int> cum_overlaps;    // K entries; [l-1] = total shared Txs up to cluster l
    int tx_count = 0;                 // M
    std::vector<std::vector<int>> groups;  // K entries, each r ascending Tx indices

    const std::vector<int>& group(int ell) const { return groups[static_cast<std::size_t>(ell - 1)]; }

    /// i-th transmitter of cluster ell (both 1-based).
    int tx_at(int ell, int i) const { return group(ell)[static_cast<std::size_t>(i - 1)]; }

    int first_tx(int ell) const { return group(ell).front(); }
    int last_tx(int ell) const { return group(ell).back(); }

    bool in_group(int ell, int q) const {
        const auto& g = group(ell);
        return std::binary_search(g.begin(), g.end(), q);
    }

    /// Clusters owning Tx q, ascending; size 1 or 2.
    std::vector<int> owner_clusters(int q) const {
        std::vector<int> owners;
        for (int ell = 1; ell <= cluster_count; ++ell) {
            if (in_group(ell, q)) owners.push_back(ell);
        }
        return owners;
    }
};

enum class Scheme { SingleV, TwoV };

inline const char* scheme_name(Scheme s) { return s == Scheme::SingleV ? "single_v" : "two_v"; }

/// Builds and validates a Topology from cluster count, cluster size and the
/// adjacent-pair overlap vector. Non-adjacent sharing is not representable.
inline Topology build_topology(int cluster_count, int txs_per_cluster, const std::vector<int>& overlaps) {
    if (cluster_count < 1) throw ConstraintViolation("cluster count must be >= 1");
    if (txs_per_cluster < 1) throw ConstraintViolation("txs per cluster must be >= 1");
    if (static_cast<int>(overlaps.size()) != cluster_count - 1) {
        throw DimensionError("overlaps must have length K-1 = " + std::to_string(cluster_count - 1) +
                             ", got " + std::to_string(overlaps.size()));
    }
    for (std::size_t i = 0; i < overlaps.size(); ++i) {
        if (overlaps[i] < 0 || overlaps[i] > txs_per_cluster) {
            throw ConstraintViolation("overlap between clusters " + std::to_string(i + 1) + " and " +
                                      std::to_string(i + 2) + " must lie in [0, r]");
        }
    }
    // A transmitter belongs to at most two clusters, so the overlaps on both
    // sides of an interior cluster cannot exceed its size.
    for (std::size_t i = 0; i + 1 < overlaps.size(); ++i) {
        if (overlaps[i] + overlaps[i + 1] > txs_per_cluster) {
            throw ConstraintViolation("cluster " + std::to_string(i + 2) +
                                      " would need more than r transmitters to honor both overlaps");
        }
    }

    Topology t;
    t.cluster_count = cluster_count;
    t.txs_per_cluster = txs_per_cluster;
    t.overlaps = overlaps;
    t.cum_overlaps.resize(static_cast<std::size_t>(cluster_count));
    t.cum_overlaps[0] = 0;
    for (int ell = 2; ell <= cluster_count; ++ell) {
        t.cum_overlaps[static_cast<std::size_t>(ell - 1)] =
            t.cum_overlaps[static_cast<std::size_t>(ell - 2)] + overlaps[static_cast<std::size_t>(ell - 2)];
    }
    t.tx_count = cluster_count * txs_per_cluster - t.cum_overlaps.back();

    t.groups.resize(static_cast<std::size_t>(cluster_count));
    for (int ell = 1; ell <= cluster_count; ++ell) {
        const int shift = t.cum_overlaps[static_cast<std::size_t>(ell - 1)];
        std::vector<int>& g = t.groups[static_cast<std::size_t>(ell - 1)];
        g.resize(static_cast<std::size_t>(txs_per_cluster));
        for (int i = 1; i <= txs_per_cluster; ++i) {
            g[static_cast<std::size_t>(i - 1)] = (ell - 1) * txs_per_cluster + i - shift;
        }
    }
    return t;
}

/// Number of (receiver, interfering transmitter) pairs: K(M - r).
inline long gamma_single(const Topology& t) {
    return static_cast<long>(t.cluster_count) * (t.tx_count - t.txs_per_cluster);
}

/// All (receiver, Tx) pairs where the Tx is outside the receiver's group, in
/// fixed (receiver ascending, Tx ascending) order. Exponent-vector positions
/// are derived from this order, so it must never change.
inline std::vector<std::pair<int, int>> interference_pairs(const Topology& t) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(gamma_single(t)));
    for (int ell = 1; ell <= t.cluster_count; ++ell) {
        for (int q = 1; q <= t.tx_count; ++q) {
            if (!t.in_group(ell, q)) pairs.emplace_back(ell, q);
        }
    }
    return pairs;
}

inline Scheme scheme_selector(const Topology& t) {
    for (int v : t.overlaps) {
        if (v >= 2) return Scheme::TwoV;
    }
    return Scheme::SingleV;
}

}  // namespace aircomp_ia
