#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "aircomp_ia/channel.hpp"
#include "aircomp_ia/dense.hpp"
#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/rng.hpp"
#include "aircomp_ia/scalar.hpp"
#include "aircomp_ia/topology.hpp"

namespace aircomp_ia {

inline constexpr std::uint64_t kDefaultMaxColumns = 1ull << 24;

// Weight of each cluster term a transmitter emits in the two-V scheme. A
// shared Tx superposes two such terms; keeping the weight common across all
// in-cluster terms is what lets the receiver divide out one known scale.
inline constexpr double kTwoVTermWeight = 0.70710678118654752440;  // 1/sqrt(2)

// ---------------------------------------------------------------------------
// Exponent machinery
// ---------------------------------------------------------------------------

/// Non-negative integer exponents, one per generator position, each <= bound.
struct ExponentVector {
    std::vector<int> values;
    int bound = 0;
};

inline std::uint64_t checked_pow_u64(std::uint64_t base, int exp) {
    std::uint64_t result = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && result > UINT64_MAX / base) {
            throw SizeOverflow("integer power overflows 64 bits");
        }
        result *= base;
    }
    return result;
}

/// (bound+1)^dimension, the number of exponent vectors.
inline std::uint64_t exponent_count(int dimension, int bound) {
    if (dimension < 0 || bound < 0) throw InvalidParams("dimension and bound must be non-negative");
    return checked_pow_u64(static_cast<std::uint64_t>(bound) + 1, dimension);
}

/// Vector at a given position of the lexicographic order (first coordinate
/// most significant, all-zeros first).
inline ExponentVector exponent_at(std::uint64_t index, int dimension, int bound) {
    ExponentVector e;
    e.bound = bound;
    e.values.assign(static_cast<std::size_t>(dimension), 0);
    const auto radix = static_cast<std::uint64_t>(bound) + 1;
    for (int i = dimension - 1; i >= 0; --i) {
        e.values[static_cast<std::size_t>(i)] = static_cast<int>(index % radix);
        index /= radix;
    }
    return e;
}

/// Inverse of exponent_at for any per-entry bound >= the stored values.
inline std::uint64_t exponent_index(const std::vector<int>& values, int bound) {
    const auto radix = static_cast<std::uint64_t>(bound) + 1;
    std::uint64_t index = 0;
    for (int v : values) index = index * radix + static_cast<std::uint64_t>(v);
    return index;
}

/// All (bound+1)^dimension exponent vectors in lexicographic order.
inline std::vector<ExponentVector> enumerate_exponents(int dimension, int bound,
                                                       std::uint64_t max_columns = kDefaultMaxColumns) {
    const std::uint64_t count = exponent_count(dimension, bound);
    if (count > max_columns) {
        throw SizeOverflow("exponent enumeration of " + std::to_string(count) +
                           " vectors exceeds the column cap of " + std::to_string(max_columns));
    }
    std::vector<ExponentVector> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(exponent_at(i, dimension, bound));
    return out;
}

// ---------------------------------------------------------------------------
// Symbolic bookkeeping
// ---------------------------------------------------------------------------

/// Exact factorization of an effective matrix into channel-matrix powers and
/// free-seed powers. Used for the containment and column-uniqueness checks,
/// which must not depend on floating comparisons.
struct SymbolicFactors {
    std::map<std::pair<int, int>, int> channels;  // (observer, tx) -> exponent
    std::map<int, int> seeds;                     // seed id -> exponent

    void add_channel(int observer, int tx, int exponent) {
        const auto key = std::make_pair(observer, tx);
        const int v = (channels[key] += exponent);
        if (v == 0) channels.erase(key);
    }
    void add_seed(int id, int exponent) {
        const int v = (seeds[id] += exponent);
        if (v == 0) seeds.erase(id);
    }
    void add_scaled(const SymbolicFactors& other, int multiplier) {
        for (const auto& [key, e] : other.channels) add_channel(key.first, key.second, e * multiplier);
        for (const auto& [id, e] : other.seeds) add_seed(id, e * multiplier);
    }
    bool operator==(const SymbolicFactors&) const = default;
    auto operator<=>(const SymbolicFactors&) const = default;
};

// ---------------------------------------------------------------------------
// Generator sets
// ---------------------------------------------------------------------------

/// Identifies which interference term an effective matrix came from.
/// dest_cluster is 0 in the single-V scheme (one global chain per Tx).
struct GeneratorLabel {
    int observer = 0;
    int tx = 0;
    int dest_cluster = 0;
    bool operator==(const GeneratorLabel&) const = default;
};

template <ScalarField S>
struct GeneratorSet {
    std::int64_t rows = 0;
    std::vector<GeneratorLabel> labels;
    std::vector<std::vector<S>> diagonals;
    std::vector<SymbolicFactors> factors;

    std::size_t size() const { return labels.size(); }

    /// Index of a label, or -1 when absent.
    std::int64_t find(const GeneratorLabel& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == label) return static_cast<std::int64_t>(i);
        }
        return -1;
    }
};

// ---------------------------------------------------------------------------
// AirComp chains
// ---------------------------------------------------------------------------

/// Single-V chain: one diagonal per transmitter, equalizing every cluster's
/// in-group effective channels. Free seeds exist exactly for clusters that do
/// not overlap their predecessor; everything else follows by recursion.
template <ScalarField S>
struct CChain {
    std::vector<std::vector<S>> diag_by_tx;        // index q-1
    std::vector<SymbolicFactors> factors_by_tx;    // seed ids are seed Tx indices
    std::vector<int> seed_txs;
};

template <ScalarField S>
std::vector<S> draw_free_diagonal(std::int64_t rows, const ChannelParams& params, Rng rng) {
    std::vector<S> d;
    d.reserve(static_cast<std::size_t>(rows));
    for (std::int64_t t = 0; t < rows; ++t) d.push_back(draw_nonzero_scalar<S>(rng, params));
    return d;
}

template <ScalarField S>
CChain<S> build_c_chain(const Topology& topo, const ChannelSet<S>& channels, std::uint64_t seed) {
    if (scheme_selector(topo) != Scheme::SingleV) {
        throw UnsupportedMode("the single chain requires every overlap to be at most 1");
    }
    CChain<S> chain;
    chain.diag_by_tx.resize(static_cast<std::size_t>(topo.tx_count));
    chain.factors_by_tx.resize(static_cast<std::size_t>(topo.tx_count));

    for (int ell = 1; ell <= topo.cluster_count; ++ell) {
        const int t1 = topo.first_tx(ell);
        const int overlap_before = (ell == 1) ? 0 : topo.overlaps[static_cast<std::size_t>(ell - 2)];
        auto& first_diag = chain.diag_by_tx[static_cast<std::size_t>(t1 - 1)];
        if (overlap_before == 0) {
            first_diag = draw_free_diagonal<S>(
                channels.block_length, channels.params,
                Rng::derive(seed, {kStreamSeedMatrix, static_cast<std::uint64_t>(ell)}));
            chain.factors_by_tx[static_cast<std::size_t>(t1 - 1)].add_seed(t1, 1);
            chain.seed_txs.push_back(t1);
        }
        // overlap 1 means t1 is the previous cluster's last Tx, already set.
        const std::vector<S>& h_first = channels.diagonal(ell, t1);
        for (int i = 2; i <= topo.txs_per_cluster; ++i) {
            const int q = topo.tx_at(ell, i);
            const std::vector<S>& h_q = channels.diagonal(ell, q);
            auto& diag = chain.diag_by_tx[static_cast<std::size_t>(q - 1)];
            diag.resize(static_cast<std::size_t>(channels.block_length));
            for (std::size_t t = 0; t < diag.size(); ++t) {
                if (ScalarTraits<S>::is_zero(h_q[t])) throw SingularChannel("zero channel diagonal entry");
                diag[t] = h_first[t] * first_diag[t] * ScalarTraits<S>::invert(h_q[t]);
            }
            SymbolicFactors& f = chain.factors_by_tx[static_cast<std::size_t>(q - 1)];
            f = chain.factors_by_tx[static_cast<std::size_t>(t1 - 1)];
            f.add_channel(ell, t1, 1);
            f.add_channel(ell, q, -1);
        }
    }
    return chain;
}

/// Two-V chains: an independent chain per cluster, seed ids are cluster
/// indices. A shared Tx owns one diagonal per owning cluster.
template <ScalarField S>
struct ClusterChains {
    std::vector<std::map<int, std::vector<S>>> diag;       // index ell-1, keyed by tx
    std::vector<std::map<int, SymbolicFactors>> factors;
};

template <ScalarField S>
ClusterChains<S> build_cluster_chains(const Topology& topo, const ChannelSet<S>& channels, std::uint64_t seed) {
    ClusterChains<S> chains;
    chains.diag.resize(static_cast<std::size_t>(topo.cluster_count));
    chains.factors.resize(static_cast<std::size_t>(topo.cluster_count));
    for (int ell = 1; ell <= topo.cluster_count; ++ell) {
        const int t1 = topo.first_tx(ell);
        auto& diag_map = chains.diag[static_cast<std::size_t>(ell - 1)];
        auto& factor_map = chains.factors[static_cast<std::size_t>(ell - 1)];
        diag_map[t1] = draw_free_diagonal<S>(
            channels.block_length, channels.params,
            Rng::derive(seed, {kStreamSeedMatrix, static_cast<std::uint64_t>(ell)}));
        factor_map[t1].add_seed(ell, 1);

        const std::vector<S>& h_first = channels.diagonal(ell, t1);
        const std::vector<S>& first_diag = diag_map[t1];
        for (int i = 2; i <= topo.txs_per_cluster; ++i) {
            const int q = topo.tx_at(ell, i);
            const std::vector<S>& h_q = channels.diagonal(ell, q);
            std::vector<S> d(static_cast<std::size_t>(channels.block_length));
            for (std::size_t t = 0; t < d.size(); ++t) {
                if (ScalarTraits<S>::is_zero(h_q[t])) throw SingularChannel("zero channel diagonal entry");
                d[t] = h_first[t] * first_diag[t] * ScalarTraits<S>::invert(h_q[t]);
            }
            diag_map[q] = std::move(d);
            SymbolicFactors f = factor_map[t1];
            f.add_channel(ell, t1, 1);
            f.add_channel(ell, q, -1);
            factor_map[q] = std::move(f);
        }
    }
    return chains;
}

// ---------------------------------------------------------------------------
// Generator set construction
// ---------------------------------------------------------------------------

template <ScalarField S>
GeneratorSet<S> build_generator_set_single(const Topology& topo, const ChannelSet<S>& channels,
                                           const CChain<S>& chain) {
    GeneratorSet<S> gens;
    gens.rows = channels.block_length;
    for (const auto& [ell, q] : interference_pairs(topo)) {
        const std::vector<S>& h = channels.diagonal(ell, q);
        const std::vector<S>& c = chain.diag_by_tx[static_cast<std::size_t>(q - 1)];
        std::vector<S> d(static_cast<std::size_t>(channels.block_length));
        for (std::size_t t = 0; t < d.size(); ++t) d[t] = h[t] * c[t];
        gens.labels.push_back({ell, q, 0});
        gens.diagonals.push_back(std::move(d));
        SymbolicFactors f = chain.factors_by_tx[static_cast<std::size_t>(q - 1)];
        f.add_channel(ell, q, 1);
        gens.factors.push_back(std::move(f));
    }
    return gens;
}

inline int cluster_parity(int ell) { return (ell % 2 == 1) ? 1 : 2; }

/// All effective matrices that pre-multiply V_parity in any interference
/// term: dest cluster of that parity, any of its Txs, observed anywhere else.
/// Ordered by (dest, tx, observer) so exponent positions are reproducible.
template <ScalarField S>
GeneratorSet<S> build_generator_set_two_v(const Topology& topo, const ChannelSet<S>& channels,
                                          const ClusterChains<S>& chains, int parity) {
    GeneratorSet<S> gens;
    gens.rows = channels.block_length;
    for (int dest = 1; dest <= topo.cluster_count; ++dest) {
        if (cluster_parity(dest) != parity) continue;
        for (int tx : topo.group(dest)) {
            for (int observer = 1; observer <= topo.cluster_count; ++observer) {
                if (observer == dest) continue;
                const std::vector<S>& h = channels.diagonal(observer, tx);
                const std::vector<S>& c = chains.diag[static_cast<std::size_t>(dest - 1)].at(tx);
                std::vector<S> d(static_cast<std::size_t>(channels.block_length));
                for (std::size_t t = 0; t < d.size(); ++t) d[t] = h[t] * c[t];
                gens.labels.push_back({observer, tx, dest});
                gens.diagonals.push_back(std::move(d));
                SymbolicFactors f = chains.factors[static_cast<std::size_t>(dest - 1)].at(tx);
                f.add_channel(observer, tx, 1);
                gens.factors.push_back(std::move(f));
            }
        }
    }
    return gens;
}

/// Sizes of the two parity generator sets, (odd, even), without building them.
inline std::pair<long, long> gamma_two(const Topology& topo) {
    long odd = 0, even = 0;
    for (int dest = 1; dest <= topo.cluster_count; ++dest) {
        const long count = static_cast<long>(topo.txs_per_cluster) * (topo.cluster_count - 1);
        (cluster_parity(dest) == 1 ? odd : even) += count;
    }
    return {odd, even};
}

// ---------------------------------------------------------------------------
// IA matrices
// ---------------------------------------------------------------------------

/// One power-product column: (prod_i G_i^{e_i}) * basis, computed entry-wise.
template <ScalarField S>
std::vector<S> exponent_column(const GeneratorSet<S>& gens, const std::vector<int>& exponents,
                               const std::vector<S>& basis) {
    if (exponents.size() != gens.size()) throw DimensionError("one exponent per generator required");
    std::vector<S> col(basis.begin(), basis.end());
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        const int e = exponents[i];
        if (e == 0) continue;
        const std::vector<S>& g = gens.diagonals[i];
        if (e == 1) {
            for (std::size_t t = 0; t < col.size(); ++t) col[t] *= g[t];
        } else {
            for (std::size_t t = 0; t < col.size(); ++t) col[t] *= pow_nonneg(g[t], static_cast<unsigned>(e));
        }
    }
    return col;
}

template <ScalarField S>
ColMatrix<S> build_power_product_matrix(const GeneratorSet<S>& gens, int bound, const std::vector<S>& basis,
                                        std::uint64_t max_columns) {
    for (const S& b : basis) {
        if (ScalarTraits<S>::is_zero(b)) throw InvalidParams("basis vector entries must be nonzero");
    }
    if (static_cast<std::int64_t>(basis.size()) != gens.rows) {
        throw DimensionError("basis length does not match the generator block length");
    }
    const int dim = static_cast<int>(gens.size());
    const std::uint64_t count = exponent_count(dim, bound);
    if (count > max_columns) {
        throw SizeOverflow("matrix of " + std::to_string(count) + " columns exceeds the cap of " +
                           std::to_string(max_columns));
    }
    ColMatrix<S> m(gens.rows, static_cast<std::int64_t>(count));
    for (std::uint64_t j = 0; j < count; ++j) {
        m.set_column(static_cast<std::int64_t>(j),
                     exponent_column(gens, exponent_at(j, dim, bound).values, basis));
    }
    return m;
}

/// IA precoder: exponents 0..n-1 per generator.
template <ScalarField S>
ColMatrix<S> build_iav(const GeneratorSet<S>& gens, int n, const std::vector<S>& basis,
                       std::uint64_t max_columns = kDefaultMaxColumns) {
    if (n < 1) throw InvalidParams("n must be >= 1");
    return build_power_product_matrix(gens, n - 1, basis, max_columns);
}

/// Interference-span basis: exponents 0..n, so multiplying any column of V by
/// a generator lands on a column of W.
template <ScalarField S>
ColMatrix<S> build_iaw(const GeneratorSet<S>& gens, int n, const std::vector<S>& basis,
                       std::uint64_t max_columns = kDefaultMaxColumns) {
    if (n < 1) throw InvalidParams("n must be >= 1");
    return build_power_product_matrix(gens, n, basis, max_columns);
}

// ---------------------------------------------------------------------------
// Precoder set
// ---------------------------------------------------------------------------

template <ScalarField S>
struct PrecoderSet {
    Scheme scheme = Scheme::SingleV;
    int n = 1;

    // Single-V pieces.
    CChain<S> chain;
    GeneratorSet<S> generators;
    ColMatrix<S> v, w;

    // Two-V pieces. Index 0 = odd parity, 1 = even parity.
    ClusterChains<S> cluster_chains;
    GeneratorSet<S> generators_by_parity[2];
    std::vector<S> xi[2];
    ColMatrix<S> v_by_parity[2], w_by_parity[2];

    const GeneratorSet<S>& parity_generators(int parity) const { return generators_by_parity[parity - 1]; }
    const ColMatrix<S>& parity_v(int parity) const { return v_by_parity[parity - 1]; }
    const ColMatrix<S>& parity_w(int parity) const { return w_by_parity[parity - 1]; }
    const std::vector<S>& parity_basis(int parity) const { return xi[parity - 1]; }

    std::uint64_t useful_columns(int ell) const {
        if (scheme == Scheme::SingleV) {
            return exponent_count(static_cast<int>(generators.size()), n - 1);
        }
        const int parity = cluster_parity(ell);
        return exponent_count(static_cast<int>(parity_generators(parity).size()), n - 1);
    }
};

template <ScalarField S>
PrecoderSet<S> build_single_v(const Topology& topo, const ChannelSet<S>& channels, int n, std::uint64_t seed,
                              std::uint64_t max_columns = kDefaultMaxColumns, bool materialize = true) {
    PrecoderSet<S> p;
    p.scheme = Scheme::SingleV;
    p.n = n;
    p.chain = build_c_chain(topo, channels, seed);
    p.generators = build_generator_set_single(topo, channels, p.chain);
    if (materialize) {
        const std::vector<S> ones(static_cast<std::size_t>(channels.block_length), ScalarTraits<S>::one());
        p.v = build_iav(p.generators, n, ones, max_columns);
        p.w = build_iaw(p.generators, n, ones, max_columns);
    }
    return p;
}

template <ScalarField S>
PrecoderSet<S> build_two_v(const Topology& topo, const ChannelSet<S>& channels, int n, std::uint64_t seed,
                           std::uint64_t max_columns = kDefaultMaxColumns, bool materialize = true) {
    PrecoderSet<S> p;
    p.scheme = Scheme::TwoV;
    p.n = n;
    p.cluster_chains = build_cluster_chains(topo, channels, seed);
    for (int parity = 1; parity <= 2; ++parity) {
        p.generators_by_parity[parity - 1] =
            build_generator_set_two_v(topo, channels, p.cluster_chains, parity);
        p.xi[parity - 1] = draw_free_diagonal<S>(
            channels.block_length, channels.params,
            Rng::derive(seed, {kStreamXi, static_cast<std::uint64_t>(parity)}));
        if (materialize) {
            p.v_by_parity[parity - 1] =
                build_iav(p.generators_by_parity[parity - 1], n, p.xi[parity - 1], max_columns);
            p.w_by_parity[parity - 1] =
                build_iaw(p.generators_by_parity[parity - 1], n, p.xi[parity - 1], max_columns);
        }
    }
    return p;
}

template <ScalarField S>
PrecoderSet<S> build_precoders(const Topology& topo, const ChannelSet<S>& channels, int n, std::uint64_t seed,
                               std::uint64_t max_columns = kDefaultMaxColumns, bool materialize = true,
                               Scheme scheme = Scheme::SingleV, bool scheme_forced = false) {
    const Scheme chosen = scheme_forced ? scheme : scheme_selector(topo);
    if (chosen == Scheme::SingleV) return build_single_v(topo, channels, n, seed, max_columns, materialize);
    return build_two_v(topo, channels, n, seed, max_columns, materialize);
}

// ---------------------------------------------------------------------------
// Transmit signals
// ---------------------------------------------------------------------------

/// Codeword amplitudes for one transmitter. Single-V uses `single`; two-V
/// carries one vector per destination cluster the Tx belongs to.
template <ScalarField S>
struct TxPayload {
    std::vector<S> single;
    std::map<int, std::vector<S>> by_dest;
};

namespace detail {
template <ScalarField S>
void accumulate_precoded(std::vector<S>& out, const ColMatrix<S>& ia, const std::vector<S>& payload,
                         const std::vector<S>& chain_diag, const S& weight) {
    if (static_cast<std::int64_t>(payload.size()) != ia.cols()) {
        throw DimensionError("payload length does not match the IA column count");
    }
    std::vector<S> mixed(static_cast<std::size_t>(ia.rows()), ScalarTraits<S>::zero());
    for (std::int64_t j = 0; j < ia.cols(); ++j) {
        const S& x = payload[static_cast<std::size_t>(j)];
        if (ScalarTraits<S>::is_zero(x)) continue;
        auto col = ia.column(j);
        for (std::size_t t = 0; t < mixed.size(); ++t) mixed[t] += col[t] * x;
    }
    for (std::size_t t = 0; t < mixed.size(); ++t) out[t] += weight * chain_diag[t] * mixed[t];
}
}  // namespace detail

/// Unscaled-then-scaled transmit vector of one Tx. `scale` is the common
/// power factor decided at the encoder level; pass one() to get the raw
/// superposition.
template <ScalarField S>
std::vector<S> tx_signal(const PrecoderSet<S>& prec, const Topology& topo, int q, const TxPayload<S>& payload,
                         const S& scale) {
    if (prec.scheme == Scheme::SingleV) {
        if (prec.v.rows() == 0) throw SizeOverflow("IA matrices were not materialized");
        std::vector<S> out(static_cast<std::size_t>(prec.v.rows()), ScalarTraits<S>::zero());
        detail::accumulate_precoded(out, prec.v, payload.single,
                                    prec.chain.diag_by_tx[static_cast<std::size_t>(q - 1)],
                                    ScalarTraits<S>::one());
        for (S& value : out) value = value * scale;
        return out;
    }

    const S weight = ScalarTraits<S>::from_double(kTwoVTermWeight);
    std::vector<S> out;
    for (int ell : topo.owner_clusters(q)) {
        const int parity = cluster_parity(ell);
        const ColMatrix<S>& ia = prec.parity_v(parity);
        if (ia.rows() == 0) throw SizeOverflow("IA matrices were not materialized");
        if (out.empty()) out.assign(static_cast<std::size_t>(ia.rows()), ScalarTraits<S>::zero());
        const auto payload_it = payload.by_dest.find(ell);
        if (payload_it == payload.by_dest.end()) {
            throw DimensionError("missing payload for destination cluster " + std::to_string(ell));
        }
        detail::accumulate_precoded(out, ia, payload_it->second,
                                    prec.cluster_chains.diag[static_cast<std::size_t>(ell - 1)].at(q), weight);
    }
    for (S& value : out) value = value * scale;
    return out;
}

// ---------------------------------------------------------------------------
// Structural checks used by tests and the verification command
// ---------------------------------------------------------------------------

/// Worst relative deviation from the in-cluster equalization condition
/// H(ell,q) C_q == H(ell,t1) C_t1; exactly zero in exact mode.
template <ScalarField S>
double aircomp_residual(const Topology& topo, const ChannelSet<S>& channels, const PrecoderSet<S>& prec) {
    double worst = 0.0;
    for (int ell = 1; ell <= topo.cluster_count; ++ell) {
        const int t1 = topo.first_tx(ell);
        for (int q : topo.group(ell)) {
            const std::vector<S>& h_q = channels.diagonal(ell, q);
            const std::vector<S>& h_1 = channels.diagonal(ell, t1);
            const std::vector<S>* c_q = nullptr;
            const std::vector<S>* c_1 = nullptr;
            if (prec.scheme == Scheme::SingleV) {
                c_q = &prec.chain.diag_by_tx[static_cast<std::size_t>(q - 1)];
                c_1 = &prec.chain.diag_by_tx[static_cast<std::size_t>(t1 - 1)];
            } else {
                c_q = &prec.cluster_chains.diag[static_cast<std::size_t>(ell - 1)].at(q);
                c_1 = &prec.cluster_chains.diag[static_cast<std::size_t>(ell - 1)].at(t1);
            }
            double num = 0.0, den = 0.0;
            for (std::size_t t = 0; t < c_q->size(); ++t) {
                const S lhs = h_q[t] * (*c_q)[t];
                const S rhs = h_1[t] * (*c_1)[t];
                num += ScalarTraits<S>::abs2(S(lhs - rhs));
                den += ScalarTraits<S>::abs2(rhs);
            }
            if (den > 0.0) worst = std::max(worst, std::sqrt(num / den));
        }
    }
    return worst;
}

}  // namespace aircomp_ia
