#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "aircomp_ia/channel.hpp"
#include "aircomp_ia/dense.hpp"
#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/exact_linalg.hpp"
#include "aircomp_ia/rng.hpp"
#include "aircomp_ia/scalar.hpp"
#include "aircomp_ia/topology.hpp"
#include "aircomp_ia/transceiver.hpp"

namespace aircomp_ia {

// ---------------------------------------------------------------------------
// Generic power-product rank oracle
// ---------------------------------------------------------------------------

/// Random vectors plus pairwise-distinct exponent vectors; the induced
/// power-product matrix is full rank almost surely, and the exact determinant
/// decides each instance with no tolerance.
struct LemmaInstance {
    int size = 0;
    std::vector<std::vector<Rational>> vectors;   // vectors[k][i] = s_k(i)
    std::vector<std::vector<int>> exponents;      // exponents[j][k]
};

inline LemmaInstance draw_lemma_instance(int size, std::uint64_t seed, bool force_duplicate = false) {
    if (size < 1) throw InvalidParams("lemma size must be >= 1");
    LemmaInstance inst;
    inst.size = size;
    Rng rng = Rng::derive(seed, {kStreamLemma});
    ChannelParams params;  // nonzero continuous-like rational draws
    inst.vectors.assign(static_cast<std::size_t>(size), {});
    for (auto& v : inst.vectors) {
        v.reserve(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) v.push_back(draw_nonzero_scalar<Rational>(rng, params));
    }
    std::set<std::vector<int>> seen;
    while (static_cast<int>(inst.exponents.size()) < size) {
        std::vector<int> alpha(static_cast<std::size_t>(size));
        for (int& e : alpha) e = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(size) + 1));
        if (seen.insert(alpha).second) inst.exponents.push_back(std::move(alpha));
    }
    if (force_duplicate && size >= 2) inst.exponents[1] = inst.exponents[0];
    return inst;
}

inline ColMatrix<Rational> lemma_matrix(const LemmaInstance& inst) {
    const int size = inst.size;
    ColMatrix<Rational> m(size, size);
    for (int j = 0; j < size; ++j) {
        for (int i = 0; i < size; ++i) {
            Rational entry(1);
            for (int k = 0; k < size; ++k) {
                const int e = inst.exponents[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                if (e != 0) {
                    entry *= pow_nonneg(inst.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)],
                                        static_cast<unsigned>(e));
                }
            }
            m(i, j) = entry;
        }
    }
    return m;
}

/// Fraction of instances with nonzero exact determinant. The exactness is the
/// point: a floating determinant cannot certify an almost-sure claim.
inline double lemma_trial_campaign(int size, std::uint64_t trials, std::uint64_t seed,
                                   bool force_duplicate = false) {
    if (size > 8) throw ValidationError("lemma oracle is budgeted for sizes up to 8");
    if (trials == 0) throw InvalidParams("at least one trial required");
    std::uint64_t full_rank = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = Rng::derive(seed, {kStreamLemma, t}).next_u64();
        const LemmaInstance inst = draw_lemma_instance(size, trial_seed, force_duplicate);
        if (determinant_is_nonzero(lemma_matrix(inst))) ++full_rank;
    }
    return static_cast<double>(full_rank) / static_cast<double>(trials);
}

// ---------------------------------------------------------------------------
// Baseline schemes
// ---------------------------------------------------------------------------

struct BaselineReport {
    std::string scheme;
    Rational per_cluster_dof;
    Rational sum_dof;
    Rational gain_vs_theorem;  // achievable-bound sum over baseline sum
    bool slot_recovery_ok = true;
    std::uint64_t slot_trials = 0;
};

inline Rational theorem_sum_dof(const Topology& topo) {
    return scheme_selector(topo) == Scheme::SingleV ? make_fraction(topo.cluster_count, 2)
                                                    : make_fraction(topo.cluster_count, 3);
}

/// Time-sharing across clusters: each cluster gets a 1/K slot, total 1.
/// Optionally replays the per-slot equalized sum (chain only, no IA) in exact
/// arithmetic to confirm noise-free recovery.
inline BaselineReport baseline_tdma(const Topology& topo, std::uint64_t slot_trials, unsigned p,
                                    std::uint64_t seed) {
    BaselineReport report;
    report.scheme = "tdma_aircomp";
    report.per_cluster_dof = make_fraction(1, topo.cluster_count);
    report.sum_dof = Rational(1);
    report.gain_vs_theorem = theorem_sum_dof(topo) / report.sum_dof;
    report.slot_trials = slot_trials;

    ChannelParams params;
    for (std::uint64_t trial = 0; trial < slot_trials; ++trial) {
        const std::uint64_t trial_seed = Rng::derive(seed, {kStreamTdma, trial}).next_u64();
        const ChannelSet<Rational> channels = draw_channels<Rational>(topo, 1, params, trial_seed);
        Rng msg_rng = Rng::derive(trial_seed, {kStreamMessages});
        for (int ell = 1; ell <= topo.cluster_count; ++ell) {
            // Per-slot chain: free diagonal on the cluster's first Tx, the
            // rest equalized against it; only this cluster transmits.
            const int t1 = topo.first_tx(ell);
            Rng seed_rng = Rng::derive(trial_seed, {kStreamSeedMatrix, static_cast<std::uint64_t>(ell)});
            const Rational c1 = draw_nonzero_scalar<Rational>(seed_rng, params);
            Rational received(0);
            unsigned truth = 0;
            for (int q : topo.group(ell)) {
                const Rational& h_q = channels.diagonal(ell, q)[0];
                const Rational& h_1 = channels.diagonal(ell, t1)[0];
                const Rational c_q = h_1 * c1 / h_q;
                const auto symbol = static_cast<unsigned>(msg_rng.next_below(p));
                truth = (truth + symbol) % p;
                received += h_q * c_q * ScalarTraits<Rational>::from_double(modulate(symbol, p));
            }
            const Rational gain = channels.diagonal(ell, t1)[0] * c1;
            const double aligned = Rational(received / gain).get_d();
            if (demodulate_sum(aligned, topo.txs_per_cluster, p) != truth) {
                report.slot_recovery_ok = false;
            }
        }
    }
    return report;
}

/// Interference alignment without the over-the-air sum: r time slots, each a
/// K-user interference channel, so the network total is K/(2r). The per-slot
/// structure is the single-V machinery over singleton clusters, which the
/// verification command can replay directly.
inline BaselineReport baseline_ia_only(const Topology& topo) {
    BaselineReport report;
    report.scheme = "ia_only";
    report.per_cluster_dof = make_fraction(1, 2 * topo.txs_per_cluster);
    report.sum_dof = make_fraction(topo.cluster_count, 2 * topo.txs_per_cluster);
    report.gain_vs_theorem = theorem_sum_dof(topo) / report.sum_dof;
    return report;
}

}  // namespace aircomp_ia
