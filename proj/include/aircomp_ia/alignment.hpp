#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "aircomp_ia/channel.hpp"
#include "aircomp_ia/dense.hpp"
#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/exact_linalg.hpp"
#include "aircomp_ia/float_linalg.hpp"
#include "aircomp_ia/precoding.hpp"
#include "aircomp_ia/scalar.hpp"
#include "aircomp_ia/topology.hpp"

namespace aircomp_ia {

// ---------------------------------------------------------------------------
// Blocklength
// ---------------------------------------------------------------------------

/// Blocklength for the selected scheme at a given n.
/// Single-V: n^g + (n+1)^g with g = K(M-r).
/// Two-V:    max_p(n^gp) + (n+1)^g1 + (n+1)^g2, which reduces to the
///           symmetric n^g + 2(n+1)^g when g1 == g2.
inline std::uint64_t blocklength(const Topology& topo, int n) {
    if (n < 1) throw InvalidParams("n must be >= 1");
    const auto nn = static_cast<std::uint64_t>(n);
    if (scheme_selector(topo) == Scheme::SingleV) {
        const int g = static_cast<int>(gamma_single(topo));
        const std::uint64_t useful = checked_pow_u64(nn, g);
        const std::uint64_t interference = checked_pow_u64(nn + 1, g);
        if (useful > UINT64_MAX - interference) throw SizeOverflow("blocklength overflows 64 bits");
        return useful + interference;
    }
    const auto [g1, g2] = gamma_two(topo);
    const std::uint64_t useful =
        std::max(checked_pow_u64(nn, static_cast<int>(g1)), checked_pow_u64(nn, static_cast<int>(g2)));
    const std::uint64_t w1 = checked_pow_u64(nn + 1, static_cast<int>(g1));
    const std::uint64_t w2 = checked_pow_u64(nn + 1, static_cast<int>(g2));
    if (w1 > UINT64_MAX - w2 || useful > UINT64_MAX - w1 - w2) {
        throw SizeOverflow("blocklength overflows 64 bits");
    }
    return useful + w1 + w2;
}

// ---------------------------------------------------------------------------
// Signal + interference matrix
// ---------------------------------------------------------------------------

/// Effective diagonal in front of the useful block at receiver ell.
template <ScalarField S>
std::vector<S> useful_diagonal(int ell, const PrecoderSet<S>& prec, const Topology& topo,
                               const ChannelSet<S>& channels) {
    const int t1 = topo.first_tx(ell);
    const std::vector<S>& h = channels.diagonal(ell, t1);
    const std::vector<S>& c =
        prec.scheme == Scheme::SingleV
            ? prec.chain.diag_by_tx[static_cast<std::size_t>(t1 - 1)]
            : prec.cluster_chains.diag[static_cast<std::size_t>(ell - 1)].at(t1);
    std::vector<S> d(h.size());
    for (std::size_t t = 0; t < h.size(); ++t) d[t] = h[t] * c[t];
    return d;
}

/// Lambda_ell = [useful block | interference basis]. Square T x T in the
/// single-V scheme; square or tall in the two-V scheme.
template <ScalarField S>
ColMatrix<S> assemble_lambda(int ell, const PrecoderSet<S>& prec, const Topology& topo,
                             const ChannelSet<S>& channels) {
    const std::vector<S> gain = useful_diagonal(ell, prec, topo, channels);
    const ColMatrix<S>& ia = prec.scheme == Scheme::SingleV ? prec.v : prec.parity_v(cluster_parity(ell));
    if (ia.rows() == 0) throw SizeOverflow("IA matrices were not materialized");
    if (ia.rows() != channels.block_length) throw DimensionError("IA matrix rows do not match block length");

    ColMatrix<S> useful(ia.rows(), ia.cols());
    for (std::int64_t j = 0; j < ia.cols(); ++j) {
        auto src = ia.column(j);
        auto dst = useful.column(j);
        for (std::size_t t = 0; t < src.size(); ++t) dst[t] = gain[t] * src[t];
    }
    if (prec.scheme == Scheme::SingleV) {
        return hcat<S>({&useful, &prec.w});
    }
    return hcat<S>({&useful, &prec.parity_w(1), &prec.parity_w(2)});
}

// ---------------------------------------------------------------------------
// Containment
// ---------------------------------------------------------------------------

struct ContainmentOptions {
    std::uint64_t column_sample_cap = 256;  // per interference term
};

struct ContainmentReport {
    double max_residual = 0.0;              // over all sampled columns, all receivers
    std::vector<double> per_receiver;       // index ell-1
    std::uint64_t columns_checked = 0;
};

namespace detail {
inline std::vector<std::uint64_t> sample_indices(std::uint64_t count, std::uint64_t cap) {
    std::vector<std::uint64_t> idx;
    if (count <= cap) {
        idx.reserve(static_cast<std::size_t>(count));
        for (std::uint64_t i = 0; i < count; ++i) idx.push_back(i);
        return idx;
    }
    idx.reserve(static_cast<std::size_t>(cap));
    for (std::uint64_t k = 0; k < cap; ++k) {
        idx.push_back(static_cast<std::uint64_t>((static_cast<unsigned __int128>(count - 1) * k) / (cap - 1)));
    }
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

/// Relative infinity-norm deviation between g .* v_col and the W column the
/// bookkeeping maps it to. Exact scalars must match exactly.
template <ScalarField S>
double column_residual(const std::vector<S>& g, const std::vector<S>& v_col, const std::vector<S>& w_col) {
    double worst = 0.0, scale = 0.0;
    for (std::size_t t = 0; t < v_col.size(); ++t) {
        const S lhs = g[t] * v_col[t];
        if constexpr (ScalarTraits<S>::exact) {
            if (lhs != w_col[t]) return 1.0;  // exact mismatch: report as gross
        } else {
            worst = std::max(worst, ScalarTraits<S>::abs_value(S(lhs - w_col[t])));
            scale = std::max(scale, ScalarTraits<S>::abs_value(w_col[t]));
        }
    }
    if constexpr (ScalarTraits<S>::exact) return 0.0;
    return scale > 0.0 ? worst / scale : worst;
}
}  // namespace detail

/// Verifies, term by term, that every interference column is a column of the
/// matching W: the generator must be present in the set (else the
/// construction is broken -> ContainmentFailure) and the exponent shift must
/// stay within the W bound (index arithmetic, exact). Numeric residuals are
/// evaluated on a deterministic evenly spaced column sample at whatever block
/// length the channels were drawn with; the product identities hold row-wise,
/// so a row window loses nothing structurally.
template <ScalarField S>
ContainmentReport check_containment(const Topology& topo, const ChannelSet<S>& channels,
                                    const PrecoderSet<S>& prec, const ContainmentOptions& opts = {}) {
    ContainmentReport report;
    report.per_receiver.assign(static_cast<std::size_t>(topo.cluster_count), 0.0);

    const std::vector<S> ones(static_cast<std::size_t>(channels.block_length), ScalarTraits<S>::one());

    struct Term {
        int observer;
        const GeneratorSet<S>* gens;
        const std::vector<S>* basis;
        GeneratorLabel label;
    };
    std::vector<Term> terms;
    if (prec.scheme == Scheme::SingleV) {
        for (const auto& [ell, q] : interference_pairs(topo)) {
            terms.push_back({ell, &prec.generators, &ones, GeneratorLabel{ell, q, 0}});
        }
    } else {
        for (int ell = 1; ell <= topo.cluster_count; ++ell) {
            for (int dest = 1; dest <= topo.cluster_count; ++dest) {
                if (dest == ell) continue;
                const int parity = cluster_parity(dest);
                for (int tx : topo.group(dest)) {
                    terms.push_back({ell, &prec.parity_generators(parity), &prec.parity_basis(parity),
                                     GeneratorLabel{ell, tx, dest}});
                }
            }
        }
    }

    for (const Term& term : terms) {
        const std::int64_t gi = term.gens->find(term.label);
        if (gi < 0) {
            throw ContainmentFailure("no generator for interference at receiver " +
                                     std::to_string(term.label.observer) + " from tx " +
                                     std::to_string(term.label.tx));
        }
        const int dim = static_cast<int>(term.gens->size());
        const std::uint64_t v_columns = exponent_count(dim, prec.n - 1);
        for (std::uint64_t j : detail::sample_indices(v_columns, opts.column_sample_cap)) {
            ExponentVector alpha = exponent_at(j, dim, prec.n - 1);
            std::vector<int> beta = alpha.values;
            beta[static_cast<std::size_t>(gi)] += 1;
            for (int e : beta) {
                if (e > prec.n) {
                    throw ContainmentFailure("shifted exponent escapes the interference basis bound");
                }
            }
            const std::uint64_t w_index = exponent_index(beta, prec.n);
            if (exponent_at(w_index, dim, prec.n).values != beta) {
                throw ContainmentFailure("exponent index arithmetic is inconsistent");
            }
            const std::vector<S> v_col = exponent_column(*term.gens, alpha.values, *term.basis);
            const std::vector<S> w_col = exponent_column(*term.gens, beta, *term.basis);
            const double residual = detail::column_residual(term.gens->diagonals[static_cast<std::size_t>(gi)],
                                                            v_col, w_col);
            auto& per_rx = report.per_receiver[static_cast<std::size_t>(term.observer - 1)];
            per_rx = std::max(per_rx, residual);
            report.max_residual = std::max(report.max_residual, residual);
            ++report.columns_checked;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Column signatures (exact uniqueness argument, made testable)
// ---------------------------------------------------------------------------

/// Full symbolic signature of one Lambda column: exponents of every channel
/// matrix and free seed, plus which basis vector the column rides on.
struct ColumnSignature {
    SymbolicFactors factors;
    int basis_tag = 0;  // 0 = all-ones, 1/2 = parity basis vectors
    bool useful = false;
    auto operator<=>(const ColumnSignature&) const = default;
};

/// Sum of exponents of in-group channel matrices (the useful-signal channel
/// set); 1 on useful columns and 0 on interference-basis columns.
inline int in_group_exponent_sum(const ColumnSignature& sig, const Topology& topo) {
    int sum = 0;
    for (const auto& [key, e] : sig.factors.channels) {
        if (topo.in_group(key.first, key.second)) sum += e;
    }
    return sum;
}

/// Signatures of every column of Lambda_ell, in column order. Only feasible
/// for enumerable column counts; guarded by max_columns.
template <ScalarField S>
std::vector<ColumnSignature> exponent_signatures(int ell, const PrecoderSet<S>& prec, const Topology& topo,
                                                 std::uint64_t max_columns = kDefaultMaxColumns) {
    std::vector<ColumnSignature> sigs;

    auto block = [&](const GeneratorSet<S>& gens, int bound, int basis_tag, bool useful,
                     const SymbolicFactors* extra) {
        const int dim = static_cast<int>(gens.size());
        const std::uint64_t count = exponent_count(dim, bound);
        if (sigs.size() + count > max_columns) throw SizeOverflow("too many columns to enumerate signatures");
        for (std::uint64_t j = 0; j < count; ++j) {
            ColumnSignature sig;
            sig.basis_tag = basis_tag;
            sig.useful = useful;
            if (extra) sig.factors = *extra;
            const ExponentVector alpha = exponent_at(j, dim, bound);
            for (int i = 0; i < dim; ++i) {
                if (alpha.values[static_cast<std::size_t>(i)] != 0) {
                    sig.factors.add_scaled(gens.factors[static_cast<std::size_t>(i)],
                                           alpha.values[static_cast<std::size_t>(i)]);
                }
            }
            sigs.push_back(std::move(sig));
        }
    };

    const int t1 = topo.first_tx(ell);
    SymbolicFactors gain;
    gain.add_channel(ell, t1, 1);
    if (prec.scheme == Scheme::SingleV) {
        gain.add_scaled(prec.chain.factors_by_tx[static_cast<std::size_t>(t1 - 1)], 1);
        block(prec.generators, prec.n - 1, 0, true, &gain);
        block(prec.generators, prec.n, 0, false, nullptr);
    } else {
        const int parity = cluster_parity(ell);
        gain.add_scaled(prec.cluster_chains.factors[static_cast<std::size_t>(ell - 1)].at(t1), 1);
        block(prec.parity_generators(parity), prec.n - 1, parity, true, &gain);
        block(prec.parity_generators(1), prec.n, 1, false, nullptr);
        block(prec.parity_generators(2), prec.n, 2, false, nullptr);
    }
    return sigs;
}

inline bool signatures_pairwise_distinct(const std::vector<ColumnSignature>& sigs) {
    std::set<ColumnSignature> seen(sigs.begin(), sigs.end());
    return seen.size() == sigs.size();
}

// ---------------------------------------------------------------------------
// DoF accounting
// ---------------------------------------------------------------------------

struct DofEntry {
    int parity = 0;  // 0 for single-V (all receivers identical)
    int receivers = 0;
    mpz_class useful_columns;
    Rational per_receiver;  // useful / T
};

struct DofReport {
    Scheme scheme = Scheme::SingleV;
    int n = 1;
    mpz_class block_length;
    bool symmetric = true;
    std::vector<DofEntry> entries;
    Rational sum_dof;
    std::optional<Rational> per_receiver_limit;  // absent for asymmetric two-V
    std::optional<Rational> sum_dof_limit;
};

inline mpz_class mpz_pow(unsigned long base, unsigned long exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

/// Exact per-receiver and network dimension fractions at finite n plus the
/// asymptotic limits they approach.
inline DofReport dof_accounting(const Topology& topo, int n) {
    if (n < 1) throw InvalidParams("n must be >= 1");
    DofReport report;
    report.scheme = scheme_selector(topo);
    report.n = n;
    const auto un = static_cast<unsigned long>(n);
    if (report.scheme == Scheme::SingleV) {
        const auto g = static_cast<unsigned long>(gamma_single(topo));
        const mpz_class useful = mpz_pow(un, g);
        report.block_length = useful + mpz_pow(un + 1, g);
        DofEntry entry;
        entry.parity = 0;
        entry.receivers = topo.cluster_count;
        entry.useful_columns = useful;
        entry.per_receiver = Rational(useful, report.block_length);
        entry.per_receiver.canonicalize();
        report.sum_dof = Rational(topo.cluster_count) * entry.per_receiver;
        report.entries.push_back(std::move(entry));
        report.per_receiver_limit = Rational(1, 2);
        report.sum_dof_limit = make_fraction(topo.cluster_count, 2);
        return report;
    }

    const auto [g1, g2] = gamma_two(topo);
    report.symmetric = g1 == g2;
    const mpz_class useful1 = mpz_pow(un, static_cast<unsigned long>(g1));
    const mpz_class useful2 = mpz_pow(un, static_cast<unsigned long>(g2));
    report.block_length = std::max(useful1, useful2) + mpz_pow(un + 1, static_cast<unsigned long>(g1)) +
                          mpz_pow(un + 1, static_cast<unsigned long>(g2));
    int odd_receivers = 0;
    for (int ell = 1; ell <= topo.cluster_count; ++ell) {
        if (cluster_parity(ell) == 1) ++odd_receivers;
    }
    const int counts[2] = {odd_receivers, topo.cluster_count - odd_receivers};
    const mpz_class* useful[2] = {&useful1, &useful2};
    report.sum_dof = Rational(0);
    for (int parity = 1; parity <= 2; ++parity) {
        DofEntry entry;
        entry.parity = parity;
        entry.receivers = counts[parity - 1];
        entry.useful_columns = *useful[parity - 1];
        entry.per_receiver = Rational(entry.useful_columns, report.block_length);
        entry.per_receiver.canonicalize();
        report.sum_dof += Rational(entry.receivers) * entry.per_receiver;
        report.entries.push_back(std::move(entry));
    }
    if (report.symmetric) {
        report.per_receiver_limit = Rational(1, 3);
        report.sum_dof_limit = make_fraction(topo.cluster_count, 3);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Per-receiver verification record
// ---------------------------------------------------------------------------

struct AlignmentRow {
    int receiver = 0;
    mpz_class block_length;         // nominal T (may exceed the drawn window)
    mpz_class useful_columns;
    mpz_class interference_columns;
    double containment_residual = 0.0;
    std::int64_t rank_float = -1;   // -1 when not run
    double sigma_ratio = 0.0;
    RankVerdict rank_exact = RankVerdict::NotRun;
    Rational dof_fraction;
};

}  // namespace aircomp_ia
