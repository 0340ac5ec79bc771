#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aircomp_ia/alignment.hpp"
#include "aircomp_ia/channel.hpp"
#include "aircomp_ia/exact_linalg.hpp"
#include "aircomp_ia/float_linalg.hpp"
#include "aircomp_ia/parallel.hpp"
#include "aircomp_ia/precoding.hpp"
#include "aircomp_ia/rng.hpp"
#include "aircomp_ia/scalar.hpp"
#include "aircomp_ia/topology.hpp"

namespace aircomp_ia {

// ---------------------------------------------------------------------------
// Modulation
// ---------------------------------------------------------------------------

/// Centered integer-lattice amplitude of a field symbol in {0..p-1}.
inline double modulate(unsigned symbol, unsigned p) {
    return static_cast<double>(symbol) - (static_cast<double>(p) - 1.0) / 2.0;
}

/// Recovers the modulo-p sum of `summands` symbols from the sum of their
/// amplitudes; exact whenever the noise displacement stays below 1/2.
inline unsigned demodulate_sum(double amplitude_sum, int summands, unsigned p) {
    const double shifted = amplitude_sum + static_cast<double>(summands) * (static_cast<double>(p) - 1.0) / 2.0;
    long long v = std::llround(shifted) % static_cast<long long>(p);
    if (v < 0) v += p;
    return static_cast<unsigned>(v);
}

// ---------------------------------------------------------------------------
// Messages
// ---------------------------------------------------------------------------

/// Per-transmitter field symbols, one per useful stream. In the two-V scheme
/// a shared Tx carries one vector per destination cluster; by default both
/// are prefixes of a single underlying stream.
struct MessageSet {
    unsigned p = 5;
    Scheme scheme = Scheme::SingleV;
    std::vector<std::vector<unsigned>> by_tx;                       // single-V, index q-1
    std::map<std::pair<int, int>, std::vector<unsigned>> by_dest;   // two-V, (q, dest)

    const std::vector<unsigned>& payload(int q, int dest) const {
        if (scheme == Scheme::SingleV) return by_tx[static_cast<std::size_t>(q - 1)];
        return by_dest.at({q, dest});
    }
};

inline MessageSet draw_messages(const Topology& topo, Scheme scheme, std::uint64_t streams_single,
                                std::uint64_t streams_odd, std::uint64_t streams_even, unsigned p,
                                std::uint64_t seed, bool independent_payloads = false) {
    MessageSet msgs;
    msgs.p = p;
    msgs.scheme = scheme;
    if (scheme == Scheme::SingleV) {
        msgs.by_tx.resize(static_cast<std::size_t>(topo.tx_count));
        for (int q = 1; q <= topo.tx_count; ++q) {
            Rng rng = Rng::derive(seed, {kStreamMessages, static_cast<std::uint64_t>(q)});
            auto& w = msgs.by_tx[static_cast<std::size_t>(q - 1)];
            w.reserve(static_cast<std::size_t>(streams_single));
            for (std::uint64_t j = 0; j < streams_single; ++j) {
                w.push_back(static_cast<unsigned>(rng.next_below(p)));
            }
        }
        return msgs;
    }
    const std::uint64_t streams_by_parity[2] = {streams_odd, streams_even};
    for (int q = 1; q <= topo.tx_count; ++q) {
        std::vector<unsigned> base;
        if (!independent_payloads) {
            Rng rng = Rng::derive(seed, {kStreamMessages, static_cast<std::uint64_t>(q)});
            const std::uint64_t longest = std::max(streams_odd, streams_even);
            base.reserve(static_cast<std::size_t>(longest));
            for (std::uint64_t j = 0; j < longest; ++j) base.push_back(static_cast<unsigned>(rng.next_below(p)));
        }
        for (int dest : topo.owner_clusters(q)) {
            const std::uint64_t streams = streams_by_parity[cluster_parity(dest) - 1];
            std::vector<unsigned> w;
            w.reserve(static_cast<std::size_t>(streams));
            if (independent_payloads) {
                Rng rng = Rng::derive(seed, {kStreamMessages, static_cast<std::uint64_t>(q),
                                             static_cast<std::uint64_t>(dest)});
                for (std::uint64_t j = 0; j < streams; ++j) w.push_back(static_cast<unsigned>(rng.next_below(p)));
            } else {
                w.assign(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(streams));
            }
            msgs.by_dest[{q, dest}] = std::move(w);
        }
    }
    return msgs;
}

/// Ground-truth modulo-p sums at one receiver, straight field arithmetic.
inline std::vector<unsigned> ground_truth_sums(const Topology& topo, const MessageSet& msgs, int ell,
                                               std::uint64_t streams) {
    std::vector<unsigned> sums(static_cast<std::size_t>(streams), 0);
    for (int q : topo.group(ell)) {
        const std::vector<unsigned>& w = msgs.payload(q, ell);
        for (std::size_t j = 0; j < sums.size(); ++j) sums[j] = (sums[j] + w[j]) % msgs.p;
    }
    return sums;
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

template <ScalarField S>
struct EncodedSignals {
    std::vector<std::vector<S>> signals;  // index q-1
    S common_scale;                       // applied to every transmit vector
    S payload_scale;                      // common_scale times the per-term weight
};

/// Precodes all messages and applies one network-common power scale so that
/// (1/T)|X_q|^2 <= P for every Tx. A common scale is required: per-Tx scales
/// would leave the receivers with unequally weighted sums.
template <ScalarField S>
EncodedSignals<S> encode_all(const MessageSet& msgs, const PrecoderSet<S>& prec, const Topology& topo,
                             double power) {
    if (!(power > 0.0)) throw InvalidParams("power must be positive");
    std::vector<TxPayload<S>> payloads(static_cast<std::size_t>(topo.tx_count));
    for (int q = 1; q <= topo.tx_count; ++q) {
        TxPayload<S>& pl = payloads[static_cast<std::size_t>(q - 1)];
        if (prec.scheme == Scheme::SingleV) {
            const auto& w = msgs.by_tx[static_cast<std::size_t>(q - 1)];
            pl.single.reserve(w.size());
            for (unsigned symbol : w) pl.single.push_back(ScalarTraits<S>::from_double(modulate(symbol, msgs.p)));
        } else {
            for (int dest : topo.owner_clusters(q)) {
                const auto& w = msgs.by_dest.at({q, dest});
                std::vector<S> amp;
                amp.reserve(w.size());
                for (unsigned symbol : w) amp.push_back(ScalarTraits<S>::from_double(modulate(symbol, msgs.p)));
                pl.by_dest[dest] = std::move(amp);
            }
        }
    }

    EncodedSignals<S> enc;
    enc.signals.resize(static_cast<std::size_t>(topo.tx_count));
    double worst_mean_square = 0.0;
    const S unit = ScalarTraits<S>::one();
    for (int q = 1; q <= topo.tx_count; ++q) {
        std::vector<S> raw = tx_signal(prec, topo, q, payloads[static_cast<std::size_t>(q - 1)], unit);
        double norm2 = 0.0;
        for (const S& v : raw) norm2 += ScalarTraits<S>::abs2(v);
        worst_mean_square = std::max(worst_mean_square, norm2 / static_cast<double>(raw.size()));
        enc.signals[static_cast<std::size_t>(q - 1)] = std::move(raw);
    }
    // Largest admissible common scale, shaved by 1e-12 so the block-power
    // bound survives the double-rounding of exact norms.
    const double scale =
        worst_mean_square > 0.0 ? std::sqrt(power / worst_mean_square) * (1.0 - 1e-12) : 1.0;
    enc.common_scale = ScalarTraits<S>::from_double(scale);
    for (auto& x : enc.signals) {
        for (S& v : x) v = v * enc.common_scale;
    }
    enc.payload_scale = prec.scheme == Scheme::SingleV
                            ? enc.common_scale
                            : S(enc.common_scale * ScalarTraits<S>::from_double(kTwoVTermWeight));
    return enc;
}

// ---------------------------------------------------------------------------
// Zero-forcing decode
// ---------------------------------------------------------------------------

struct DecodeResult {
    std::vector<unsigned> sums;
    double max_displacement = 0.0;  // pre-rounding distance to the lattice
};

/// Solves Lambda z ~ Y, divides the known payload scale out of the useful
/// coordinates and demodulates each stream's aligned amplitude sum.
template <ScalarField S>
DecodeResult zf_decode(const std::vector<S>& received, const ColMatrix<S>& lambda, std::uint64_t useful_count,
                       int summands, unsigned p, const S& payload_scale) {
    if (static_cast<std::int64_t>(received.size()) != lambda.rows()) {
        throw DimensionError("received vector length does not match Lambda rows");
    }
    DecodeResult result;
    result.sums.reserve(static_cast<std::size_t>(useful_count));
    const double offset = static_cast<double>(summands) * (static_cast<double>(p) - 1.0) / 2.0;

    if constexpr (ScalarTraits<S>::exact) {
        const std::vector<Rational> z = solve_exact(lambda, received);
        for (std::uint64_t j = 0; j < useful_count; ++j) {
            Rational value = z[static_cast<std::size_t>(j)] / payload_scale;
            Rational shifted = value + Rational(ScalarTraits<Rational>::from_double(offset));
            // Noise-free exact solutions land exactly on the integer lattice.
            mpz_class nearest;
            {
                Rational half_up = shifted + Rational(1, 2);
                mpz_fdiv_q(nearest.get_mpz_t(), half_up.get_num_mpz_t(), half_up.get_den_mpz_t());
            }
            const Rational displacement = shifted - Rational(nearest);
            result.max_displacement =
                std::max(result.max_displacement, std::fabs(displacement.get_d()));
            mpz_class residue;
            mpz_mod_ui(residue.get_mpz_t(), nearest.get_mpz_t(), p);
            result.sums.push_back(static_cast<unsigned>(residue.get_ui()));
        }
    } else {
        Eigen::MatrixXcd a = to_eigen(lambda);
        Eigen::VectorXcd b(lambda.rows());
        for (std::int64_t i = 0; i < lambda.rows(); ++i) b(i) = received[static_cast<std::size_t>(i)];
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
        if (qr.rank() < lambda.cols()) {
            throw RankDeficient("signal-plus-interference matrix is rank deficient");
        }
        Eigen::VectorXcd z = qr.solve(b);
        for (std::uint64_t j = 0; j < useful_count; ++j) {
            const Complex value = z(static_cast<Eigen::Index>(j)) / payload_scale;
            const double shifted = value.real() + offset;
            const double displacement =
                std::max(std::fabs(shifted - std::round(shifted)), std::fabs(value.imag()));
            result.max_displacement = std::max(result.max_displacement, displacement);
            result.sums.push_back(demodulate_sum(value.real(), summands, p));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

struct TrialSetup {
    Topology topo;
    Scheme scheme = Scheme::SingleV;
    int n = 1;
    unsigned p = 5;
    double power = 1.0;
    ChannelParams channel_params;
    bool independent_payloads = false;
    std::uint64_t max_columns = kDefaultMaxColumns;
    std::uint64_t max_block_rows = 8192;
};

struct ReceiverOutcome {
    int receiver = 0;
    std::uint64_t streams = 0;
    std::uint64_t errors = 0;
    std::vector<unsigned> decoded;
    std::vector<unsigned> truth;
};

struct TrialResult {
    std::uint64_t seed = 0;
    double snr_db = 0.0;  // +inf for noise-free
    std::string mode;
    std::vector<ReceiverOutcome> receivers;
    double max_displacement = 0.0;
    bool failed = false;
    std::string failure;
};

template <ScalarField S>
TrialResult run_trial(const TrialSetup& setup, double noise_variance, double snr_db, std::uint64_t seed) {
    TrialResult result;
    result.seed = seed;
    result.snr_db = snr_db;
    result.mode = ScalarTraits<S>::mode_name();
    try {
        const std::uint64_t block = blocklength(setup.topo, setup.n);
        if (block > setup.max_block_rows) {
            throw SizeOverflow("blocklength " + std::to_string(block) + " exceeds the simulation row cap");
        }
        const ChannelSet<S> channels =
            draw_channels<S>(setup.topo, static_cast<std::int64_t>(block), setup.channel_params, seed);
        const PrecoderSet<S> prec =
            build_precoders(setup.topo, channels, setup.n, seed, setup.max_columns, true, setup.scheme,
                            /*scheme_forced=*/true);

        std::uint64_t streams_odd = 0, streams_even = 0, streams_single = 0;
        if (setup.scheme == Scheme::SingleV) {
            streams_single = exponent_count(static_cast<int>(prec.generators.size()), setup.n - 1);
        } else {
            streams_odd = exponent_count(static_cast<int>(prec.parity_generators(1).size()), setup.n - 1);
            streams_even = exponent_count(static_cast<int>(prec.parity_generators(2).size()), setup.n - 1);
        }
        const MessageSet msgs = draw_messages(setup.topo, setup.scheme, streams_single, streams_odd,
                                              streams_even, setup.p, seed, setup.independent_payloads);
        const EncodedSignals<S> enc = encode_all(msgs, prec, setup.topo, setup.power);
        const std::vector<std::vector<S>> received = apply_channel(channels, enc.signals, noise_variance, seed);

        for (int ell = 1; ell <= setup.topo.cluster_count; ++ell) {
            const ColMatrix<S> lambda = assemble_lambda(ell, prec, setup.topo, channels);
            const std::uint64_t streams = prec.useful_columns(ell);
            DecodeResult decoded = zf_decode(received[static_cast<std::size_t>(ell - 1)], lambda, streams,
                                             setup.topo.txs_per_cluster, setup.p, enc.payload_scale);
            ReceiverOutcome outcome;
            outcome.receiver = ell;
            outcome.streams = streams;
            outcome.truth = ground_truth_sums(setup.topo, msgs, ell, streams);
            outcome.decoded = std::move(decoded.sums);
            for (std::size_t j = 0; j < outcome.truth.size(); ++j) {
                if (outcome.decoded[j] != outcome.truth[j]) ++outcome.errors;
            }
            result.max_displacement = std::max(result.max_displacement, decoded.max_displacement);
            result.receivers.push_back(std::move(outcome));
        }
    } catch (const Error& e) {
        result.failed = true;
        result.failure = e.what();
        result.receivers.clear();
    }
    return result;
}

struct CampaignPoint {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t failed_trials = 0;
    std::uint64_t streams = 0;
    std::uint64_t errors = 0;
    double error_rate = 0.0;
    double ci95 = 0.0;
};

struct CampaignResult {
    std::vector<TrialResult> trials;
    std::vector<CampaignPoint> points;
};

/// One Monte-Carlo point per SNR value; trial seeds are counter-derived from
/// the master seed so any trial can be reproduced in isolation and trials can
/// run in parallel with order-independent aggregation. Per-trial failures are
/// recorded, not fatal.
template <ScalarField S>
CampaignResult run_campaign(const TrialSetup& setup, const std::vector<double>& snr_db_points,
                            std::uint64_t trials, std::uint64_t master_seed) {
    CampaignResult result;
    for (std::size_t pi = 0; pi < snr_db_points.size(); ++pi) {
        const double snr_db = snr_db_points[pi];
        const double noise_variance =
            std::isinf(snr_db) ? 0.0 : setup.power / std::pow(10.0, snr_db / 10.0);
        CampaignPoint point;
        point.snr_db = snr_db;
        point.trials = trials;
        std::vector<TrialResult> batch(trials);
        parallel_for(trials, [&](std::uint64_t t) {
            const std::uint64_t seed =
                Rng::derive(master_seed, {kStreamTrial, static_cast<std::uint64_t>(pi), t}).next_u64();
            batch[t] = run_trial<S>(setup, noise_variance, snr_db, seed);
        });
        for (TrialResult& trial : batch) {
            if (trial.failed) {
                ++point.failed_trials;
            } else {
                for (const ReceiverOutcome& rx : trial.receivers) {
                    point.streams += rx.streams;
                    point.errors += rx.errors;
                }
            }
            result.trials.push_back(std::move(trial));
        }
        if (point.streams > 0) {
            const double rate = static_cast<double>(point.errors) / static_cast<double>(point.streams);
            point.error_rate = rate;
            point.ci95 = 1.96 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(point.streams));
        }
        result.points.push_back(point);
    }
    return result;
}

}  // namespace aircomp_ia
