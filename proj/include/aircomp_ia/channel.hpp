#pragma once

#include <cstdint>
#include <vector>

#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/rng.hpp"
#include "aircomp_ia/scalar.hpp"
#include "aircomp_ia/topology.hpp"

namespace aircomp_ia {

/// Draw law for channel diagonals (and for anything "drawn like a channel
/// entry": free precoder seeds, basis vectors). Magnitudes are kept away from
/// zero because the chain construction inverts every diagonal.
struct ChannelParams {
    double min_magnitude = 0.5;
    double max_magnitude = 2.0;
    std::uint32_t max_denominator = 65536;  // exact mode only
    bool real_valued = false;               // float mode: interval instead of annulus

    void validate() const {
        if (!(min_magnitude > 0.0)) throw InvalidParams("min magnitude must be positive");
        if (!(min_magnitude <= max_magnitude)) throw InvalidParams("min magnitude must not exceed max magnitude");
        if (max_denominator < 1) throw InvalidParams("max denominator must be >= 1");
    }
};

/// One nonzero scalar under the channel law.
/// Float mode: log-uniform magnitude, uniform phase (or random sign when
/// real_valued); keeps products of many powers inside double range.
/// Exact mode: uniform denominator then uniform admissible numerator, sign
/// flipped by a fair bit; |value| lands in [min, max] by construction.
template <ScalarField S>
S draw_nonzero_scalar(Rng& rng, const ChannelParams& params) {
    if constexpr (ScalarTraits<S>::exact) {
        while (true) {
            const auto den = static_cast<unsigned long>(1 + rng.next_below(params.max_denominator));
            const double lo = params.min_magnitude * static_cast<double>(den);
            const double hi = params.max_magnitude * static_cast<double>(den);
            const auto num_lo = static_cast<std::uint64_t>(std::ceil(lo));
            const auto num_hi = static_cast<std::uint64_t>(std::floor(hi));
            if (num_lo > num_hi || num_lo == 0) continue;  // no admissible numerator for this denominator
            const auto num = static_cast<unsigned long>(num_lo + rng.next_below(num_hi - num_lo + 1));
            Rational v(num, den);
            v.canonicalize();
            if (rng.next_u64() & 1u) v = -v;
            return v;
        }
    } else {
        const double mag = rng.next_log_uniform(params.min_magnitude, params.max_magnitude);
        if (params.real_valued) {
            return Complex((rng.next_u64() & 1u) ? -mag : mag, 0.0);
        }
        const double phase = 2.0 * M_PI * rng.next_unit();
        return Complex(mag * std::cos(phase), mag * std::sin(phase));
    }
}

/// Diagonals of all receiver/transmitter channel matrices over a block.
template <ScalarField S>
struct ChannelSet {
    int rx_count = 0;
    int tx_count = 0;
    std::int64_t block_length = 0;
    ChannelParams params;
    std::vector<std::vector<S>> diagonals;  // index (ell-1)*tx_count + (q-1)

    const std::vector<S>& diagonal(int ell, int q) const {
        return diagonals[static_cast<std::size_t>(ell - 1) * static_cast<std::size_t>(tx_count) +
                         static_cast<std::size_t>(q - 1)];
    }
};

/// Draws the K*M independent diagonal channels. Each (receiver, Tx) pair gets
/// its own derived stream, so the result is independent of evaluation order.
template <ScalarField S>
ChannelSet<S> draw_channels(const Topology& topo, std::int64_t block_length, const ChannelParams& params,
                            std::uint64_t seed) {
    if (block_length < 1) throw InvalidParams("block length must be >= 1");
    params.validate();

    ChannelSet<S> cs;
    cs.rx_count = topo.cluster_count;
    cs.tx_count = topo.tx_count;
    cs.block_length = block_length;
    cs.params = params;
    cs.diagonals.resize(static_cast<std::size_t>(topo.cluster_count) * static_cast<std::size_t>(topo.tx_count));
    for (int ell = 1; ell <= topo.cluster_count; ++ell) {
        for (int q = 1; q <= topo.tx_count; ++q) {
            Rng rng = Rng::derive(seed, {kStreamChannel, static_cast<std::uint64_t>(ell),
                                         static_cast<std::uint64_t>(q)});
            std::vector<S>& d = cs.diagonals[static_cast<std::size_t>(ell - 1) *
                                                 static_cast<std::size_t>(topo.tx_count) +
                                             static_cast<std::size_t>(q - 1)];
            d.reserve(static_cast<std::size_t>(block_length));
            for (std::int64_t t = 0; t < block_length; ++t) {
                d.push_back(draw_nonzero_scalar<S>(rng, params));
            }
        }
    }
    return cs;
}

/// Superposition channel: output(ell) = sum_q diag(ell,q) .* input(q) + noise.
/// Noise is circularly symmetric Gaussian with total per-entry variance
/// noise_variance; its stream is derived from (seed, ell) so per-receiver
/// generation is order-independent.
template <ScalarField S>
std::vector<std::vector<S>> apply_channel(const ChannelSet<S>& channels,
                                          const std::vector<std::vector<S>>& inputs, double noise_variance,
                                          std::uint64_t seed) {
    if (static_cast<int>(inputs.size()) != channels.tx_count) {
        throw DimensionError("expected one input vector per transmitter");
    }
    for (const auto& x : inputs) {
        if (static_cast<std::int64_t>(x.size()) != channels.block_length) {
            throw DimensionError("input vector length does not match block length");
        }
    }
    if (noise_variance < 0.0) throw InvalidParams("noise variance must be non-negative");
    if constexpr (ScalarTraits<S>::exact) {
        if (noise_variance > 0.0) throw UnsupportedMode("noisy channels are not available in exact mode");
    }

    const auto rows = static_cast<std::size_t>(channels.block_length);
    std::vector<std::vector<S>> outputs(static_cast<std::size_t>(channels.rx_count),
                                        std::vector<S>(rows, ScalarTraits<S>::zero()));
    for (int ell = 1; ell <= channels.rx_count; ++ell) {
        std::vector<S>& y = outputs[static_cast<std::size_t>(ell - 1)];
        for (int q = 1; q <= channels.tx_count; ++q) {
            const std::vector<S>& h = channels.diagonal(ell, q);
            const std::vector<S>& x = inputs[static_cast<std::size_t>(q - 1)];
            for (std::size_t t = 0; t < rows; ++t) {
                y[t] += h[t] * x[t];
            }
        }
        if constexpr (!ScalarTraits<S>::exact) {
            if (noise_variance > 0.0) {
                Rng rng = Rng::derive(seed, {kStreamNoise, static_cast<std::uint64_t>(ell)});
                const double sigma = std::sqrt(noise_variance / 2.0);
                for (std::size_t t = 0; t < rows; ++t) {
                    y[t] += Complex(sigma * rng.next_gaussian(), sigma * rng.next_gaussian());
                }
            }
        }
    }
    return outputs;
}

}  // namespace aircomp_ia
