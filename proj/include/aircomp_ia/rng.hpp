#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace aircomp_ia {

// Stream identifiers used when deriving sub-streams from a master seed.
// Values must stay stable: reproducibility of every CSV depends on them.
enum StreamTag : std::uint64_t {
    kStreamChannel = 1,
    kStreamNoise = 2,
    kStreamSeedMatrix = 3,
    kStreamXi = 4,
    kStreamMessages = 5,
    kStreamTrial = 6,
    kStreamLemma = 7,
    kStreamTdma = 8,
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic 64-bit generator (SplitMix64). Fully specified arithmetic,
/// so identical seeds reproduce identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(detail::mix64(seed)) {}

    /// Derives an independent sub-stream from a master seed and a tag path,
    /// e.g. derive(seed, {kStreamChannel, ell, q}).
    static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = detail::mix64(master);
        for (std::uint64_t tag : path) {
            h = detail::mix64(h ^ detail::mix64(tag));
        }
        return Rng(h);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 significant bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit && limit != 0);
        return v % bound;
    }

    /// Log-uniform magnitude in [lo, hi], 0 < lo <= hi.
    double next_log_uniform(double lo, double hi) {
        if (lo == hi) return lo;
        return std::exp(std::log(lo) + next_unit() * (std::log(hi) - std::log(lo)));
    }

    /// Standard normal via Box-Muller (hand-rolled: std::normal_distribution
    /// is not bit-stable across standard library implementations).
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1, u2;
        do {
            u1 = next_unit();
        } while (u1 <= 0.0);
        u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace aircomp_ia
