#pragma once

#include <cmath>
#include <cstdint>

// Deterministic seeded randomness for sampling and experiments.
//
// Everything downstream of a 64-bit seed is reproducible bit for bit, on any
// platform, regardless of thread schedule: callers derive an independent
// substream per logical draw (seed, stream index) instead of sharing one
// generator.  std::bernoulli_distribution and friends are implementation
// defined, so uniforms are built from raw bits here.

namespace pbdl {

// SplitMix64 step (public domain mixer, Vigna).  Good enough statistically
// for Monte Carlo work and cheap enough to reseed per draw.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Collapse (seed, a, b) into the starting state of a fresh substream.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ (a * 0x9e3779b97f4a7c15ULL);
    h = splitmix64(s);
    s = h ^ (b * 0xc2b2ae3d27d4eb4fULL);
    return splitmix64(s);
}

// Small counter-based stream: state advances by splitmix64 steps.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0,1) with 53 random bits
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // Same outcome as next_bernoulli against bernoulli_threshold(p), minus
    // the float multiply; hot sampling loops precompute the threshold.
    bool next_bernoulli_threshold(std::uint64_t t) { return (next_u64() >> 11) < t; }

    // uniform integer in [0, n) by rejection-free 128-bit multiply
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

// Integer threshold t with (u >> 11) < t exactly equivalent to
// (u >> 11) * 2^-53 < p: both compare the 53-bit mantissa against p*2^53 in
// exact arithmetic, so threshold sampling reproduces next_bernoulli bit for
// bit.
inline std::uint64_t bernoulli_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return std::uint64_t{1} << 53;
    return static_cast<std::uint64_t>(std::ceil(p * 9007199254740992.0));
}

// Bit-at-a-time source with consumption accounting.  Draw order is MSB first
// within each underlying 64-bit word.
class BitStream {
public:
    explicit BitStream(std::uint64_t seed) : rng_(seed) {}

    int take_bit() {
        if (avail_ == 0) {
            word_ = rng_.next_u64();
            avail_ = 64;
        }
        --avail_;
        ++consumed_;
        return static_cast<int>((word_ >> avail_) & 1u);
    }

    // k bits as an integer, MSB first; k <= 63
    std::uint64_t take_bits(int k) {
        std::uint64_t v = 0;
        for (int i = 0; i < k; ++i) v = (v << 1) | static_cast<std::uint64_t>(take_bit());
        return v;
    }

    std::uint64_t bits_consumed() const { return consumed_; }

private:
    Rng rng_;
    std::uint64_t word_ = 0;
    int avail_ = 0;
    std::uint64_t consumed_ = 0;
};

} // namespace pbdl
