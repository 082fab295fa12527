#pragma once

#include <cstdint>

namespace declos {

// SplitMix64: tiny, fast, and -- unlike std distributions -- byte-stable across
// standard libraries. All stochastic behaviour in the project flows through
// this so that a (scenario, seed, mode) triple always produces the same trace.
struct RngStream {
    uint64_t state;

    explicit RngStream(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

    // uniform integer in [0, n)
    uint64_t below(uint64_t n) { return n ? next_u64() % n : 0; }
};

// Derives the per-agent per-outer-iteration planning stream from the master
// seed. Each (agent, iteration) pair plans at most once per run, so streams
// never overlap and per-agent planning is order-independent.
inline RngStream planning_stream(uint64_t master_seed, int agent_id, int iteration) {
    RngStream mix(master_seed);
    uint64_t a = mix.next_u64() ^ (0x100000001b3ULL * static_cast<uint64_t>(agent_id + 1));
    RngStream mix2(a);
    uint64_t b = mix2.next_u64() ^ (0xc6a4a7935bd1e995ULL * static_cast<uint64_t>(iteration + 1));
    RngStream mix3(b);
    return RngStream(mix3.next_u64());
}

}  // namespace declos
