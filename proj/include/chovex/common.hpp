#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace chovex {

/// Base error type for everything the library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

/// Format a double so that a round trip through text is lossless.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Compensated summation.  All big reductions in the library go through
// KahanSum (or the chunked reducer below) so that results are reproducible
// to the last bit independent of thread count.
// ---------------------------------------------------------------------------

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

namespace detail {
// Chunk size is fixed so the partial-sum layout does not depend on the
// thread count; partials are then combined serially in index order.
constexpr std::size_t kReduceChunk = 8192;
}  // namespace detail

/// Deterministic parallel reduction of term(k) for k in [0, count).
/// Identical results for any `threads` value.
template <class TermFn>
double reduce_indexed(std::size_t count, int threads, TermFn&& term) {
    const std::size_t nchunk = (count + detail::kReduceChunk - 1) / detail::kReduceChunk;
    if (nchunk <= 1 || threads <= 1) {
        KahanSum acc;
        for (std::size_t k = 0; k < count; ++k) acc.add(term(k));
        return acc.value();
    }
    std::vector<double> partial(nchunk, 0.0);
    auto run = [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            const std::size_t k0 = c * detail::kReduceChunk;
            const std::size_t k1 = std::min(count, k0 + detail::kReduceChunk);
            KahanSum acc;
            for (std::size_t k = k0; k < k1; ++k) acc.add(term(k));
            partial[c] = acc.value();
        }
    };
    const int nt = std::min<std::size_t>(threads, nchunk);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t per = (nchunk + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t c0 = t * per;
        const std::size_t c1 = std::min(nchunk, c0 + per);
        if (c0 < c1) pool.emplace_back(run, c0, c1);
    }
    for (auto& th : pool) th.join();
    KahanSum acc;
    for (double p : partial) acc.add(p);
    return acc.value();
}

// ---------------------------------------------------------------------------
// Deterministic RNG.  splitmix64 for seeding / per-sample seed derivation,
// xoshiro256++ as the workhorse.  We do not use std:: distributions so the
// stream is pinned down by this file alone.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed for sample `index` of a family rooted at `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (index + 1));
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace chovex
