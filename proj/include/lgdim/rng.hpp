#pragma once

// Counter-based pseudo-random generation. Every randomized routine in the
// library takes an explicit 64-bit seed and derives values by hashing
// (seed, counter) pairs, so random access needs no generator state and
// results are reproducible bit-for-bit across platforms.
//
// The generator is the splitmix64 finalizer applied to
//     seed + counter * 0x9E3779B97F4A7C15.

#include <cstdint>
#include <cmath>
#include <vector>

namespace lgdim::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// counter-th value of the stream identified by seed; counter may start at any index
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + counter * kGolden);
}

// top 53 bits -> [0, 1)
constexpr double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double unit_at(std::uint64_t seed, std::uint64_t counter) {
    return unit_double(at(seed, counter));
}

// derive an independent substream seed (used for optimizer restarts, per-sample streams)
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t stream_id) {
    return mix64(seed ^ mix64(stream_id + 0x632BE59BD9B4E019ull));
}

// Sequential convenience wrapper over the counter scheme.
class Stream {
public:
    explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(stream_id ? substream(seed, stream_id) : seed) {}

    std::uint64_t next_u64() { return at(seed_, ++counter_); }
    double next_unit() { return unit_double(next_u64()); }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    std::size_t next_index(std::size_t n) {
        // n is tiny everywhere this is used; modulo bias is irrelevant here
        return static_cast<std::size_t>(next_u64() % n);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

// Uniform sample from the probability simplex (Dirichlet with unit weights):
// exponential spacings normalized to sum 1.
inline std::vector<double> dirichlet_uniform(Stream& stream, std::size_t n) {
    std::vector<double> out(n);
    double total = 0.0;
    for (auto& x : out) {
        double u = stream.next_unit();
        if (u <= 0.0) u = 0x1.0p-53;
        x = -std::log(u);
        total += x;
    }
    for (auto& x : out) x /= total;
    return out;
}

}  // namespace lgdim::rng
