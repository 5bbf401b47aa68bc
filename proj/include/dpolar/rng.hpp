#pragma once

#include <cmath>
#include <cstdint>

namespace dpolar {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-seeded generator: the stream for frame f of run (seed, stream) is a
// pure function of those three values, so frames can be replayed or sharded
// across workers in any order without changing a single draw.
//
// Draws go through hand-rolled uniform and Box-Muller transforms instead of
// std::distributions, whose output sequences the standard leaves up to the
// implementation.
class FrameRng {
public:
    FrameRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame) {
        std::uint64_t s = mix64(seed ^ 0xa0761d6478bd642full);
        s = mix64(s ^ stream * 0xe7037ed1a0b428dbull);
        state_ = mix64(s ^ frame * 0x8ebc6af09c88c6e3ull);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal, Box-Muller; generates two per transform.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dpolar
