#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace spoofbench {

// Seeded random source. All randomness in the library flows through this class
// so that a (seed, config, data) triple fully determines every result. The
// uniform/normal transforms are implemented here instead of relying on
// std::*_distribution, whose output sequences differ between standard library
// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller; one draw per call, no cached spare.
    double normal(double mean = 0.0, double stddev = 1.0);

    // Uniform index in [0, n). n must be > 0.
    std::size_t below(std::size_t n);

    // Derived generator for an independent substream.
    Rng fork(std::uint64_t stream);

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates with our own index draws, so shuffles are reproducible
// independent of the standard library.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace spoofbench
