#include "spoofbench/rng.hpp"

#include <cmath>
#include <numbers>

namespace spoofbench {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

double Rng::normal(double mean, double stddev) {
    // u1 in (0, 1] keeps the log finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

std::size_t Rng::below(std::size_t n) {
    // Lemire reduction; bias is < 2^-64 per draw.
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n)) >> 64);
}

Rng Rng::fork(std::uint64_t stream) {
    return Rng(splitmix64(next_u64() ^ splitmix64(stream)));
}

}  // namespace spoofbench
