#ifndef NFBEAM_RANDOM_HPP
#define NFBEAM_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "numerics.hpp"

namespace nfbeam {

// splitmix64 finalizer; used to derive well-separated stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic substream seed from a master seed and a path of indices,
// e.g. derive_seed(seed, {kNoiseStream, point, trial}). Every trial and
// purpose gets its own independent stream, which is what makes
// common-random-number pairing across schemes and configurations work.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
    return h;
}

// Stream identifiers for derive_seed paths.
constexpr std::uint64_t kUeStream = 0x75650001;
constexpr std::uint64_t kNoiseStream = 0x6e6f0002;
constexpr std::uint64_t kCalStream = 0x63610003;

// Thin RNG wrapper. Uniform and Gaussian draws are generated from raw
// mt19937_64 output rather than std::*_distribution so that byte streams
// are identical across standard-library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // circularly-symmetric complex Gaussian with E|z|^2 = variance
    cplx complex_normal(double variance) {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double mag = std::sqrt(-variance * std::log(u1));
        const double ph = 2.0 * M_PI * u2;
        return {mag * std::cos(ph), mag * std::sin(ph)};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace nfbeam

#endif
