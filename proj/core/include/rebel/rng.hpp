#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rebel {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Replica r draws its stream from a fixed public function of (seed, r).
inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
    return splitmix64(seed ^ splitmix64(replica + 1));
}

/// mt19937_64 with hand-rolled double draws, so the event stream depends
/// only on the engine and not on libstdc++ distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t bits() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform in {0, ..., n-1}
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<__uint128_t>(gen_()) * n) >> 64);
    }

    double exponential(double rate) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u) / rate;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace rebel
