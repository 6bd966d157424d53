#pragma once

#include <cstdint>
#include <random>

namespace compopt {

/// Fixed 64-bit mixer used everywhere a seed is split across components
/// (subsystem index, trajectory step, subgraph index). Keeping one published
/// mixer makes every composite run reproducible from a single seed.
inline std::uint64_t mix64(std::uint64_t parent, std::uint64_t index) {
    std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// mt19937_64 with hand-rolled uniform conversions. The engine's raw output
/// is pinned by the standard; std::uniform_*_distribution is not, so we
/// avoid it to keep seeds portable across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace compopt
