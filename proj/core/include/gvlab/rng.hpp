#pragma once

#include <cmath>
#include <cstdint>

namespace gvlab {

/// Counter-based deterministic generator (splitmix64 finalizer).
/// Every draw is a pure function of (seed, counter), so parallel consumers
/// get identical streams regardless of scheduling.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (counter + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform in [a, b).
    double uniform(std::uint64_t counter, double a, double b) const {
        return a + (b - a) * uniform(counter);
    }

    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t counter, std::uint64_t n) const {
        return bits(counter) % n;
    }

    /// Standard normal via Box-Muller; consumes counters 2k and 2k+1.
    double normal(std::uint64_t k) const {
        const double u1 = uniform(2 * k) + 0x1.0p-54;  // keep log argument positive
        const double u2 = uniform(2 * k + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
};

}  // namespace gvlab
