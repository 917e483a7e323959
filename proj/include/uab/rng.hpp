#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace uab {

// Seeded random source used everywhere reproducibility matters. The value
// transforms (uniform, normal, bounded) are implemented here instead of via
// std::*_distribution so that a seed pins the exact stream regardless of
// standard-library version.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal (Box-Muller, second value cached)
    double normal();

    // uniform integer in [0, n), n > 0
    std::uint64_t bounded(std::uint64_t n);

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Stateless mixer for deriving independent sub-seeds (per stage, per
    // evaluation seed) from one run seed.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace uab
