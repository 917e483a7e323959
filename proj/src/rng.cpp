#include "uab/rng.hpp"

#include <cmath>

namespace uab {

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on two uniforms, guarding against log(0).
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::bounded(std::uint64_t n) {
    // Multiply-high maps the 64-bit draw onto [0, n) without modulo bias
    // worth caring about at these sizes.
    const unsigned __int128 product = static_cast<unsigned __int128>(next()) * n;
    return static_cast<std::uint64_t>(product >> 64);
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace uab
