#include "tsgc/rng.hpp"

#include <cmath>

namespace tsgc {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t hash64(std::uint64_t seed, std::uint64_t value) {
    return mix(mix(seed) ^ value);
}

std::uint64_t hash64(std::uint64_t seed, std::string_view text) {
    std::uint64_t h = mix(seed);
    for (unsigned char c : text) {
        h = mix(h ^ c);
    }
    return h;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::size_t Rng::below(std::size_t n) {
    // rejection sampling; unbiased and stable across platforms
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = gen_();
    while (x >= limit) {
        x = gen_();
    }
    return static_cast<std::size_t>(x % n);
}

} // namespace tsgc
