#ifndef TSGC_RNG_HPP
#define TSGC_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tsgc {

// 64-bit mixing for deriving independent sub-seeds from (seed, descriptor)
// pairs. Cells and folds get their own streams so parallel execution order
// cannot change results.
std::uint64_t hash64(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash64(std::uint64_t seed, std::string_view text);

// mt19937_64 with explicit bit-to-double conversion. std::*_distribution is
// implementation-defined, so every draw here is spelled out to keep results
// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; the spare value is cached.
    double normal();

    // uniform integer in [0, n), n >= 1
    std::size_t below(std::size_t n);

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tsgc

#endif
