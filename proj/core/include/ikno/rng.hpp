#ifndef IKNO_RNG_HPP
#define IKNO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace ikno {

// Deterministic randomness. All variates are derived from raw mt19937_64
// output with explicit bit manipulation, so identical seeds give identical
// streams on every platform; none of the distribution adapters from
// <random> (whose algorithms are implementation-defined) are used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1): 53 random mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) via rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    template <typename It>
    void shuffle(It first, It last) {
        const std::size_t n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(first[i - 1], first[j]);
        }
    }

    // Serialization for checkpoint round trips. The textual form includes the
    // Box-Muller spare so a restored stream continues bit-exactly.
    std::string save_state() const {
        std::ostringstream os;
        os << engine_ << " " << (have_spare_ ? 1 : 0) << " ";
        os.precision(17);
        os << std::scientific << spare_;
        return os.str();
    }

    void load_state(const std::string& text) {
        std::istringstream is(text);
        int spare_flag = 0;
        is >> engine_ >> spare_flag >> spare_;
        have_spare_ = spare_flag != 0;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// One root seed, split per purpose so data generation, parameter init and
// shuffling draw from unrelated streams.
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t purpose) {
    // splitmix64 finalizer over root xor purpose
    std::uint64_t z = root ^ (purpose * 0x9E3779B97F4A7C15ull);
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace seed_purpose {
inline constexpr std::uint64_t data = 1;
inline constexpr std::uint64_t init = 2;
inline constexpr std::uint64_t shuffle = 3;
inline constexpr std::uint64_t test = 4;
}  // namespace seed_purpose

}  // namespace ikno

#endif  // IKNO_RNG_HPP
