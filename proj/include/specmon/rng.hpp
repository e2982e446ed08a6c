#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace specmon {

// splitmix64 mix step; used both as a generator seeder and for deriving
// independent per-signal seeds from a master seed.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard and
// all distributions here are hand-rolled, so streams are bit-identical across
// platforms and compilers.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(mix64(seed)) {}

    uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // uniform integer in [0, n); rejection sampling, no modulo bias
    uint64_t uniform_int(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // standard normal via Box-Muller, spare value cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace specmon
