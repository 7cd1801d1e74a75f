#pragma once

#include <cstdint>
#include <random>

#include "qf/gaussian.hpp"

namespace qf {

// splitmix64 step; used to whiten seeds and derive independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based stream derivation: replication k of master seed s gets its
// own generator, independent of evaluation order across workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t st = master;
    std::uint64_t a = splitmix64(st);
    st = a ^ (stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
    std::uint64_t b = splitmix64(st);
    (void)splitmix64(st);
    return b ^ st;
}

// Deterministic draws with explicit transforms (no reliance on the standard
// library's unspecified distribution algorithms), so identical seeds give
// identical samples on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform on [2^-53, 1 - 2^-53]; never returns an exact 0 or 1
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_quantile(uniform()); }

    double rademacher() { return (eng_() >> 63) ? 1.0 : -1.0; }

    // Marsaglia-Tsang; shape >= 1 is all we need (chi-square halves).
    double gamma(double shape) {
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Student t with df > 4 degrees of freedom, rescaled to unit variance.
    double student_unit(double df) {
        double z = normal();
        double chi2 = 2.0 * gamma(0.5 * df);
        double t = z / std::sqrt(chi2 / df);
        return t * std::sqrt((df - 2.0) / df);
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace qf
