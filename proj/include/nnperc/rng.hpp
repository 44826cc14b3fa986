#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace nnperc {

namespace detail {
// splitmix64 finalizer; full-period, passes standard statistical batteries.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based generator keyed by (seed, stream). Output i depends only on
// (seed, stream, i), so parallel consumers that own distinct streams (or
// distinct counter ranges) produce identical sequences regardless of
// scheduling. Same-build determinism is the contract; bit-identity across
// compilers is not promised.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream)
        : key_(detail::mix64(seed + 0x9E3779B97F4A7C15ull) ^
               detail::mix64(stream * 0xD2B74407B1CE6E93ull + 0x3C6EF372FE94F82Bull)),
          counter_(0) {}

    uint64_t next_u64() {
        return detail::mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ull);
    }

    // Uniform in [0,1), 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1); safe under log().
    double next_open01() {
        double u = next_double();
        return u > 0.0 ? u : 0x1.0p-54;
    }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

  private:
    uint64_t key_;
    uint64_t counter_;
};

// Poisson(mu) count. CDF inversion for small mu; Atkinson's logistic-envelope
// rejection above (exact, no normal approximation).
inline int64_t poisson_count(CounterRng& rng, double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("poisson_count: mu must be finite and >= 0");
    if (mu == 0.0) return 0;
    if (mu <= 30.0) {
        const double u = rng.next_double();
        double term = std::exp(-mu);
        double cum = term;
        int64_t n = 0;
        while (cum <= u && n < 1000) {
            ++n;
            term *= mu / double(n);
            cum += term;
        }
        return n;
    }
    const double beta = M_PI / std::sqrt(3.0 * mu);
    const double alpha = beta * mu;
    const double c = 0.767 - 3.36 / mu;
    const double k = std::log(c) - mu - std::log(beta);
    const double logmu = std::log(mu);
    for (;;) {
        const double u1 = rng.next_open01();
        const double x = (alpha - std::log((1.0 - u1) / u1)) / beta;
        const double n = std::floor(x + 0.5);
        if (n < 0.0) continue;
        const double u2 = rng.next_open01();
        const double y = alpha - beta * x;
        const double t = 1.0 + std::exp(y);
        const double lhs = y + std::log(u2 / (t * t));
        const double rhs = k + n * logmu - std::lgamma(n + 1.0);
        if (lhs <= rhs) return int64_t(n);
    }
}

}  // namespace nnperc
