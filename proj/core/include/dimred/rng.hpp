#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dimred/types.hpp"

namespace dimred {

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard; the uniform/normal maps below avoid the implementation-defined
/// std:: distributions so that seeded sweeps are bit-reproducible anywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        // 53-bit mantissa draw in [0,1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    std::uint64_t integer(std::uint64_t n) { return gen_() % n; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    cplx cnormal() { return {normal(), normal()}; }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dimred
