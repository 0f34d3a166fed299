#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "pneuro/common.hpp"

namespace pneuro {

// xoshiro256++ seeded through splitmix64. Used for device-physics noise and
// oracle samplers; deliberately separate from the digital LFSR path.
class Xoshiro256pp {
  public:
    explicit constexpr Xoshiro256pp(std::uint64_t seed = 1) {
        std::uint64_t x = seed;
        for (auto& v : s_) v = splitmix64(x);
    }

    constexpr std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0,1) with 53-bit resolution
    constexpr double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4]{};
};

// Standard normal variates via Box–Muller, one cached per pair.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = rng_.u01();
        const double u2 = rng_.u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

  private:
    Xoshiro256pp rng_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace pneuro
