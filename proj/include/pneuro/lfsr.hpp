#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "pneuro/common.hpp"

namespace pneuro {

// x^32 + x^22 + x^2 + x + 1, maximal length over the nonzero 32-bit states.
inline constexpr std::array<int, 4> kDefaultTaps32{32, 22, 2, 1};
inline constexpr std::array<int, 4> kMaximalTaps8{8, 6, 5, 4};

// Fibonacci LFSR: feedback bit is the XOR of the tapped bits, shifted in at
// the LSB. Width-parametric so reduced-width variants can be checked
// exhaustively. The all-zero state is absorbing and rejected up front.
class Lfsr {
  public:
    Lfsr(Word32 seed, std::span<const int> taps, int width = 32) : width_(width) {
        if (width < 2 || width > 32) throw std::invalid_argument("lfsr: width must be in [2,32]");
        reg_mask_ = width == 32 ? 0xFFFFFFFFu : ((1u << width) - 1u);
        if (seed == 0) throw std::invalid_argument("lfsr: zero seed is an absorbing state");
        if ((seed & ~reg_mask_) != 0) throw std::invalid_argument("lfsr: seed exceeds register width");
        if (taps.empty()) throw std::invalid_argument("lfsr: no taps given");
        tap_mask_ = 0;
        for (int t : taps) {
            if (t < 1 || t > width) throw std::invalid_argument("lfsr: tap outside register");
            tap_mask_ |= 1u << (t - 1);
        }
        state_ = seed;
    }

    explicit Lfsr(Word32 seed) : Lfsr(seed, kDefaultTaps32, 32) {}

    // One shift; the new state doubles as the draw.
    Word32 step() {
        const Word32 fb = static_cast<Word32>(std::popcount(state_ & tap_mask_) & 1);
        state_ = ((state_ << 1) | fb) & reg_mask_;
        return state_;
    }

    // One full register refill (width shifts). Successive single-shift states
    // differ only by one bit position and are strongly serially correlated;
    // sampled draws therefore advance by whole words, the way a bit-clocked
    // register is consumed one word per sample.
    Word32 next_word() {
        for (int i = 0; i < width_; ++i) step();
        return state_;
    }

    Word32 state() const { return state_; }
    int width() const { return width_; }

  private:
    Word32 state_;
    Word32 tap_mask_;
    Word32 reg_mask_;
    int width_;
};

// Two free-running LFSRs summed into one draw. The 33-bit sum is halved, not
// wrapped: a wrapping 32-bit add of two uniforms is again uniform and loses
// the triangular shape the sum is meant to produce.
class IrwinHallUnit {
  public:
    IrwinHallUnit(Word32 seed_a, Word32 seed_b)
        : a_(seed_a), b_(seed_b) {
        if (seed_a == seed_b)
            throw std::invalid_argument("irwin-hall: identical seeds collapse the sum");
    }

    IrwinHallUnit(Lfsr a, Lfsr b) : a_(a), b_(b) {
        if (a_.state() == b_.state())
            throw std::invalid_argument("irwin-hall: identical seeds collapse the sum");
    }

    static constexpr Word32 combine(Word32 a, Word32 b) {
        return static_cast<Word32>((static_cast<std::uint64_t>(a) + b) >> 1);
    }

    Word32 draw() { return combine(a_.next_word(), b_.next_word()); }

    const Lfsr& lfsr_a() const { return a_; }
    const Lfsr& lfsr_b() const { return b_; }

  private:
    Lfsr a_;
    Lfsr b_;
};

}  // namespace pneuro
