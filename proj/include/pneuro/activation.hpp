#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "pneuro/common.hpp"

namespace pneuro {

enum class Signedness { unsigned_word, twos_complement };
enum class Polarity { bipolar, unipolar };

struct DigitalEncoding {
    Signedness signedness = Signedness::unsigned_word;
    Polarity polarity = Polarity::bipolar;
};

// Strict greater-than comparator; equality yields the low output. The tie has
// probability 2^-32 against a free-running source and no measurable effect on
// time-averaged curves.
inline int compare(Word32 i_in, Word32 r, DigitalEncoding enc) {
    bool high;
    if (enc.signedness == Signedness::twos_complement)
        high = static_cast<std::int32_t>(i_in) > static_cast<std::int32_t>(r);
    else
        high = i_in > r;
    if (enc.polarity == Polarity::bipolar) return high ? 1 : -1;
    return high ? 1 : 0;
}

// Rectifier for the p-ReLU path: the sign bit of the two's-complement input
// gates the comparator, so every negative input yields 0 regardless of r.
// r must be a draw over the non-negative range [0, 2^31).
inline int relu_gate(Word32 i_in, Word32 r) {
    if (static_cast<std::int32_t>(i_in) < 0) return 0;
    return compare(i_in, r, {Signedness::twos_complement, Polarity::unipolar});
}

// Behavioral surrogate for the analog output stage: finite gain, hard rails,
// and a slew-rate limit on how far the output moves per step. With infinite
// slew it degenerates to an ideal clamped comparator of gain * v_diff.
struct AnalogAmpParams {
    double gain = 1e3;
    double slew_rate = 1e9;  // V/s
    double rail_low = -0.4;
    double rail_high = 0.4;
    double dt = 1e-12;
};

class AnalogAmp {
  public:
    explicit AnalogAmp(AnalogAmpParams p, double v_out = 0.0) : p_(p), v_out_(v_out) {
        if (p_.rail_low >= p_.rail_high)
            throw std::invalid_argument("amp: rail_low must be below rail_high");
        if (p_.dt <= 0.0) throw std::invalid_argument("amp: dt must be positive");
        v_out_ = std::clamp(v_out_, p_.rail_low, p_.rail_high);
    }

    double step(double v_diff) {
        const double target = std::clamp(p_.gain * v_diff, p_.rail_low, p_.rail_high);
        const double max_move = p_.slew_rate * p_.dt;
        const double delta = std::clamp(target - v_out_, -max_move, max_move);
        v_out_ = std::clamp(v_out_ + delta, p_.rail_low, p_.rail_high);
        return v_out_;
    }

    double v_out() const { return v_out_; }
    const AnalogAmpParams& params() const { return p_; }

  private:
    AnalogAmpParams p_;
    double v_out_;
};

}  // namespace pneuro
