#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "pneuro/activation.hpp"
#include "pneuro/rng.hpp"

using namespace pneuro;

TEST_CASE("comparator tie rule: equality yields the low output") {
    for (Signedness s : {Signedness::unsigned_word, Signedness::twos_complement}) {
        CHECK(compare(0x1234u, 0x1234u, {s, Polarity::bipolar}) == -1);
        CHECK(compare(0x1234u, 0x1234u, {s, Polarity::unipolar}) == 0);
    }
}

TEST_CASE("comparator dominance at the word extremes") {
    CHECK(compare(0xFFFFFFFFu, 0xFFFFFFFEu,
                  {Signedness::unsigned_word, Polarity::bipolar}) == 1);
    CHECK(compare(0x7FFFFFFFu, 0x80000000u,  // +max vs -min under two's complement
                  {Signedness::twos_complement, Polarity::unipolar}) == 1);
    CHECK(compare(0x80000000u, 0x7FFFFFFFu,
                  {Signedness::twos_complement, Polarity::bipolar}) == -1);
}

TEST_CASE("comparator is monotone in the input under both orders") {
    Xoshiro256pp rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto r = static_cast<Word32>(rng.next());
        auto i1 = static_cast<Word32>(rng.next());
        auto i2 = static_cast<Word32>(rng.next());
        {
            DigitalEncoding enc{Signedness::unsigned_word, Polarity::bipolar};
            if (i1 > i2) std::swap(i1, i2);
            CHECK(compare(i1, r, enc) <= compare(i2, r, enc));
        }
        {
            DigitalEncoding enc{Signedness::twos_complement, Polarity::unipolar};
            auto s1 = i1, s2 = i2;
            if (static_cast<std::int32_t>(s1) > static_cast<std::int32_t>(s2)) std::swap(s1, s2);
            CHECK(compare(s1, r, enc) <= compare(s2, r, enc));
        }
    }
}

TEST_CASE("bipolar output is 2*unipolar - 1, bit for bit") {
    Xoshiro256pp rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto i = static_cast<Word32>(rng.next());
        const auto r = static_cast<Word32>(rng.next());
        for (Signedness s : {Signedness::unsigned_word, Signedness::twos_complement}) {
            const int uni = compare(i, r, {s, Polarity::unipolar});
            const int bip = compare(i, r, {s, Polarity::bipolar});
            CHECK(bip == 2 * uni - 1);
        }
    }
}

TEST_CASE("relu gate zeroes every negative input, exhaustively at 8 bits") {
    for (int i = -128; i < 0; ++i) {
        const auto word = static_cast<Word32>(static_cast<std::int32_t>(i));
        for (Word32 r = 0; r < 128; ++r) CHECK(relu_gate(word, r) == 0);
    }
    // strict comparison: zero input never fires
    for (Word32 r = 0; r < 128; ++r) CHECK(relu_gate(0, r) == 0);
    // dominance at the positive extreme
    CHECK(relu_gate(0x7FFFFFFFu, 0) == 1);
    CHECK(relu_gate(0x7FFFFFFFu, 0x7FFFFFFEu) == 1);
    CHECK(relu_gate(0x7FFFFFFFu, 0x7FFFFFFFu) == 0);  // tie stays low
}

TEST_CASE("amplifier surrogate: rails, slew, and the ideal-comparator limit") {
    CHECK_THROWS_AS(AnalogAmp({1e3, 1e9, 0.4, -0.4, 1e-12}), std::invalid_argument);

    // midpoint rest with zero differential input
    AnalogAmp rest({1e3, 1e9, -0.4, 0.4, 1e-12}, 0.0);
    for (int i = 0; i < 5; ++i) CHECK(rest.step(0.0) == 0.0);

    // slew * dt covering the whole rail span: one step saturates
    AnalogAmp fast({1e3, 0.8 / 1e-12, -0.4, 0.4, 1e-12}, 0.0);
    CHECK(fast.step(1.0) == doctest::Approx(0.4));
    CHECK(fast.step(-1.0) == doctest::Approx(-0.4));

    // limited slew: intermediate non-rail samples appear on a step input
    AnalogAmp slow({1e3, 0.1 / 1e-12, -0.4, 0.4, 1e-12}, 0.0);
    int interior = 0;
    for (int i = 0; i < 8; ++i) {
        const double v = slow.step(0.7);
        CHECK(v <= 0.4);
        CHECK(v >= -0.4);
        if (v > -0.4 && v < 0.4) ++interior;
    }
    CHECK(interior >= 3);
    CHECK(slow.v_out() == doctest::Approx(0.4));

    // with effectively infinite slew the amp is a clamped comparator of gain * v_diff
    AnalogAmp ideal({1e3, 1e12, -0.4, 0.4, 1e-12}, 0.0);
    Xoshiro256pp rng(5);
    for (int i = 0; i < 200; ++i) {
        const double diff = 2e-3 * (rng.u01() - 0.5);
        const double expect = std::clamp(1e3 * diff, -0.4, 0.4);
        CHECK(ideal.step(diff) == doctest::Approx(expect).epsilon(1e-12));
    }
}
