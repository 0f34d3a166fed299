#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pneuro/common.hpp"
#include "pneuro/lfsr.hpp"

namespace pneuro {

// How a subscriber turns the tick's source words into its draw.
enum class DrawAdapter {
    irwin_hall_sum,  // halved 33-bit sum of both source words (triangular)
    single_word,     // first source word as-is (uniform)
};

// One stochastic unit feeding any number of p-neurons. Per tick the two
// source LFSRs advance exactly once and every subscriber receives one draw
// derived from that tick's pair of words, so the whole draw history is a pure
// function of (seed, tick, adapter).
class SharedBroker {
  public:
    explicit SharedBroker(std::uint64_t seed)
        : a_(derive_seed32(seed, "broker-a")),
          b_(distinct_seed_b(seed)) {}

    SharedBroker(Lfsr a, Lfsr b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_.state() == b_.state())
            throw std::invalid_argument("broker: identical source seeds");
    }

    void subscribe(std::string id, DrawAdapter adapter) {
        for (const auto& [sid, ad] : subscribers_)
            if (sid == id) throw std::invalid_argument("broker: duplicate subscriber id '" + id + "'");
        subscribers_.emplace_back(std::move(id), adapter);
    }

    const std::vector<std::pair<std::string, DrawAdapter>>& subscribers() const {
        return subscribers_;
    }

    std::vector<std::pair<std::string, Word32>> tick() {
        if (subscribers_.empty())
            throw std::invalid_argument("broker: tick with no subscribers registered");
        const Word32 wa = a_.next_word();
        const Word32 wb = b_.next_word();
        ++ticks_;
        std::vector<std::pair<std::string, Word32>> out;
        out.reserve(subscribers_.size());
        for (const auto& [id, adapter] : subscribers_)
            out.emplace_back(id, adapt(adapter, wa, wb));
        return out;
    }

    // Advance one tick and return a single subscriber's draw. Sequential
    // consumers (network sweeps) use this so each update lands on its own tick.
    Word32 tick_for(std::string_view id) {
        if (subscribers_.empty())
            throw std::invalid_argument("broker: tick with no subscribers registered");
        const Word32 wa = a_.next_word();
        const Word32 wb = b_.next_word();
        ++ticks_;
        for (const auto& [sid, adapter] : subscribers_)
            if (sid == id) return adapt(adapter, wa, wb);
        throw std::invalid_argument("broker: unknown subscriber id");
    }

    std::uint64_t ticks() const { return ticks_; }

  private:
    static Word32 adapt(DrawAdapter adapter, Word32 wa, Word32 wb) {
        return adapter == DrawAdapter::irwin_hall_sum ? IrwinHallUnit::combine(wa, wb) : wa;
    }

    Word32 distinct_seed_b(std::uint64_t seed) const {
        Word32 sb = derive_seed32(seed, "broker-b");
        std::uint64_t bump = 1;
        while (sb == a_.state()) sb = derive_seed32(seed, "broker-b", bump++);
        return sb;
    }

    Lfsr a_;
    Lfsr b_;
    std::vector<std::pair<std::string, DrawAdapter>> subscribers_;
    std::uint64_t ticks_ = 0;
};

}  // namespace pneuro
