#include "pneuro/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pneuro/common.hpp"

namespace pneuro {

void NetworkSpec::validate() const {
    if (n < 1) throw std::invalid_argument("network: need at least one neuron");
    if (j.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("network: J must be n x n");
    if (h.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("network: h must have length n");
    if (i0 <= 0.0) throw std::invalid_argument("network: i0 must be positive");
    for (int i = 0; i < n; ++i) {
        if (coupling(i, i) != 0.0) throw std::invalid_argument("network: J diagonal must be zero");
        for (int k = 0; k < i; ++k)
            if (coupling(i, k) != coupling(k, i))
                throw std::invalid_argument("network: J must be symmetric");
    }
    if (!clamp.empty()) {
        if (clamp.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("network: clamp vector must have length n");
        for (int c : clamp)
            if (c != -1 && c != 0 && c != 1)
                throw std::invalid_argument("network: clamp values must be -1, 0 or +1");
    }
}

double NetworkSpec::saturation_bound() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = std::abs(h[static_cast<std::size_t>(i)]);
        for (int k = 0; k < n; ++k) row += std::abs(coupling(i, k));
        s = std::max(s, row);
    }
    return s;
}

NetworkSpec p_and_spec(double i0, NetworkSpec::Sampler sampler, NetworkSpec::NoiseSource noise) {
    NetworkSpec spec;
    spec.n = 3;
    spec.j = {0, -1, 2, -1, 0, 2, 2, 2, 0};
    spec.h = {1, 1, -2};
    spec.i0 = i0;
    spec.sampler = sampler;
    spec.noise = noise;
    spec.validate();
    return spec;
}

double network_energy(const NetworkSpec& spec, std::span<const int> state) {
    if (state.size() != static_cast<std::size_t>(spec.n))
        throw std::invalid_argument("network_energy: state length mismatch");
    double e = 0.0;
    for (int i = 0; i < spec.n; ++i)
        for (int k = i + 1; k < spec.n; ++k)
            e += spec.coupling(i, k) * state[static_cast<std::size_t>(i)] *
                 state[static_cast<std::size_t>(k)];
    for (int i = 0; i < spec.n; ++i)
        e += spec.h[static_cast<std::size_t>(i)] * state[static_cast<std::size_t>(i)];
    return -e;
}

Word32 synaptic_word(double input, double saturation_bound) {
    if (saturation_bound <= 0.0)
        throw std::invalid_argument("synaptic_word: saturation bound must be positive");
    constexpr double span = 4294967295.0;  // full support width of the draw distribution
    const double mid = span / 2.0;
    const double w = mid + input * span / (2.0 * saturation_bound);
    const double clamped = std::clamp(w, 0.0, span);
    return static_cast<Word32>(std::llround(clamped));
}

GibbsSampler::GibbsSampler(NetworkSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)),
      u01_(derive_seed(seed, "net-logistic")),
      sat_(0.0) {
    spec_.validate();
    sat_ = spec_.saturation_bound();
    if (sat_ <= 0.0) sat_ = 1.0;  // free coin-flip network: any scale works

    Xoshiro256pp init(derive_seed(seed, "net-init"));
    state_.resize(static_cast<std::size_t>(spec_.n));
    for (int i = 0; i < spec_.n; ++i)
        state_[static_cast<std::size_t>(i)] = (init.next() & 1) ? 1 : -1;
    if (!spec_.clamp.empty())
        for (int i = 0; i < spec_.n; ++i)
            if (spec_.clamp[static_cast<std::size_t>(i)] != 0)
                state_[static_cast<std::size_t>(i)] = spec_.clamp[static_cast<std::size_t>(i)];

    if (spec_.sampler == NetworkSpec::Sampler::triangular_comparator) {
        if (spec_.noise == NetworkSpec::NoiseSource::shared_broker) {
            broker_.emplace(derive_seed(seed, "net-broker"));
            for (int i = 0; i < spec_.n; ++i)
                broker_->subscribe("n" + std::to_string(i), DrawAdapter::irwin_hall_sum);
        } else {
            units_.reserve(static_cast<std::size_t>(spec_.n));
            for (int i = 0; i < spec_.n; ++i) {
                const auto idx = static_cast<std::uint64_t>(i);
                const Word32 sa = derive_seed32(seed, "net-unit-a", idx);
                Word32 sb = derive_seed32(seed, "net-unit-b", idx);
                std::uint64_t bump = 1;
                while (sb == sa) sb = derive_seed32(seed, "net-unit-b", idx + (bump++ << 32));
                units_.emplace_back(sa, sb);
            }
        }
    }
    ids_.reserve(static_cast<std::size_t>(spec_.n));
    for (int i = 0; i < spec_.n; ++i) ids_.push_back("n" + std::to_string(i));
}

double GibbsSampler::local_field(int i) const {
    double u = spec_.h[static_cast<std::size_t>(i)];
    for (int k = 0; k < spec_.n; ++k)
        u += spec_.coupling(i, k) * state_[static_cast<std::size_t>(k)];
    return u;
}

bool GibbsSampler::fire(int i) {
    const double input = spec_.i0 * local_field(i);
    if (spec_.sampler == NetworkSpec::Sampler::exact_logistic) {
        const double p = 1.0 / (1.0 + std::exp(-2.0 * input));
        return u01_.u01() < p;
    }
    const Word32 w = synaptic_word(input, sat_);
    const Word32 draw = broker_ ? broker_->tick_for(ids_[static_cast<std::size_t>(i)])
                                : units_[static_cast<std::size_t>(i)].draw();
    return w > draw;
}

void GibbsSampler::sweep() {
    if (!spec_.random_scan) {
        for (int i = 0; i < spec_.n; ++i) {
            if (!spec_.clamp.empty() && spec_.clamp[static_cast<std::size_t>(i)] != 0) continue;
            state_[static_cast<std::size_t>(i)] = fire(i) ? 1 : -1;
        }
        return;
    }
    std::vector<int> order(static_cast<std::size_t>(spec_.n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = spec_.n - 1; i > 0; --i) {
        const auto k = static_cast<int>(u01_.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(k)]);
    }
    for (int i : order) {
        if (!spec_.clamp.empty() && spec_.clamp[static_cast<std::size_t>(i)] != 0) continue;
        state_[static_cast<std::size_t>(i)] = fire(i) ? 1 : -1;
    }
}

void GibbsSampler::set_state(std::vector<int> s) {
    if (s.size() != static_cast<std::size_t>(spec_.n))
        throw std::invalid_argument("set_state: length mismatch");
    for (int v : s)
        if (v != -1 && v != 1) throw std::invalid_argument("set_state: states are bipolar");
    state_ = std::move(s);
}

std::size_t GibbsSampler::state_index() const {
    std::size_t idx = 0;
    for (int i = 0; i < spec_.n; ++i)
        if (state_[static_cast<std::size_t>(i)] > 0) idx |= std::size_t{1} << i;
    return idx;
}

StateHistogram run_histogram(const NetworkSpec& spec, std::uint64_t sweeps,
                             std::uint64_t burn_in, std::uint64_t seed) {
    if (sweeps <= burn_in)
        throw std::invalid_argument("run_histogram: sweeps must exceed burn_in");
    GibbsSampler sampler(spec, seed);
    StateHistogram hist;
    hist.sweeps = sweeps;
    hist.burn_in = burn_in;
    hist.counts.assign(std::size_t{1} << spec.n, 0);
    for (std::uint64_t s = 0; s < sweeps; ++s) {
        sampler.sweep();
        if (s >= burn_in) ++hist.counts[sampler.state_index()];
    }
    return hist;
}

std::vector<double> boltzmann_exact(const NetworkSpec& spec) {
    spec.validate();
    if (spec.n > 20)
        throw std::invalid_argument("boltzmann_exact: enumeration limited to n <= 20");
    const std::size_t n_states = std::size_t{1} << spec.n;
    std::vector<double> p(n_states);
    std::vector<int> state(static_cast<std::size_t>(spec.n));
    double z = 0.0;
    for (std::size_t idx = 0; idx < n_states; ++idx) {
        for (int i = 0; i < spec.n; ++i)
            state[static_cast<std::size_t>(i)] = (idx >> i) & 1 ? 1 : -1;
        p[idx] = std::exp(-spec.i0 * network_energy(spec, state));
        z += p[idx];
    }
    for (auto& v : p) v /= z;
    return p;
}

DistanceReport compare_distributions(const StateHistogram& empirical,
                                     std::span<const double> exact) {
    if (empirical.counts.size() != exact.size())
        throw std::invalid_argument("compare_distributions: state-space size mismatch");
    const auto total = std::accumulate(empirical.counts.begin(), empirical.counts.end(),
                                       std::uint64_t{0});
    if (total == 0) throw std::invalid_argument("compare_distributions: empty histogram");

    DistanceReport rep;
    const double eps = 1.0 / (2.0 * static_cast<double>(total));
    std::vector<double> phat(empirical.counts.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < phat.size(); ++i) {
        phat[i] = empirical.counts[i] > 0
                      ? static_cast<double>(empirical.counts[i]) / static_cast<double>(total)
                      : eps;
        mass += phat[i];
    }
    for (auto& v : phat) v /= mass;

    for (std::size_t i = 0; i < phat.size(); ++i) {
        const double raw = static_cast<double>(empirical.counts[i]) / static_cast<double>(total);
        rep.tv += std::abs(raw - exact[i]);
        rep.kl += phat[i] * std::log(phat[i] / exact[i]);
    }
    rep.tv /= 2.0;
    return rep;
}

std::string state_bits(std::size_t index, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((index >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

}  // namespace pneuro
