#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pneuro/broker.hpp"
#include "pneuro/lfsr.hpp"
#include "pneuro/rng.hpp"

namespace pneuro {

// Fully connected Boltzmann machine of p-Sigmoid neurons over bipolar states.
struct NetworkSpec {
    enum class Sampler { triangular_comparator, exact_logistic };
    enum class NoiseSource { shared_broker, independent_units };

    int n = 0;
    std::vector<double> j;  // row-major n*n, symmetric, zero diagonal
    std::vector<double> h;
    double i0 = 2.0;
    Sampler sampler = Sampler::triangular_comparator;
    NoiseSource noise = NoiseSource::shared_broker;
    bool random_scan = false;  // default: fixed ascending update order
    std::vector<int> clamp;    // optional, size n: 0 free, +1/-1 pinned

    void validate() const;
    double coupling(int i, int k) const { return j[static_cast<std::size_t>(i) * n + k]; }
    // S = max_i (sum_j |J_ij| + |h_i|): bound on any local field magnitude.
    double saturation_bound() const;
};

// Invertible-logic AND over neurons (A, B, C=AND(A,B)): the four truth-table
// states are the exclusive energy minima.
NetworkSpec p_and_spec(double i0,
                       NetworkSpec::Sampler sampler = NetworkSpec::Sampler::triangular_comparator,
                       NetworkSpec::NoiseSource noise = NetworkSpec::NoiseSource::shared_broker);

// E(m) = -(sum_{i<j} J_ij m_i m_j + sum_i h_i m_i)
double network_energy(const NetworkSpec& spec, std::span<const int> state);

// Comparator-domain image of a synaptic input: mid + I * span/(2S), clamped.
// S bounds |I|/i0 so the linear map can never overflow the word range by more
// than the clamp absorbs.
Word32 synaptic_word(double input, double saturation_bound);

// Sequential Gibbs-style sampler. One sweep updates every unclamped neuron in
// ascending order; each update consumes exactly one draw at its own tick, so
// a shared unit introduces no same-update correlation.
class GibbsSampler {
  public:
    GibbsSampler(NetworkSpec spec, std::uint64_t seed);

    void sweep();
    const std::vector<int>& state() const { return state_; }
    void set_state(std::vector<int> s);
    std::size_t state_index() const;  // bit k set iff neuron k is +1
    const NetworkSpec& spec() const { return spec_; }

    double local_field(int i) const;  // sum_j J_ij s_j + h_i

  private:
    bool fire(int i);

    NetworkSpec spec_;
    std::vector<int> state_;
    std::optional<SharedBroker> broker_;
    std::vector<IrwinHallUnit> units_;
    std::vector<std::string> ids_;
    Xoshiro256pp u01_;
    double sat_;
};

struct StateHistogram {
    std::vector<std::uint64_t> counts;  // 2^n, indexed by state_index
    std::uint64_t sweeps = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t total() const { return sweeps - burn_in; }
};

// One recorded sample per sweep after burn-in; deterministic in (spec, seed).
StateHistogram run_histogram(const NetworkSpec& spec, std::uint64_t sweeps,
                             std::uint64_t burn_in, std::uint64_t seed);

// Exact enumeration of P(m) = exp(-i0 E(m)) / Z. Refuses n > 20.
std::vector<double> boltzmann_exact(const NetworkSpec& spec);

struct DistanceReport {
    double tv = 0.0;
    double kl = 0.0;
};

// TV = 1/2 sum |phat - p|; KL(phat || p) with zero counts smoothed to
// eps = 1/(2 * total) and renormalized.
DistanceReport compare_distributions(const StateHistogram& empirical,
                                     std::span<const double> exact);

// State label with neuron 0 leftmost, '1' for +1.
std::string state_bits(std::size_t index, int n);

}  // namespace pneuro
