#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pneuro/activation.hpp"
#include "pneuro/cells.hpp"
#include "pneuro/common.hpp"
#include "pneuro/lfsr.hpp"

namespace pneuro {

enum class ActivationKind { p_tanh, p_sigmoid, p_relu, p_linear };

const char* to_string(ActivationKind k);
ActivationKind activation_from_string(const std::string& s);

// Word encodings per activation family: the bell-shaped pair reads unsigned
// fixed point, the uniform pair reads two's complement.
DigitalEncoding encoding_for(ActivationKind k);

struct WordDomain {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t width() const { return hi - lo; }
};

// Input domain of the comparator under the kind's signedness.
WordDomain input_domain_for(ActivationKind k);
// Domain of the adapted stochastic draw (non-negative range for p-ReLU).
WordDomain draw_domain_for(ActivationKind k);
// Exact midpoint of the adapted draw distribution (the mu that beta scales about).
double draw_midpoint_for(ActivationKind k);

// Closed-form CDFs of the idealized digital sources, strict-comparison
// convention: each returns P(draw < input). Width-parametric so reduced-width
// enumerations can check them exactly.
//
// Triangular: draw = floor((a+b)/2) with a,b iid uniform over {0..2^w-1}.
// Counting pairs a+b <= 2I-1 gives I(2I+1)/2^2w on the lower half and the
// mirrored expression above it.
double triangular_cdf_strict(std::int64_t input, int width = 32);
double uniform_signed_cdf_strict(std::int64_t input, int width = 32);
double uniform_nonneg_cdf_strict(std::int64_t input, int width = 32);

class RngCdf {
  public:
    static RngCdf triangular_words(int width = 32);
    static RngCdf uniform_signed_words(int width = 32);
    static RngCdf uniform_nonneg_words(int width = 32);
    static RngCdf empirical(std::vector<double> draws);  // sorted internally
    static RngCdf for_activation(ActivationKind k);

    // P(draw < x)
    double prob_below(double x) const;

  private:
    enum class Kind { triangular, uniform_signed, uniform_nonneg, empirical };
    RngCdf(Kind k, int width) : kind_(k), width_(width) {}
    Kind kind_;
    int width_;
    std::vector<double> samples_;
};

// Expected time-averaged output of an ideal digital p-neuron fed by the given
// draw distribution.
double analytic_transfer(ActivationKind kind, const RngCdf& cdf, std::int64_t input);

// A digital p-neuron: stochastic source (two LFSRs summed, or a single LFSR)
// plus a strict comparator, with the draw scalable about the distribution
// midpoint by beta.
class DigitalPNeuron {
  public:
    DigitalPNeuron(ActivationKind kind, std::uint64_t seed, double beta = 1.0);

    // Instantaneous output for one fresh draw. Bipolar kinds return -1/+1,
    // unipolar 0/1. Inputs outside the declared domain throw.
    int step(std::int64_t input);

    // Same activation path, but the adapted draw comes from an external
    // shared stochastic unit (a broker word).
    int step_with_word(std::int64_t input, Word32 adapted_word);

    // The beta-scaled draw in input-word coordinates; exposed so decoupling
    // tests can observe the stochastic stream independently of the comparator.
    std::int64_t scaled_draw();

    void set_beta(double beta);
    double beta() const { return beta_; }
    ActivationKind kind() const { return kind_; }
    WordDomain domain() const { return input_domain_for(kind_); }

    static std::int64_t word_to_draw(ActivationKind kind, Word32 adapted_word);

  private:
    std::int64_t raw_draw();
    std::int64_t scale(std::int64_t draw) const;
    int activate(std::int64_t input, std::int64_t draw) const;

    ActivationKind kind_;
    double beta_;
    std::variant<IrwinHallUnit, Lfsr> source_;
};

struct CurvePoint {
    double input = 0.0;
    double mean = 0.0;
    std::uint64_t n = 0;
};

struct CurveMeta {
    std::uint64_t seed = 0;
    ActivationKind kind = ActivationKind::p_tanh;
    double beta = 1.0;
    std::string impl = "digital";
    std::uint64_t samples_per_point = 0;
};

struct TransferCurve {
    std::vector<CurvePoint> points;
    CurveMeta meta;
};

// Evenly spaced integer sweep across a word domain, endpoints included.
std::vector<std::int64_t> linspace_words(WordDomain d, int n_points);
std::vector<double> linspace(double lo, double hi, int n_points);

// Time-averaged transfer curves. Every sweep point gets an independent
// source seeded by (seed, point index), so the parallel version is
// bit-identical to the serial reference regardless of thread count.
TransferCurve transfer_curve_serial(ActivationKind kind, std::span<const std::int64_t> sweep,
                                    std::uint64_t samples_per_point, std::uint64_t seed,
                                    double beta = 1.0);
TransferCurve transfer_curve_parallel(ActivationKind kind, std::span<const std::int64_t> sweep,
                                      std::uint64_t samples_per_point, std::uint64_t seed,
                                      double beta = 1.0);
TransferCurve transfer_curve(ActivationKind kind, std::span<const std::int64_t> sweep,
                             std::uint64_t samples_per_point, std::uint64_t seed,
                             double beta = 1.0);

// Curves for two broker subscribers measured simultaneously from one shared
// stochastic unit: per sweep point, one broker advance feeds both neurons.
struct SharedCurvePair {
    TransferCurve sigmoid_curve;
    TransferCurve linear_curve;
};
SharedCurvePair shared_unit_curves(std::span<const std::int64_t> sweep_sigmoid,
                                   std::span<const std::int64_t> sweep_linear,
                                   std::uint64_t samples_per_point, std::uint64_t seed);

// Analog p-neuron: a stochastic divider cell plus either an ideal comparator
// or the slew-limited amplifier surrogate.
struct AnalogNeuronConfig {
    ActivationKind kind = ActivationKind::p_tanh;
    SmtjState device_state{};
    SllgParams device{};
    double v_dd = 0.8;
    double r1 = 0.0;          // 1M1R only; 0 selects the 0.35/G0 default
    double alpha_cell = 0.155;
    bool ideal_comparator = true;
    AnalogAmpParams amp{};
    double beta = 1.0;
    std::size_t warmup_steps = 64;
    bool stationary_init = true;  // draw the initial magnetization uniformly on the sphere
};

class AnalogPNeuron {
  public:
    AnalogPNeuron(const AnalogNeuronConfig& cfg, std::uint64_t seed);

    // Advances the device one tick and evaluates the activation unit.
    // Ideal comparator returns the output alphabet endpoints; the amplifier
    // surrogate returns rail-normalized values in between.
    double step(double v_in);

    double stochastic_midpoint() const { return mid_; }
    ActivationKind kind() const { return cfg_.kind; }

  private:
    double sample_scaled();

    AnalogNeuronConfig cfg_;
    std::variant<TwoMCell, OneM1RCell> cell_;
    std::optional<AnalogAmp> amp_;
    double mid_ = 0.0;
};

TransferCurve analog_transfer_curve_serial(const AnalogNeuronConfig& cfg,
                                           std::span<const double> sweep_volts,
                                           std::uint64_t samples_per_point, std::uint64_t seed);
TransferCurve analog_transfer_curve_parallel(const AnalogNeuronConfig& cfg,
                                             std::span<const double> sweep_volts,
                                             std::uint64_t samples_per_point, std::uint64_t seed);
TransferCurve analog_transfer_curve(const AnalogNeuronConfig& cfg,
                                    std::span<const double> sweep_volts,
                                    std::uint64_t samples_per_point, std::uint64_t seed);

// Width of the input interval over which the normalized mean output lies in
// (lo, hi), by linear interpolation between sweep points. Bipolar outputs are
// normalized to [0,1] first. Throws if the curve never crosses a threshold.
double probabilistic_range(const TransferCurve& curve, double lo = 0.05, double hi = 0.95);

// Analytic tunability limit: range / V_DD = TMR / (2 + TMR).
double probabilistic_range_theory(double tmr);

// TMR implied by the conductance model at polarization P: 2 P^2 / (1 - P^2).
double tmr_from_polarization(double p);

// Observed support of a stochastic signal; with an ideal comparator the
// extreme-threshold probabilistic range equals this width.
struct SupportRange {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

template <class Sampler>
SupportRange measure_support(Sampler&& sample, std::size_t n) {
    SupportRange r{sample(), 0.0};
    r.hi = r.lo;
    for (std::size_t i = 1; i < n; ++i) {
        const double v = sample();
        if (v < r.lo) r.lo = v;
        if (v > r.hi) r.hi = v;
    }
    return r;
}

}  // namespace pneuro
