#include "pneuro/pneuron.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pneuro/broker.hpp"
#include "pneuro/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pneuro {

const char* to_string(ActivationKind k) {
    switch (k) {
        case ActivationKind::p_tanh: return "p_tanh";
        case ActivationKind::p_sigmoid: return "p_sigmoid";
        case ActivationKind::p_relu: return "p_relu";
        case ActivationKind::p_linear: return "p_linear";
    }
    return "?";
}

ActivationKind activation_from_string(const std::string& s) {
    std::string t = s;
    if (t.rfind("p_", 0) == 0) t = t.substr(2);
    if (t == "tanh") return ActivationKind::p_tanh;
    if (t == "sigmoid") return ActivationKind::p_sigmoid;
    if (t == "relu") return ActivationKind::p_relu;
    if (t == "linear") return ActivationKind::p_linear;
    throw std::invalid_argument("unknown activation kind '" + s + "'");
}

DigitalEncoding encoding_for(ActivationKind k) {
    switch (k) {
        case ActivationKind::p_tanh: return {Signedness::unsigned_word, Polarity::bipolar};
        case ActivationKind::p_sigmoid: return {Signedness::unsigned_word, Polarity::unipolar};
        case ActivationKind::p_relu: return {Signedness::twos_complement, Polarity::unipolar};
        case ActivationKind::p_linear: return {Signedness::twos_complement, Polarity::bipolar};
    }
    return {};
}

namespace {
constexpr std::int64_t kWordMax = 0xFFFFFFFFll;          // 2^32 - 1
constexpr std::int64_t kSignedLo = -0x80000000ll;        // -2^31
constexpr std::int64_t kSignedHi = 0x7FFFFFFFll;         // 2^31 - 1
}  // namespace

WordDomain input_domain_for(ActivationKind k) {
    if (encoding_for(k).signedness == Signedness::unsigned_word) return {0, kWordMax};
    return {kSignedLo, kSignedHi};
}

WordDomain draw_domain_for(ActivationKind k) {
    switch (k) {
        case ActivationKind::p_tanh:
        case ActivationKind::p_sigmoid: return {0, kWordMax};
        case ActivationKind::p_linear: return {kSignedLo, kSignedHi};
        case ActivationKind::p_relu: return {0, kSignedHi};
    }
    return {};
}

double draw_midpoint_for(ActivationKind k) {
    const WordDomain d = draw_domain_for(k);
    return (static_cast<double>(d.lo) + static_cast<double>(d.hi)) / 2.0;
}

double triangular_cdf_strict(std::int64_t input, int width) {
    if (width < 2 || width > 32) throw std::invalid_argument("triangular cdf: bad width");
    const std::int64_t n = std::int64_t{1} << width;
    if (input <= 0) return 0.0;
    if (input >= n) return 1.0;
    const __int128 den = static_cast<__int128>(n) * n;
    __int128 num;
    if (input <= n / 2) {
        num = static_cast<__int128>(input) * (2 * input + 1);
    } else {
        const std::int64_t k = n - 1 - input;
        num = den - static_cast<__int128>(2 * k + 1) * (k + 1);
    }
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double uniform_signed_cdf_strict(std::int64_t input, int width) {
    if (width < 2 || width > 32) throw std::invalid_argument("uniform cdf: bad width");
    const std::int64_t half = std::int64_t{1} << (width - 1);
    if (input <= -half) return 0.0;
    if (input >= half) return 1.0;
    return static_cast<double>(input + half) / static_cast<double>(2 * half);
}

double uniform_nonneg_cdf_strict(std::int64_t input, int width) {
    if (width < 2 || width > 32) throw std::invalid_argument("uniform cdf: bad width");
    const std::int64_t half = std::int64_t{1} << (width - 1);
    if (input <= 0) return 0.0;
    if (input >= half) return 1.0;
    return static_cast<double>(input) / static_cast<double>(half);
}

RngCdf RngCdf::triangular_words(int width) { return RngCdf(Kind::triangular, width); }
RngCdf RngCdf::uniform_signed_words(int width) { return RngCdf(Kind::uniform_signed, width); }
RngCdf RngCdf::uniform_nonneg_words(int width) { return RngCdf(Kind::uniform_nonneg, width); }

RngCdf RngCdf::empirical(std::vector<double> draws) {
    if (draws.empty()) throw std::invalid_argument("empirical cdf: no draws");
    RngCdf c(Kind::empirical, 32);
    std::sort(draws.begin(), draws.end());
    c.samples_ = std::move(draws);
    return c;
}

RngCdf RngCdf::for_activation(ActivationKind k) {
    switch (k) {
        case ActivationKind::p_tanh:
        case ActivationKind::p_sigmoid: return triangular_words();
        case ActivationKind::p_linear: return uniform_signed_words();
        case ActivationKind::p_relu: return uniform_nonneg_words();
    }
    throw std::invalid_argument("unknown activation kind");
}

double RngCdf::prob_below(double x) const {
    switch (kind_) {
        case Kind::triangular:
            return triangular_cdf_strict(static_cast<std::int64_t>(std::ceil(x)), width_);
        case Kind::uniform_signed:
            return uniform_signed_cdf_strict(static_cast<std::int64_t>(std::ceil(x)), width_);
        case Kind::uniform_nonneg:
            return uniform_nonneg_cdf_strict(static_cast<std::int64_t>(std::ceil(x)), width_);
        case Kind::empirical: {
            const auto it = std::lower_bound(samples_.begin(), samples_.end(), x);
            return static_cast<double>(it - samples_.begin()) /
                   static_cast<double>(samples_.size());
        }
    }
    return 0.0;
}

double analytic_transfer(ActivationKind kind, const RngCdf& cdf, std::int64_t input) {
    if (kind == ActivationKind::p_relu && input < 0) return 0.0;
    const double f = cdf.prob_below(static_cast<double>(input));
    return encoding_for(kind).polarity == Polarity::bipolar ? 2.0 * f - 1.0 : f;
}

// --- digital neuron ---------------------------------------------------------

namespace {

std::variant<IrwinHallUnit, Lfsr> make_source(ActivationKind kind, std::uint64_t seed) {
    if (kind == ActivationKind::p_tanh || kind == ActivationKind::p_sigmoid) {
        const Word32 sa = derive_seed32(seed, "lfsr-a");
        Word32 sb = derive_seed32(seed, "lfsr-b");
        std::uint64_t bump = 1;
        while (sb == sa) sb = derive_seed32(seed, "lfsr-b", bump++);
        return IrwinHallUnit(sa, sb);
    }
    return Lfsr(derive_seed32(seed, "lfsr"));
}

}  // namespace

DigitalPNeuron::DigitalPNeuron(ActivationKind kind, std::uint64_t seed, double beta)
    : kind_(kind), beta_(beta), source_(make_source(kind, seed)) {
    if (beta <= 0.0) throw std::invalid_argument("p-neuron: beta must be positive");
}

void DigitalPNeuron::set_beta(double beta) {
    if (beta <= 0.0) throw std::invalid_argument("p-neuron: beta must be positive");
    beta_ = beta;
}

std::int64_t DigitalPNeuron::word_to_draw(ActivationKind kind, Word32 w) {
    switch (kind) {
        case ActivationKind::p_tanh:
        case ActivationKind::p_sigmoid: return static_cast<std::int64_t>(w);
        case ActivationKind::p_linear: return static_cast<std::int64_t>(static_cast<std::int32_t>(w));
        case ActivationKind::p_relu: return static_cast<std::int64_t>(w & 0x7FFFFFFFu);
    }
    return 0;
}

std::int64_t DigitalPNeuron::raw_draw() {
    if (auto* ih = std::get_if<IrwinHallUnit>(&source_))
        return word_to_draw(kind_, ih->draw());
    return word_to_draw(kind_, std::get<Lfsr>(source_).next_word());
}

std::int64_t DigitalPNeuron::scale(std::int64_t draw) const {
    if (beta_ == 1.0) return draw;
    const double mu = draw_midpoint_for(kind_);
    const double scaled = mu + beta_ * (static_cast<double>(draw) - mu);
    const WordDomain d = draw_domain_for(kind_);
    const double clamped = std::clamp(scaled, static_cast<double>(d.lo), static_cast<double>(d.hi));
    return static_cast<std::int64_t>(std::llround(clamped));
}

std::int64_t DigitalPNeuron::scaled_draw() { return scale(raw_draw()); }

int DigitalPNeuron::activate(std::int64_t input, std::int64_t draw) const {
    if (kind_ == ActivationKind::p_relu) return input < 0 ? 0 : (input > draw ? 1 : 0);
    const bool high = input > draw;
    if (encoding_for(kind_).polarity == Polarity::bipolar) return high ? 1 : -1;
    return high ? 1 : 0;
}

int DigitalPNeuron::step(std::int64_t input) {
    const WordDomain d = input_domain_for(kind_);
    if (input < d.lo || input > d.hi)
        throw std::invalid_argument("p-neuron: input outside the declared word domain");
    return activate(input, scaled_draw());
}

int DigitalPNeuron::step_with_word(std::int64_t input, Word32 adapted_word) {
    const WordDomain d = input_domain_for(kind_);
    if (input < d.lo || input > d.hi)
        throw std::invalid_argument("p-neuron: input outside the declared word domain");
    return activate(input, scale(word_to_draw(kind_, adapted_word)));
}

// --- transfer curves --------------------------------------------------------

std::vector<std::int64_t> linspace_words(WordDomain d, int n_points) {
    if (n_points < 1) throw std::invalid_argument("linspace_words: need at least one point");
    std::vector<std::int64_t> xs;
    xs.reserve(static_cast<std::size_t>(n_points));
    if (n_points == 1) {
        xs.push_back(d.lo);
        return xs;
    }
    const double span = static_cast<double>(d.hi) - static_cast<double>(d.lo);
    for (int i = 0; i < n_points; ++i)
        xs.push_back(d.lo + static_cast<std::int64_t>(
                                std::llround(span * i / (n_points - 1))));
    return xs;
}

std::vector<double> linspace(double lo, double hi, int n_points) {
    if (n_points < 1) throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> xs(static_cast<std::size_t>(n_points));
    if (n_points == 1) {
        xs[0] = lo;
        return xs;
    }
    for (int i = 0; i < n_points; ++i)
        xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_points - 1);
    return xs;
}

namespace {

CurvePoint measure_digital_point(ActivationKind kind, std::int64_t input,
                                 std::uint64_t samples, std::uint64_t point_seed, double beta) {
    DigitalPNeuron neuron(kind, point_seed, beta);
    std::int64_t acc = 0;
    for (std::uint64_t s = 0; s < samples; ++s) acc += neuron.step(input);
    return {static_cast<double>(input),
            static_cast<double>(acc) / static_cast<double>(samples), samples};
}

void check_curve_args(std::size_t sweep_size, std::uint64_t samples) {
    if (sweep_size == 0) throw std::invalid_argument("transfer_curve: empty sweep");
    if (samples < 1) throw std::invalid_argument("transfer_curve: samples_per_point must be >= 1");
}

}  // namespace

TransferCurve transfer_curve_serial(ActivationKind kind, std::span<const std::int64_t> sweep,
                                    std::uint64_t samples_per_point, std::uint64_t seed,
                                    double beta) {
    check_curve_args(sweep.size(), samples_per_point);
    TransferCurve curve;
    curve.meta = {seed, kind, beta, "digital", samples_per_point};
    curve.points.resize(sweep.size());
    for (std::size_t i = 0; i < sweep.size(); ++i)
        curve.points[i] = measure_digital_point(kind, sweep[i], samples_per_point,
                                                derive_seed(seed, "curve-point", i), beta);
    return curve;
}

TransferCurve transfer_curve_parallel(ActivationKind kind, std::span<const std::int64_t> sweep,
                                      std::uint64_t samples_per_point, std::uint64_t seed,
                                      double beta) {
    check_curve_args(sweep.size(), samples_per_point);
    TransferCurve curve;
    curve.meta = {seed, kind, beta, "digital", samples_per_point};
    curve.points.resize(sweep.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sweep.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        curve.points[idx] = measure_digital_point(kind, sweep[idx], samples_per_point,
                                                  derive_seed(seed, "curve-point", idx), beta);
    }
    return curve;
}

TransferCurve transfer_curve(ActivationKind kind, std::span<const std::int64_t> sweep,
                             std::uint64_t samples_per_point, std::uint64_t seed, double beta) {
#ifdef _OPENMP
    return transfer_curve_parallel(kind, sweep, samples_per_point, seed, beta);
#else
    return transfer_curve_serial(kind, sweep, samples_per_point, seed, beta);
#endif
}

SharedCurvePair shared_unit_curves(std::span<const std::int64_t> sweep_sigmoid,
                                   std::span<const std::int64_t> sweep_linear,
                                   std::uint64_t samples_per_point, std::uint64_t seed) {
    if (sweep_sigmoid.size() != sweep_linear.size())
        throw std::invalid_argument("shared_unit_curves: sweeps must pair up point-for-point");
    check_curve_args(sweep_sigmoid.size(), samples_per_point);

    SharedCurvePair pair;
    pair.sigmoid_curve.meta = {seed, ActivationKind::p_sigmoid, 1.0, "digital-shared",
                               samples_per_point};
    pair.linear_curve.meta = {seed, ActivationKind::p_linear, 1.0, "digital-shared",
                              samples_per_point};
    pair.sigmoid_curve.points.resize(sweep_sigmoid.size());
    pair.linear_curve.points.resize(sweep_linear.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sweep_sigmoid.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        SharedBroker broker(derive_seed(seed, "shared-point", idx));
        broker.subscribe("sigmoid", DrawAdapter::irwin_hall_sum);
        broker.subscribe("linear", DrawAdapter::single_word);
        DigitalPNeuron sig(ActivationKind::p_sigmoid, derive_seed(seed, "shared-sig", idx));
        DigitalPNeuron lin(ActivationKind::p_linear, derive_seed(seed, "shared-lin", idx));
        std::int64_t acc_sig = 0, acc_lin = 0;
        for (std::uint64_t s = 0; s < samples_per_point; ++s) {
            const auto draws = broker.tick();
            acc_sig += sig.step_with_word(sweep_sigmoid[idx], draws[0].second);
            acc_lin += lin.step_with_word(sweep_linear[idx], draws[1].second);
        }
        const double inv = 1.0 / static_cast<double>(samples_per_point);
        pair.sigmoid_curve.points[idx] = {static_cast<double>(sweep_sigmoid[idx]),
                                          static_cast<double>(acc_sig) * inv, samples_per_point};
        pair.linear_curve.points[idx] = {static_cast<double>(sweep_linear[idx]),
                                         static_cast<double>(acc_lin) * inv, samples_per_point};
    }
    return pair;
}

// --- analog neuron ----------------------------------------------------------

namespace {

Vec3 uniform_unit_vector(Xoshiro256pp& rng) {
    // z uniform on [-1,1], azimuth uniform: uniform measure on the sphere
    const double z = 2.0 * rng.u01() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.u01();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

AnalogPNeuron::AnalogPNeuron(const AnalogNeuronConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      cell_(
          [&]() -> std::variant<TwoMCell, OneM1RCell> {
              Xoshiro256pp init_rng(derive_seed(seed, "analog-init"));
              SmtjState top = cfg.device_state;
              SmtjState bottom = cfg.device_state;
              if (cfg.stationary_init) {
                  top.m = uniform_unit_vector(init_rng);
                  bottom.m = uniform_unit_vector(init_rng);
              }
              if (cfg.kind == ActivationKind::p_relu)
                  return OneM1RCell(top, cfg.device, cfg.v_dd, derive_seed(seed, "analog-cell"),
                                    cfg.r1, cfg.alpha_cell);
              return TwoMCell(top, bottom, cfg.device, cfg.v_dd,
                              derive_seed(seed, "analog-cell"));
          }()),
      amp_() {
    if (cfg.kind == ActivationKind::p_linear)
        throw std::invalid_argument("analog neuron: the linear kind is digital-only");
    if (!cfg.ideal_comparator) {
        if (cfg.kind == ActivationKind::p_relu)
            throw std::invalid_argument(
                "analog neuron: amplifier surrogate is not modeled for the rectified path");
        amp_.emplace(cfg.amp, (cfg.amp.rail_low + cfg.amp.rail_high) / 2.0);
    }
    mid_ = std::visit([](auto& c) { return c.midpoint(); }, cell_);
    for (std::size_t i = 0; i < cfg.warmup_steps; ++i)
        std::visit([](auto& c) { (void)c.sample(); }, cell_);
    if (cfg.beta <= 0.0) throw std::invalid_argument("analog neuron: beta must be positive");
}

double AnalogPNeuron::sample_scaled() {
    const double v = std::visit([](auto& c) { return c.sample(); }, cell_);
    if (cfg_.beta == 1.0) return v;
    return mid_ + cfg_.beta * (v - mid_);
}

double AnalogPNeuron::step(double v_in) {
    const double v_st = sample_scaled();
    const bool bipolar = encoding_for(cfg_.kind).polarity == Polarity::bipolar;
    if (cfg_.kind == ActivationKind::p_relu && v_in < 0.0) return 0.0;
    if (!amp_) {
        const bool high = v_in > v_st;
        return bipolar ? (high ? 1.0 : -1.0) : (high ? 1.0 : 0.0);
    }
    const double v_out = amp_->step(v_in - v_st);
    const auto& p = amp_->params();
    const double y01 = (v_out - p.rail_low) / (p.rail_high - p.rail_low);
    return bipolar ? 2.0 * y01 - 1.0 : y01;
}

namespace {

CurvePoint measure_analog_point(const AnalogNeuronConfig& cfg, double v_in,
                                std::uint64_t samples, std::uint64_t point_seed) {
    AnalogPNeuron neuron(cfg, point_seed);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) acc += neuron.step(v_in);
    return {v_in, acc / static_cast<double>(samples), samples};
}

CurveMeta analog_meta(const AnalogNeuronConfig& cfg, std::uint64_t seed, std::uint64_t spp) {
    return {seed, cfg.kind, cfg.beta, cfg.ideal_comparator ? "analog-ideal" : "analog-amp", spp};
}

}  // namespace

TransferCurve analog_transfer_curve_serial(const AnalogNeuronConfig& cfg,
                                           std::span<const double> sweep_volts,
                                           std::uint64_t samples_per_point, std::uint64_t seed) {
    check_curve_args(sweep_volts.size(), samples_per_point);
    TransferCurve curve;
    curve.meta = analog_meta(cfg, seed, samples_per_point);
    curve.points.resize(sweep_volts.size());
    for (std::size_t i = 0; i < sweep_volts.size(); ++i)
        curve.points[i] = measure_analog_point(cfg, sweep_volts[i], samples_per_point,
                                               derive_seed(seed, "analog-point", i));
    return curve;
}

TransferCurve analog_transfer_curve_parallel(const AnalogNeuronConfig& cfg,
                                             std::span<const double> sweep_volts,
                                             std::uint64_t samples_per_point,
                                             std::uint64_t seed) {
    check_curve_args(sweep_volts.size(), samples_per_point);
    TransferCurve curve;
    curve.meta = analog_meta(cfg, seed, samples_per_point);
    curve.points.resize(sweep_volts.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sweep_volts.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        curve.points[idx] = measure_analog_point(cfg, sweep_volts[idx], samples_per_point,
                                                 derive_seed(seed, "analog-point", idx));
    }
    return curve;
}

TransferCurve analog_transfer_curve(const AnalogNeuronConfig& cfg,
                                    std::span<const double> sweep_volts,
                                    std::uint64_t samples_per_point, std::uint64_t seed) {
#ifdef _OPENMP
    return analog_transfer_curve_parallel(cfg, sweep_volts, samples_per_point, seed);
#else
    return analog_transfer_curve_serial(cfg, sweep_volts, samples_per_point, seed);
#endif
}

// --- probabilistic range ----------------------------------------------------

namespace {

std::vector<double> normalized_outputs(const TransferCurve& curve) {
    const bool bipolar = encoding_for(curve.meta.kind).polarity == Polarity::bipolar;
    std::vector<double> y;
    y.reserve(curve.points.size());
    for (const auto& p : curve.points) y.push_back(bipolar ? (p.mean + 1.0) / 2.0 : p.mean);
    return y;
}

// Interpolated input position of a threshold crossing. The lower edge is
// where the curve first exceeds `level`, the upper edge where it first
// reaches it, so the extreme thresholds (0, 1) bound the strict interior.
double crossing(const std::vector<double>& y, const TransferCurve& curve, double level,
                bool lower_edge) {
    if (lower_edge ? y.front() > level : y.front() >= level)
        return curve.points.front().input;
    for (std::size_t k = 0; k + 1 < y.size(); ++k) {
        const bool hit = lower_edge ? (y[k] <= level && y[k + 1] > level)
                                    : (y[k] < level && y[k + 1] >= level);
        if (hit) {
            const double x0 = curve.points[k].input, x1 = curve.points[k + 1].input;
            return x0 + (level - y[k]) * (x1 - x0) / (y[k + 1] - y[k]);
        }
    }
    throw std::runtime_error("probabilistic_range: curve never crosses level " +
                             std::to_string(level));
}

}  // namespace

double probabilistic_range(const TransferCurve& curve, double lo, double hi) {
    if (curve.points.size() < 2)
        throw std::invalid_argument("probabilistic_range: need at least 2 points");
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
        throw std::invalid_argument("probabilistic_range: thresholds must satisfy 0 <= lo < hi <= 1");
    const std::vector<double> y = normalized_outputs(curve);
    const double tol =
        curve.meta.samples_per_point > 0
            ? 3.0 / std::sqrt(static_cast<double>(curve.meta.samples_per_point))
            : 1e-12;
    for (std::size_t k = 0; k + 1 < y.size(); ++k)
        if (y[k + 1] < y[k] - tol)
            throw std::invalid_argument("probabilistic_range: curve is not monotone within tolerance");
    const double x_lo = crossing(y, curve, lo, true);
    const double x_hi = crossing(y, curve, hi, false);
    return std::max(0.0, x_hi - x_lo);
}

double probabilistic_range_theory(double tmr) {
    if (tmr < 0.0) throw std::invalid_argument("probabilistic_range_theory: negative TMR");
    return tmr / (2.0 + tmr);
}

double tmr_from_polarization(double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("tmr: polarization must lie in (0,1)");
    return 2.0 * p * p / (1.0 - p * p);
}

}  // namespace pneuro
