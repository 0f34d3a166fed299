#include "pneuro/sllg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pneuro/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pneuro {

void SllgParams::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("sllg: dt must be positive");
    if (damping <= 0.0) throw std::invalid_argument("sllg: damping must be positive");
    if (volume() <= 0.0) throw std::invalid_argument("sllg: free-layer volume must be positive");
    if (ms <= 0.0) throw std::invalid_argument("sllg: Ms must be positive");
    if (temperature < 0.0) throw std::invalid_argument("sllg: negative temperature");
    if (energy_barrier < 0.0) throw std::invalid_argument("sllg: negative energy barrier");
}

namespace {

// Uniaxial perpendicular anisotropy expressed through the barrier height:
// H_k = 2 Delta kB T / (mu0 Ms V), applied along z scaled by m_z.
Vec3 anisotropy_field(const SmtjState& s, const SllgParams& p) {
    if (p.energy_barrier == 0.0) return {};
    const double hk = 2.0 * p.energy_barrier * kBoltzmann * p.temperature /
                      (kMu0 * p.ms * p.volume());
    return {0.0, 0.0, hk * s.m.z};
}

Vec3 llg_rhs(const Vec3& m, const Vec3& h, double gamma_eff, double damping) {
    const Vec3 mxh = cross(m, h);
    const Vec3 mxmxh = cross(m, mxh);
    return -gamma_eff * mxh + (-gamma_eff * damping) * mxmxh;
}

}  // namespace

SmtjState sllg_step(const SmtjState& state, const SllgParams& params, const Vec3& noise) {
    const double norm = state.m.norm();
    if (std::abs(norm - 1.0) > 1e-6)
        throw std::domain_error("sllg: magnetization is not a unit vector");

    const double sigma = params.thermal_sigma();
    const Vec3 h = params.h_ext + anisotropy_field(state, params) +
                   Vec3{sigma * noise.x, sigma * noise.y, sigma * noise.z};
    if (h.x == 0.0 && h.y == 0.0 && h.z == 0.0) return state;  // zero torque, exact fixed point

    const double gamma_eff = params.gamma / (1.0 + params.damping * params.damping);
    const double dt = params.dt;

    // Heun with the same field realization in predictor and corrector
    // (Stratonovich-consistent for the multiplicative thermal torque).
    const Vec3 k1 = llg_rhs(state.m, h, gamma_eff, params.damping);
    const Vec3 predictor = state.m + dt * k1;
    const Vec3 k2 = llg_rhs(predictor, h, gamma_eff, params.damping);
    Vec3 m = state.m + (dt / 2.0) * (k1 + k2);

    const double n = m.norm();
    m = (1.0 / n) * m;

    SmtjState out = state;
    out.m = m;
    return out;
}

SllgIntegrator::SllgIntegrator(SmtjState init, SllgParams params, std::uint64_t seed)
    : state_(init), params_(params), noise_(seed) {
    params_.validate();
    if (std::abs(init.m.norm() - 1.0) > 1e-6)
        throw std::domain_error("sllg: initial magnetization is not a unit vector");
    if (init.polarization <= 0.0 || init.polarization >= 1.0)
        throw std::invalid_argument("sllg: polarization must lie in (0,1)");
}

const SmtjState& SllgIntegrator::step() {
    const Vec3 xi{noise_.next(), noise_.next(), noise_.next()};
    state_ = sllg_step(state_, params_, xi);
    return state_;
}

std::vector<TraceRow> simulate_trace(const SllgParams& params, const SmtjState& init,
                                     std::size_t steps, std::uint64_t seed) {
    if (steps < 1) throw std::invalid_argument("simulate_trace: steps must be >= 1");
    SllgIntegrator integ(init, params, seed);
    std::vector<TraceRow> rows;
    rows.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const SmtjState& s = integ.step();
        rows.push_back({static_cast<double>(i + 1) * params.dt, s.m, conductance_of(s)});
    }
    return rows;
}

namespace {

template <typename T>
StationarityReport report_impl(std::span<const T> mz, std::size_t burn_in) {
    if (mz.size() <= burn_in || mz.size() - burn_in < 1000)
        throw std::invalid_argument("stationarity_report: fewer than 1000 usable samples");
    std::vector<double> use(mz.begin() + static_cast<std::ptrdiff_t>(burn_in), mz.end());

    StationarityReport rep;
    rep.autocorr_lag = std::max<std::size_t>(1, autocorrelation_time(use));

    std::vector<double> thin;
    thin.reserve(use.size() / rep.autocorr_lag + 1);
    for (std::size_t i = 0; i < use.size(); i += rep.autocorr_lag) thin.push_back(use[i]);
    std::sort(thin.begin(), thin.end());
    rep.effective_n = thin.size();
    rep.ks_uniform_mz = ks_statistic_sorted(
        thin, [](double x) { return std::clamp((x + 1.0) / 2.0, 0.0, 1.0); });
    return rep;
}

}  // namespace

StationarityReport stationarity_report(std::span<const double> mz, std::size_t burn_in) {
    return report_impl(mz, burn_in);
}

StationarityReport stationarity_report(std::span<const float> mz, std::size_t burn_in) {
    return report_impl(mz, burn_in);
}

namespace {

std::vector<float> one_mz_trace(const SllgParams& params, const SmtjState& init,
                                std::size_t steps, std::uint64_t trace_seed) {
    SllgIntegrator integ(init, params, trace_seed);
    std::vector<float> mz(steps);
    for (std::size_t i = 0; i < steps; ++i) mz[i] = static_cast<float>(integ.step().m.z);
    return mz;
}

}  // namespace

std::vector<std::vector<float>> sample_mz_traces_serial(const SllgParams& params,
                                                        const SmtjState& init,
                                                        std::size_t n_traces,
                                                        std::size_t steps_per_trace,
                                                        std::uint64_t seed) {
    std::vector<std::vector<float>> traces(n_traces);
    for (std::size_t t = 0; t < n_traces; ++t)
        traces[t] = one_mz_trace(params, init, steps_per_trace, derive_seed(seed, "mz-trace", t));
    return traces;
}

std::vector<std::vector<float>> sample_mz_traces_parallel(const SllgParams& params,
                                                          const SmtjState& init,
                                                          std::size_t n_traces,
                                                          std::size_t steps_per_trace,
                                                          std::uint64_t seed) {
    std::vector<std::vector<float>> traces(n_traces);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n_traces); ++t)
        traces[static_cast<std::size_t>(t)] = one_mz_trace(
            params, init, steps_per_trace,
            derive_seed(seed, "mz-trace", static_cast<std::uint64_t>(t)));
    return traces;
}

}  // namespace pneuro
