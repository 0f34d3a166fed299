#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "pneuro/rng.hpp"
#include "pneuro/stats.hpp"

namespace pneuro {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
    constexpr Vec3& operator+=(Vec3 o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    friend constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
    friend constexpr Vec3 cross(Vec3 a, Vec3 b) {
        return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kMu0 = 4e-7 * std::numbers::pi;

// Free-layer macrospin parameters for a zero-barrier perpendicular-anisotropy
// junction. Fields are in A/m; gamma is the Landau–Lifshitz gyromagnetic
// ratio with mu0 absorbed (mu0 * 1.76e11 rad s^-1 T^-1 = 2.211e5 m A^-1 s^-1),
// which keeps the thermal-field expression below dimensionally consistent.
struct SllgParams {
    double gamma = 2.2110e5;    // m/(A s)
    double damping = 0.01;      // Gilbert alpha
    double ms = 1.1e6;          // A/m
    double diameter = 22e-9;    // m
    double thickness = 2e-9;    // m
    double temperature = 300.0; // K
    double dt = 1e-12;          // s
    Vec3 h_ext{};               // external effective field, A/m
    double energy_barrier = 0.0;  // uniaxial barrier in kB*T units; 0 in the regime of interest

    double volume() const {
        return std::numbers::pi * (diameter / 2) * (diameter / 2) * thickness;
    }

    // Per-step standard deviation of each thermal field component (A/m):
    // sigma = sqrt(2 alpha kB T / (gamma mu0 Ms V dt)).
    double thermal_sigma() const {
        if (temperature <= 0.0) return 0.0;
        return std::sqrt(2.0 * damping * kBoltzmann * temperature /
                         (gamma * kMu0 * ms * volume() * dt));
    }

    void validate() const;
};

struct SmtjState {
    Vec3 m{0.0, 0.0, 1.0};     // unit magnetization
    double g0 = 1e-4;          // mean conductance, S
    double polarization = 0.7; // P in (0,1)
};

// G = G0 (1 + P^2 m_z); parallel at m_z=+1, antiparallel at m_z=-1.
inline double conductance_of(const SmtjState& s) {
    return s.g0 * (1.0 + s.polarization * s.polarization * s.m.z);
}

// One Heun (predictor-corrector, Stratonovich-consistent) step of
//   dm/dt = -gamma' m x H - gamma' alpha m x (m x H),  gamma' = gamma/(1+alpha^2)
// with H = h_ext + anisotropy + thermal, followed by renormalization.
// A zero total field returns the state bit-identically (T = 0 fixed point).
SmtjState sllg_step(const SmtjState& state, const SllgParams& params, const Vec3& noise);

// Stateful integrator owning its seeded Gaussian stream.
class SllgIntegrator {
  public:
    SllgIntegrator(SmtjState init, SllgParams params, std::uint64_t seed);

    const SmtjState& step();
    const SmtjState& state() const { return state_; }
    const SllgParams& params() const { return params_; }
    double conductance() const { return conductance_of(state_); }

  private:
    SmtjState state_;
    SllgParams params_;
    NormalStream noise_;
};

struct TraceRow {
    double t = 0.0;
    Vec3 m{};
    double g = 0.0;
};

std::vector<TraceRow> simulate_trace(const SllgParams& params, const SmtjState& init,
                                     std::size_t steps, std::uint64_t seed);

struct StationarityReport {
    double ks_uniform_mz = 0.0;
    std::size_t autocorr_lag = 0;
    std::size_t effective_n = 0;
};

// KS of the burned-in, autocorrelation-thinned m_z series against the uniform
// law on [-1, 1]. Requires at least 1000 usable samples.
StationarityReport stationarity_report(std::span<const double> mz, std::size_t burn_in);
StationarityReport stationarity_report(std::span<const float> mz, std::size_t burn_in);

// Independent traces with derived seeds; m_z recorded each step. The parallel
// version distributes traces across OpenMP threads and returns bit-identical
// output to the serial reference.
std::vector<std::vector<float>> sample_mz_traces_serial(const SllgParams& params,
                                                        const SmtjState& init,
                                                        std::size_t n_traces,
                                                        std::size_t steps_per_trace,
                                                        std::uint64_t seed);
std::vector<std::vector<float>> sample_mz_traces_parallel(const SllgParams& params,
                                                          const SmtjState& init,
                                                          std::size_t n_traces,
                                                          std::size_t steps_per_trace,
                                                          std::uint64_t seed);

}  // namespace pneuro
