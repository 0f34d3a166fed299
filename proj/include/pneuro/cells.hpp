#pragma once

#include <cstdint>
#include <stdexcept>

#include "pneuro/common.hpp"
#include "pneuro/sllg.hpp"

namespace pneuro {

// Resistive-divider node voltages. Orientation is fixed (top device to the
// supply) so results are reproducible; the mirrored choice is equivalent by
// symmetry.
inline double divider_2m(double v_dd, double g_top, double g_bottom) {
    if (g_top <= 0.0 || g_bottom <= 0.0)
        throw std::domain_error("2m divider: nonpositive conductance");
    return v_dd * g_top / (g_top + g_bottom);
}

// sMTJ tied to the supply, fixed resistor to ground: the node voltage rises
// monotonically with the junction conductance.
inline double divider_1m1r(double v_ext, double g_mtj, double r1) {
    if (r1 <= 0.0) throw std::invalid_argument("1m1r divider: nonpositive R1");
    if (g_mtj <= 0.0) throw std::domain_error("1m1r divider: nonpositive conductance");
    return v_ext * g_mtj / (g_mtj + 1.0 / r1);
}

// Two series junctions under V_DD; one voltage sample per tick with the
// conductances taken quasi-statically from the two magnetization traces.
class TwoMCell {
  public:
    TwoMCell(SmtjState top, SmtjState bottom, SllgParams device, double v_dd, std::uint64_t seed)
        : top_(top, device, derive_seed(seed, "2m-top")),
          bottom_(bottom, device, derive_seed(seed, "2m-bottom")),
          v_dd_(v_dd) {}

    double sample() {
        top_.step();
        bottom_.step();
        return divider_2m(v_dd_, top_.conductance(), bottom_.conductance());
    }

    double v_dd() const { return v_dd_; }
    void set_v_dd(double v) { v_dd_ = v; }

    // Divider extremes: one junction fully parallel, the other antiparallel.
    double v_min() const {
        const double gp = g_parallel(), gap = g_antiparallel();
        return v_dd_ * gap / (gap + gp);
    }
    double v_max() const {
        const double gp = g_parallel(), gap = g_antiparallel();
        return v_dd_ * gp / (gp + gap);
    }
    double midpoint() const { return v_dd_ / 2.0; }

  private:
    double g_parallel() const {
        const auto& s = top_.state();
        return s.g0 * (1.0 + s.polarization * s.polarization);
    }
    double g_antiparallel() const {
        const auto& s = top_.state();
        return s.g0 * (1.0 - s.polarization * s.polarization);
    }

    SllgIntegrator top_;
    SllgIntegrator bottom_;
    double v_dd_;
};

// One junction plus one fixed resistor. R1 defaults to 0.35/G0 and the unit
// runs from an extended supply v_ext = V_DD * (1 + alpha_cell); both knobs
// flatten the node-voltage distribution toward uniform.
class OneM1RCell {
  public:
    OneM1RCell(SmtjState smtj, SllgParams device, double v_dd, std::uint64_t seed,
               double r1 = 0.0, double alpha_cell = 0.155)
        : dev_(smtj, device, derive_seed(seed, "1m1r")),
          r1_(r1 > 0.0 ? r1 : 0.35 / smtj.g0),
          alpha_cell_(alpha_cell),
          v_dd_(v_dd) {
        if (r1_ <= 0.0) throw std::invalid_argument("1m1r cell: nonpositive R1");
    }

    double sample() {
        dev_.step();
        return divider_1m1r(v_ext(), dev_.conductance(), r1_);
    }

    double v_ext() const { return v_dd_ * (1.0 + alpha_cell_); }
    double r1() const { return r1_; }
    double alpha_cell() const { return alpha_cell_; }

    double v_min() const {
        const auto& s = dev_.state();
        return divider_1m1r(v_ext(), s.g0 * (1.0 - s.polarization * s.polarization), r1_);
    }
    double v_max() const {
        const auto& s = dev_.state();
        return divider_1m1r(v_ext(), s.g0 * (1.0 + s.polarization * s.polarization), r1_);
    }
    double midpoint() const { return (v_min() + v_max()) / 2.0; }

  private:
    SllgIntegrator dev_;
    double r1_;
    double alpha_cell_;
    double v_dd_;
};

}  // namespace pneuro
