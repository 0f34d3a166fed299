// Serial-reference vs OpenMP-kernel benchmark. Besides timing, each pair is
// checked for bit-identical results, since the parallel kernels must be
// indistinguishable from the reference.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "pneuro/pneuron.hpp"
#include "pneuro/sllg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <class F>
double time_s(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_curve(const pneuro::TransferCurve& a, const pneuro::TransferCurve& b) {
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if (std::memcmp(&a.points[i], &b.points[i], sizeof a.points[i]) != 0) return false;
    return true;
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %9.3f s %9.3f s %7.2fx   %s\n", name, serial, parallel,
                serial / parallel, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernels run serially\n");
#endif
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        using namespace pneuro;
        const auto sweep = linspace_words(input_domain_for(ActivationKind::p_tanh), 65);
        TransferCurve cs, cp;
        const double ts = time_s([&] {
            cs = transfer_curve_serial(ActivationKind::p_tanh, sweep, 200000, 42);
        });
        const double tp = time_s([&] {
            cp = transfer_curve_parallel(ActivationKind::p_tanh, sweep, 200000, 42);
        });
        row("digital transfer curve", ts, tp, same_curve(cs, cp));
    }

    {
        using namespace pneuro;
        SllgParams p;
        p.damping = 0.1;
        p.dt = 2.5e-10;
        std::vector<std::vector<float>> a, b;
        const double ts =
            time_s([&] { a = sample_mz_traces_serial(p, SmtjState{}, 8, 2000000, 7); });
        const double tp =
            time_s([&] { b = sample_mz_traces_parallel(p, SmtjState{}, 8, 2000000, 7); });
        row("sLLG m_z traces (8x2M)", ts, tp, a == b);
    }

    {
        using namespace pneuro;
        AnalogNeuronConfig cfg;
        cfg.kind = ActivationKind::p_tanh;
        cfg.device.damping = 0.1;
        cfg.device.dt = 2.5e-10;
        const auto sweep = linspace(0.0, 0.8, 33);
        TransferCurve cs, cp;
        const double ts =
            time_s([&] { cs = analog_transfer_curve_serial(cfg, sweep, 20000, 11); });
        const double tp =
            time_s([&] { cp = analog_transfer_curve_parallel(cfg, sweep, 20000, 11); });
        row("analog transfer curve", ts, tp, same_curve(cs, cp));
    }

    return 0;
}
