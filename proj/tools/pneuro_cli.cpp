// Command-line front end: every experiment is fully specified by
// (config file keys) overlaid with flags, and re-runs are byte-identical.
#include <cstdio>
#include <deque>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pneuro/harness.hpp"
#include "pneuro/io.hpp"

namespace {

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* desc;
};

struct SubcommandBinding {
    CLI::App* app = nullptr;
    std::string experiment;
    std::string config_path;
    std::deque<std::string> storage;
    std::vector<std::pair<CLI::Option*, std::string>> bound;  // option -> config key

    void bind_common(CLI::App* sub) {
        app = sub;
        sub->add_option("--config", config_path, "config file (flags override file values)");
        add(sub, {"--seed", "seed", "64-bit master seed"});
        add(sub, {"--out", "out", "output file path"});
    }

    void add(CLI::App* sub, FlagSpec f) {
        storage.emplace_back();
        CLI::Option* opt = sub->add_option(f.flag, storage.back(), f.desc);
        bound.emplace_back(opt, f.key);
    }

    std::vector<std::pair<std::string, std::string>> overrides() const {
        std::vector<std::pair<std::string, std::string>> out;
        out.emplace_back("experiment", experiment);
        std::size_t i = 0;
        for (const auto& [opt, key] : bound) {
            if (opt->count() > 0) out.emplace_back(key, storage[i]);
            ++i;
        }
        return out;
    }
};

int run_binding(const SubcommandBinding& b) {
    pneuro::harness::ConfigFile file;
    if (!b.config_path.empty()) file = pneuro::harness::parse_config_file(b.config_path);
    const auto cfg = pneuro::harness::resolve_config(file, b.overrides());
    pneuro::harness::run(cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pneuro: deterministic simulator for modular p-neurons"};
    app.require_subcommand(0, 1);

    std::string golden_path;
    app.add_option("--golden", golden_path,
                   "verify the 32-bit LFSR against a golden-vector file and exit");

    std::deque<SubcommandBinding> bindings;

    auto& transfer = bindings.emplace_back();
    transfer.experiment = "transfer";
    transfer.bind_common(app.add_subcommand("transfer", "time-averaged p-neuron transfer curve"));
    for (FlagSpec f : std::initializer_list<FlagSpec>{
             {"--kind", "transfer.kind", "activation: tanh|sigmoid|relu|linear"},
             {"--impl", "transfer.impl", "digital|analog"},
             {"--points", "transfer.points", "sweep points"},
             {"--samples", "transfer.samples", "samples per point"},
             {"--beta", "transfer.beta", "stochastic-signal scaling factor"},
             {"--vdd", "transfer.vdd", "supply voltage (analog)"},
             {"--amp", "transfer.amp", "analog output stage: ideal|slew"},
             {"--gain", "transfer.gain", "amplifier gain (analog slew)"},
             {"--slew-rate", "transfer.slew_rate", "amplifier slew rate V/s (analog slew)"},
             {"--damping", "transfer.damping", "device damping (analog)"},
             {"--dt", "transfer.dt", "device time step s (analog)"},
             {"--temperature", "transfer.temperature", "device temperature K (analog)"},
             {"--polarization", "transfer.polarization", "junction polarization (analog)"},
             {"--warmup", "transfer.warmup", "device warmup steps per sweep point (analog)"}})
        transfer.add(transfer.app, f);

    auto& sllg = bindings.emplace_back();
    sllg.experiment = "sllg";
    sllg.bind_common(app.add_subcommand("sllg", "magnetization/conductance trace"));
    for (FlagSpec f : std::initializer_list<FlagSpec>{
             {"--steps", "sllg.steps", "integration steps"},
             {"--thin", "sllg.thin", "record every k-th step"},
             {"--dt", "sllg.dt", "time step s"},
             {"--damping", "sllg.damping", "Gilbert damping"},
             {"--temperature", "sllg.temperature", "temperature K"},
             {"--diameter", "sllg.diameter", "free-layer diameter m"},
             {"--thickness", "sllg.thickness", "free-layer thickness m"},
             {"--ms", "sllg.ms", "saturation magnetization A/m"},
             {"--burn-in", "sllg.burn_in", "samples discarded before the stationarity report"},
             {"--report", "sllg.report", "print the stationarity report (true|false)"}})
        sllg.add(sllg.app, f);

    auto& dist = bindings.emplace_back();
    dist.experiment = "dist";
    dist.bind_common(app.add_subcommand("dist", "stochastic-unit sample distribution"));
    for (FlagSpec f : std::initializer_list<FlagSpec>{
             {"--source", "dist.source", "2m|1m1r|irwin_hall|lfsr"},
             {"--samples", "dist.samples", "sample count"},
             {"--vdd", "dist.vdd", "supply voltage (analog cells)"},
             {"--damping", "dist.damping", "device damping"},
             {"--dt", "dist.dt", "device time step s"},
             {"--temperature", "dist.temperature", "device temperature K"},
             {"--polarization", "dist.polarization", "junction polarization"},
             {"--warmup", "dist.warmup", "device warmup steps"},
             {"--r1", "dist.r1", "fixed resistance ohms (1m1r; 0 = 0.35/G0)"},
             {"--alpha-cell", "dist.alpha_cell", "supply extension factor (1m1r)"}})
        dist.add(dist.app, f);

    auto& network = bindings.emplace_back();
    network.experiment = "network";
    network.bind_common(app.add_subcommand("network", "Boltzmann-machine state histogram"));
    for (FlagSpec f : std::initializer_list<FlagSpec>{
             {"--preset", "network.preset", "network preset (p_and)"},
             {"--i0", "network.i0", "gain (inverse-temperature-like)"},
             {"--sweeps", "network.sweeps", "total sweeps"},
             {"--burn-in", "network.burn_in", "discarded sweeps"},
             {"--sampler", "network.sampler", "triangular|logistic"},
             {"--noise", "network.noise", "shared|independent"},
             {"--clamp", "network.clamp", "per-neuron clamp list, e.g. +1,+1,0"},
             {"--random-scan", "network.random_scan", "randomize update order (true|false)"}})
        network.add(network.app, f);

    auto& range = bindings.emplace_back();
    range.experiment = "range";
    range.bind_common(app.add_subcommand("range", "probabilistic range vs supply voltage"));
    for (FlagSpec f : std::initializer_list<FlagSpec>{
             {"--vdd-list", "range.vdd_list", "comma-separated supply voltages"},
             {"--samples", "range.samples", "samples per supply point"},
             {"--damping", "range.damping", "device damping"},
             {"--dt", "range.dt", "device time step s"},
             {"--temperature", "range.temperature", "device temperature K"},
             {"--polarization", "range.polarization", "junction polarization"},
             {"--warmup", "range.warmup", "device warmup steps"}})
        range.add(range.app, f);

    std::string manifest_path;
    CLI::App* rerun = app.add_subcommand("rerun", "regenerate outputs from a run manifest");
    rerun->add_option("manifest", manifest_path, "path to a .manifest.json file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are config errors
    }

    try {
        if (!golden_path.empty()) {
            const auto g = pneuro::read_golden_file(golden_path);
            const std::size_t matched = pneuro::golden_match_count(g);
            std::printf("golden: %zu/%zu words match\n", matched, g.words.size());
            if (matched != g.words.size()) return 3;
            return 0;
        }
        if (rerun->parsed()) {
            pneuro::harness::run_from_manifest(manifest_path);
            return 0;
        }
        for (const auto& b : bindings)
            if (b.app->parsed()) return run_binding(b);
        std::fprintf(stderr, "no subcommand given; try --help\n");
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 3;
    }
}
