#include "pneuro/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pneuro/cells.hpp"
#include "pneuro/fit.hpp"
#include "pneuro/io.hpp"
#include "pneuro/network.hpp"
#include "pneuro/pneuron.hpp"
#include "pneuro/sllg.hpp"
#include "pneuro/stats.hpp"

namespace pneuro::harness {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

ConfigFile parse_config_text(std::istream& in, const std::string& source_name) {
    ConfigFile cf;
    cf.source = source_name;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument(source_name + ":" + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw std::invalid_argument(source_name + ":" + std::to_string(lineno) +
                                            ": empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(source_name + ":" + std::to_string(lineno) +
                                        ": expected `key = value`");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(source_name + ":" + std::to_string(lineno) +
                                        ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cf.values.count(full))
            throw std::invalid_argument(source_name + ":" + std::to_string(lineno) +
                                        ": duplicate key '" + full + "'");
        cf.values[full] = value;
        cf.lines[full] = lineno;
    }
    return cf;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return parse_config_text(in, path);
}

std::string ExperimentConfig::get_str(const std::string& key, const std::string& fallback) const {
    const auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

std::string ExperimentConfig::require_str(const std::string& key) const {
    const auto it = options.find(key);
    if (it == options.end())
        throw std::invalid_argument("config: missing required key '" + key + "'");
    return it->second;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = options.find(key);
    if (it == options.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(it->second, &pos, 0);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' wants an unsigned integer, got '" +
                                    it->second + "'");
    }
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    const auto it = options.find(key);
    if (it == options.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' wants a number, got '" +
                                    it->second + "'");
    }
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = options.find(key);
    if (it == options.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: key '" + key + "' wants a boolean, got '" + v + "'");
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k = {
        {"transfer",
         {"experiment", "seed", "out", "transfer.kind", "transfer.impl", "transfer.points",
          "transfer.samples", "transfer.beta", "transfer.vdd", "transfer.amp", "transfer.gain",
          "transfer.slew_rate", "transfer.damping", "transfer.dt", "transfer.temperature",
          "transfer.polarization", "transfer.warmup"}},
        {"sllg",
         {"experiment", "seed", "out", "sllg.steps", "sllg.thin", "sllg.dt", "sllg.damping",
          "sllg.temperature", "sllg.diameter", "sllg.thickness", "sllg.ms", "sllg.report",
          "sllg.burn_in"}},
        {"dist",
         {"experiment", "seed", "out", "dist.source", "dist.samples", "dist.vdd", "dist.damping",
          "dist.dt", "dist.temperature", "dist.polarization", "dist.warmup", "dist.r1",
          "dist.alpha_cell"}},
        {"network",
         {"experiment", "seed", "out", "network.preset", "network.i0", "network.sweeps",
          "network.burn_in", "network.sampler", "network.noise", "network.clamp",
          "network.random_scan"}},
        {"range",
         {"experiment", "seed", "out", "range.vdd_list", "range.samples", "range.damping",
          "range.dt", "range.temperature", "range.polarization", "range.warmup"}},
    };
    return k;
}

std::string canonical_experiment(const std::string& name) {
    if (name == "transfer") return "transfer";
    if (name == "sllg" || name == "sllg_trace") return "sllg";
    if (name == "dist" || name == "distribution") return "dist";
    if (name == "network") return "network";
    if (name == "range" || name == "range_sweep") return "range";
    throw std::invalid_argument("config: unknown experiment '" + name + "'");
}

}  // namespace

ExperimentConfig resolve_config(const ConfigFile& file,
                                const std::vector<std::pair<std::string, std::string>>& overrides) {
    ExperimentConfig cfg;
    cfg.options = file.values;
    for (const auto& [k, v] : overrides) cfg.options[k] = v;  // flags win

    const auto exp_it = cfg.options.find("experiment");
    if (exp_it == cfg.options.end())
        throw std::invalid_argument("config: missing required key 'experiment'");
    cfg.experiment = canonical_experiment(exp_it->second);
    cfg.options["experiment"] = cfg.experiment;

    const auto& allowed = known_keys().at(cfg.experiment);
    for (const auto& [k, v] : cfg.options) {
        if (allowed.count(k)) continue;
        std::string where;
        const auto ln = file.lines.find(k);
        if (ln != file.lines.end())
            where = " (" + file.source + ":" + std::to_string(ln->second) + ")";
        throw std::invalid_argument("config: key '" + k + "' is not valid for experiment '" +
                                    cfg.experiment + "'" + where);
    }
    return cfg;
}

// --- experiment runners -----------------------------------------------------

namespace {

// R^2 of the least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double cov = n * sxy - sx * sy;
    const double vx = n * sxx - sx * sx;
    const double vy = n * syy - sy * sy;
    if (vx <= 0.0 || vy <= 0.0) return 1.0;
    return (cov * cov) / (vx * vy);
}

SllgParams device_from(const ExperimentConfig& cfg, const std::string& prefix,
                       double damping_default, double dt_default) {
    SllgParams p;
    p.damping = cfg.get_double(prefix + ".damping", damping_default);
    p.dt = cfg.get_double(prefix + ".dt", dt_default);
    p.temperature = cfg.get_double(prefix + ".temperature", 300.0);
    p.validate();
    return p;
}

SmtjState smtj_from(const ExperimentConfig& cfg, const std::string& prefix) {
    SmtjState s;
    s.polarization = cfg.get_double(prefix + ".polarization", 0.7);
    if (s.polarization <= 0.0 || s.polarization >= 1.0)
        throw std::invalid_argument("config: polarization must lie in (0,1)");
    return s;
}

void write_manifest(const ExperimentConfig& cfg,
                    const std::map<std::string, std::string>& resolved,
                    const std::vector<std::string>& outputs) {
    const std::string path = cfg.require_str("out") + ".manifest.json";
    atomic_write(path, manifest_json(cfg.experiment, resolved, outputs));
}

void run_transfer(const ExperimentConfig& cfg) {
    const std::string out = cfg.require_str("out");
    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const ActivationKind kind = activation_from_string(cfg.require_str("transfer.kind"));
    const std::string impl = cfg.get_str("transfer.impl", "digital");
    const auto points = static_cast<int>(cfg.get_u64("transfer.points", 65));
    const std::uint64_t samples = cfg.get_u64("transfer.samples", 100000);
    const double beta = cfg.get_double("transfer.beta", 1.0);
    if (points < 1) throw std::invalid_argument("config: transfer.points must be >= 1");

    std::map<std::string, std::string> resolved = {
        {"experiment", "transfer"},
        {"seed", std::to_string(seed)},
        {"out", out},
        {"transfer.kind", to_string(kind)},
        {"transfer.impl", impl},
        {"transfer.points", std::to_string(points)},
        {"transfer.samples", std::to_string(samples)},
        {"transfer.beta", format_g9(beta)},
    };

    TransferCurve curve;
    std::string note;
    if (impl == "digital") {
        const auto sweep = linspace_words(input_domain_for(kind), points);
        curve = transfer_curve(kind, sweep, samples, seed, beta);
        if (beta == 1.0) {
            const RngCdf cdf = RngCdf::for_activation(kind);
            double linf = 0.0;
            for (const auto& p : curve.points)
                linf = std::max(linf, std::abs(p.mean - analytic_transfer(
                                                            kind, cdf,
                                                            static_cast<std::int64_t>(p.input))));
            char buf[64];
            std::snprintf(buf, sizeof buf, "  Linf_vs_oracle=%.6f", linf);
            note = buf;
        }
    } else if (impl == "analog") {
        const double vdd = cfg.get_double("transfer.vdd", 0.8);
        const std::string amp = cfg.get_str("transfer.amp", "ideal");
        AnalogNeuronConfig an;
        an.kind = kind;
        an.v_dd = vdd;
        an.beta = beta;
        an.device = device_from(cfg, "transfer", 0.1, 2.5e-10);
        an.device_state = smtj_from(cfg, "transfer");
        an.warmup_steps = cfg.get_u64("transfer.warmup", 64);
        if (amp == "slew") {
            an.ideal_comparator = false;
            an.amp.gain = cfg.get_double("transfer.gain", 1000.0);
            an.amp.dt = an.device.dt;
            if (kind == ActivationKind::p_sigmoid) {
                an.amp.rail_low = 0.0;
                an.amp.rail_high = vdd;
            } else {
                an.amp.rail_low = -vdd / 2.0;
                an.amp.rail_high = vdd / 2.0;
            }
            const double span = an.amp.rail_high - an.amp.rail_low;
            an.amp.slew_rate = cfg.get_double("transfer.slew_rate", span / (10.0 * an.amp.dt));
            resolved["transfer.gain"] = format_g9(an.amp.gain);
            resolved["transfer.slew_rate"] = format_g9(an.amp.slew_rate);
        } else if (amp != "ideal") {
            throw std::invalid_argument("config: transfer.amp must be 'ideal' or 'slew'");
        }
        const double lo = kind == ActivationKind::p_relu ? -vdd / 2.0 : 0.0;
        const auto sweep = linspace(lo, vdd, points);
        curve = analog_transfer_curve(an, sweep, samples, seed);
        resolved["transfer.vdd"] = format_g9(vdd);
        resolved["transfer.amp"] = amp;
        resolved["transfer.damping"] = format_g9(an.device.damping);
        resolved["transfer.dt"] = format_g9(an.device.dt);
        resolved["transfer.temperature"] = format_g9(an.device.temperature);
        resolved["transfer.polarization"] = format_g9(an.device_state.polarization);
        resolved["transfer.warmup"] = std::to_string(an.warmup_steps);
    } else {
        throw std::invalid_argument("config: transfer.impl must be 'digital' or 'analog'");
    }

    atomic_write(out, curve_csv(curve));
    atomic_write(out + ".meta", curve_meta_text(curve));
    write_manifest(cfg, resolved, {out, out + ".meta"});
    std::printf("transfer %s %s: %d points x %llu samples -> %s%s\n", to_string(kind),
                impl.c_str(), points, static_cast<unsigned long long>(samples), out.c_str(),
                note.c_str());
}

void run_sllg(const ExperimentConfig& cfg) {
    const std::string out = cfg.require_str("out");
    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const std::uint64_t steps = cfg.get_u64("sllg.steps", 100000);
    const std::uint64_t thin = std::max<std::uint64_t>(1, cfg.get_u64("sllg.thin", 1));
    const bool report = cfg.get_bool("sllg.report", true);

    SllgParams p;
    p.dt = cfg.get_double("sllg.dt", 1e-12);
    p.damping = cfg.get_double("sllg.damping", 0.01);
    p.temperature = cfg.get_double("sllg.temperature", 300.0);
    p.diameter = cfg.get_double("sllg.diameter", 22e-9);
    p.thickness = cfg.get_double("sllg.thickness", 2e-9);
    p.ms = cfg.get_double("sllg.ms", 1.1e6);
    p.validate();

    const auto rows = simulate_trace(p, SmtjState{}, steps, seed);
    atomic_write(out, trace_csv(rows, thin));

    std::map<std::string, std::string> resolved = {
        {"experiment", "sllg"},       {"seed", std::to_string(seed)},
        {"out", out},                 {"sllg.steps", std::to_string(steps)},
        {"sllg.thin", std::to_string(thin)}, {"sllg.dt", format_g9(p.dt)},
        {"sllg.damping", format_g9(p.damping)}, {"sllg.temperature", format_g9(p.temperature)},
        {"sllg.diameter", format_g9(p.diameter)}, {"sllg.thickness", format_g9(p.thickness)},
        {"sllg.ms", format_g9(p.ms)}, {"sllg.report", report ? "true" : "false"},
    };
    write_manifest(cfg, resolved, {out});

    if (report && steps >= 2000) {
        std::vector<double> mz;
        mz.reserve(rows.size());
        for (const auto& r : rows) mz.push_back(r.m.z);
        const std::uint64_t burn = cfg.get_u64("sllg.burn_in", steps / 10);
        const auto rep = stationarity_report(std::span<const double>(mz), burn);
        std::printf("sllg: %llu steps -> %s  ks_uniform_mz=%.5f lag=%zu n_eff=%zu\n",
                    static_cast<unsigned long long>(steps), out.c_str(), rep.ks_uniform_mz,
                    rep.autocorr_lag, rep.effective_n);
    } else {
        std::printf("sllg: %llu steps -> %s\n", static_cast<unsigned long long>(steps),
                    out.c_str());
    }
}

void run_dist(const ExperimentConfig& cfg) {
    const std::string out = cfg.require_str("out");
    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const std::string source = cfg.get_str("dist.source", "2m");
    const std::uint64_t n = cfg.get_u64("dist.samples", 1000000);
    if (n < 2) throw std::invalid_argument("config: dist.samples must be >= 2");

    std::vector<double> samples;
    samples.reserve(n);
    std::string shape_note;

    if (source == "irwin_hall" || source == "lfsr") {
        if (source == "irwin_hall") {
            IrwinHallUnit unit(derive_seed32(seed, "dist-a"), derive_seed32(seed, "dist-b"));
            for (std::uint64_t i = 0; i < n; ++i)
                samples.push_back(static_cast<double>(unit.draw()));
            const double ks = ks_statistic(samples, [](double x) {
                return triangular_cdf_strict(static_cast<std::int64_t>(std::floor(x)) + 1);
            });
            shape_note = "  ks_vs_triangular=" + format_g9(ks);
        } else {
            Lfsr reg(derive_seed32(seed, "dist-lfsr"));
            for (std::uint64_t i = 0; i < n; ++i)
                samples.push_back(static_cast<double>(reg.next_word()));
            const double ks = ks_statistic(samples, [](double x) {
                // uniform over the nonzero words
                const double m = 4294967295.0;
                return std::clamp(std::floor(x) / m, 0.0, 1.0);
            });
            shape_note = "  ks_vs_uniform=" + format_g9(ks);
        }
    } else if (source == "2m" || source == "1m1r") {
        const double vdd = cfg.get_double("dist.vdd", 0.8);
        SllgParams dev = device_from(cfg, "dist", 0.1, 2.5e-10);
        SmtjState tmpl = smtj_from(cfg, "dist");
        const std::uint64_t warmup = cfg.get_u64("dist.warmup", 1000);
        Xoshiro256pp init(derive_seed(seed, "dist-init"));
        auto unit_vec = [&init]() {
            const double z = 2.0 * init.u01() - 1.0;
            const double phi = 2.0 * std::numbers::pi * init.u01();
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            return Vec3{r * std::cos(phi), r * std::sin(phi), z};
        };
        if (source == "2m") {
            SmtjState top = tmpl, bottom = tmpl;
            top.m = unit_vec();
            bottom.m = unit_vec();
            TwoMCell cell(top, bottom, dev, vdd, derive_seed(seed, "dist-cell"));
            for (std::uint64_t i = 0; i < warmup; ++i) (void)cell.sample();
            for (std::uint64_t i = 0; i < n; ++i) samples.push_back(cell.sample());
        } else {
            SmtjState dev_state = tmpl;
            dev_state.m = unit_vec();
            OneM1RCell cell(dev_state, dev, vdd, derive_seed(seed, "dist-cell"),
                            cfg.get_double("dist.r1", 0.0), cfg.get_double("dist.alpha_cell", 0.155));
            for (std::uint64_t i = 0; i < warmup; ++i) (void)cell.sample();
            for (std::uint64_t i = 0; i < n; ++i) samples.push_back(cell.sample());
            shape_note = "  ks_vs_uniform_support=" + format_g9(ks_to_uniform_support(samples));
        }
    } else {
        throw std::invalid_argument(
            "config: dist.source must be one of 2m, 1m1r, irwin_hall, lfsr");
    }

    atomic_write(out, samples_csv(samples));
    const SampleStats st = distribution_stats(samples);
    std::map<std::string, std::string> resolved = {
        {"experiment", "dist"},      {"seed", std::to_string(seed)},
        {"out", out},                {"dist.source", source},
        {"dist.samples", std::to_string(n)},
    };
    for (const char* k : {"vdd", "damping", "dt", "temperature", "polarization", "warmup",
                          "r1", "alpha_cell"}) {
        const std::string key = std::string("dist.") + k;
        const auto it = cfg.options.find(key);
        if (it != cfg.options.end()) resolved[key] = it->second;
    }
    write_manifest(cfg, resolved, {out});
    std::printf("dist %s: n=%llu mean=%s var=%s min=%s max=%s skew=%s%s -> %s\n", source.c_str(),
                static_cast<unsigned long long>(st.n), format_g9(st.mean).c_str(),
                format_g9(st.variance).c_str(), format_g9(st.min).c_str(),
                format_g9(st.max).c_str(), format_g9(st.skewness).c_str(), shape_note.c_str(),
                out.c_str());
}

void run_network(const ExperimentConfig& cfg) {
    const std::string out = cfg.require_str("out");
    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const std::string preset = cfg.get_str("network.preset", "p_and");
    if (preset != "p_and")
        throw std::invalid_argument("config: network.preset must be 'p_and'");
    const double i0 = cfg.get_double("network.i0", 2.0);
    const std::uint64_t sweeps = cfg.get_u64("network.sweeps", 1000000);
    const std::uint64_t burn_in = cfg.get_u64("network.burn_in", 1000);
    const std::string sampler_s = cfg.get_str("network.sampler", "triangular");
    const std::string noise_s = cfg.get_str("network.noise", "shared");

    NetworkSpec::Sampler sampler;
    if (sampler_s == "triangular") sampler = NetworkSpec::Sampler::triangular_comparator;
    else if (sampler_s == "logistic") sampler = NetworkSpec::Sampler::exact_logistic;
    else throw std::invalid_argument("config: network.sampler must be 'triangular' or 'logistic'");
    NetworkSpec::NoiseSource noise;
    if (noise_s == "shared") noise = NetworkSpec::NoiseSource::shared_broker;
    else if (noise_s == "independent") noise = NetworkSpec::NoiseSource::independent_units;
    else throw std::invalid_argument("config: network.noise must be 'shared' or 'independent'");

    NetworkSpec spec = p_and_spec(i0, sampler, noise);
    spec.random_scan = cfg.get_bool("network.random_scan", false);
    const std::string clamp_s = cfg.get_str("network.clamp", "");
    if (!clamp_s.empty()) {
        std::vector<int> clamp;
        for (const std::string& tok : split(clamp_s, ',')) {
            if (tok == "+1" || tok == "+" || tok == "1") clamp.push_back(1);
            else if (tok == "-1" || tok == "-") clamp.push_back(-1);
            else if (tok == "0") clamp.push_back(0);
            else throw std::invalid_argument("config: network.clamp entries must be +1, -1 or 0");
        }
        spec.clamp = std::move(clamp);
        spec.validate();
    }

    const StateHistogram hist = run_histogram(spec, sweeps, burn_in, seed);
    const std::vector<double> exact = boltzmann_exact(spec);
    const DistanceReport dist = compare_distributions(hist, exact);

    atomic_write(out, histogram_csv(hist, exact, spec.n));
    std::map<std::string, std::string> resolved = {
        {"experiment", "network"},  {"seed", std::to_string(seed)},
        {"out", out},               {"network.preset", preset},
        {"network.i0", format_g9(i0)}, {"network.sweeps", std::to_string(sweeps)},
        {"network.burn_in", std::to_string(burn_in)}, {"network.sampler", sampler_s},
        {"network.noise", noise_s},
        {"network.random_scan", spec.random_scan ? "true" : "false"},
    };
    if (!clamp_s.empty()) resolved["network.clamp"] = clamp_s;
    write_manifest(cfg, resolved, {out});
    std::printf("network p_and i0=%s %s/%s: %llu sweeps  tv=%.5f kl=%.5f -> %s\n",
                format_g9(i0).c_str(), sampler_s.c_str(), noise_s.c_str(),
                static_cast<unsigned long long>(sweeps), dist.tv, dist.kl, out.c_str());
}

void run_range(const ExperimentConfig& cfg) {
    const std::string out = cfg.require_str("out");
    const std::uint64_t seed = cfg.get_u64("seed", 1);
    const std::string vdd_list = cfg.get_str("range.vdd_list", "0.2,0.4,0.6,0.8");
    const std::uint64_t n = cfg.get_u64("range.samples", 200000);
    const std::uint64_t warmup = cfg.get_u64("range.warmup", 1000);

    SllgParams dev = device_from(cfg, "range", 0.1, 2.5e-10);
    SmtjState tmpl = smtj_from(cfg, "range");
    const double theory =
        probabilistic_range_theory(tmr_from_polarization(tmpl.polarization));

    std::vector<double> vdds;
    for (const std::string& tok : split(vdd_list, ',')) {
        if (tok.empty()) continue;
        vdds.push_back(std::stod(tok));
    }
    if (vdds.empty()) throw std::invalid_argument("config: range.vdd_list is empty");

    std::vector<double> widths;
    std::string csv = "v_dd,range_v,range_ratio,theory_ratio\n";
    for (std::size_t i = 0; i < vdds.size(); ++i) {
        Xoshiro256pp init(derive_seed(seed, "range-init", i));
        auto unit_vec = [&init]() {
            const double z = 2.0 * init.u01() - 1.0;
            const double phi = 2.0 * std::numbers::pi * init.u01();
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            return Vec3{r * std::cos(phi), r * std::sin(phi), z};
        };
        SmtjState top = tmpl, bottom = tmpl;
        top.m = unit_vec();
        bottom.m = unit_vec();
        TwoMCell cell(top, bottom, dev, vdds[i], derive_seed(seed, "range-cell", i));
        for (std::uint64_t k = 0; k < warmup; ++k) (void)cell.sample();
        const SupportRange r = measure_support([&cell]() { return cell.sample(); }, n);
        widths.push_back(r.width());
        csv += format_g9(vdds[i]);
        csv += ',';
        csv += format_g9(r.width());
        csv += ',';
        csv += format_g9(r.width() / vdds[i]);
        csv += ',';
        csv += format_g9(theory);
        csv += '\n';
    }

    const double r2 = linear_fit_r2(vdds, widths);
    atomic_write(out, csv);
    std::map<std::string, std::string> resolved = {
        {"experiment", "range"},    {"seed", std::to_string(seed)},
        {"out", out},               {"range.vdd_list", vdd_list},
        {"range.samples", std::to_string(n)}, {"range.warmup", std::to_string(warmup)},
        {"range.damping", format_g9(dev.damping)}, {"range.dt", format_g9(dev.dt)},
        {"range.temperature", format_g9(dev.temperature)},
        {"range.polarization", format_g9(tmpl.polarization)},
    };
    write_manifest(cfg, resolved, {out});
    std::printf("range: %zu supply points, linear R2=%.6f, theory ratio=%s -> %s\n", vdds.size(),
                r2, format_g9(theory).c_str(), out.c_str());
}

}  // namespace

void run(const ExperimentConfig& cfg) {
    if (cfg.experiment == "transfer") return run_transfer(cfg);
    if (cfg.experiment == "sllg") return run_sllg(cfg);
    if (cfg.experiment == "dist") return run_dist(cfg);
    if (cfg.experiment == "network") return run_network(cfg);
    if (cfg.experiment == "range") return run_range(cfg);
    throw std::invalid_argument("config: unknown experiment '" + cfg.experiment + "'");
}

void run_from_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::invalid_argument("manifest: cannot open '" + manifest_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("manifest: parse error in '" + manifest_path +
                                    "': " + e.what());
    }
    ExperimentConfig cfg;
    cfg.experiment = j.at("experiment").get<std::string>();
    for (const auto& [k, v] : j.at("config").items())
        cfg.options[k] = v.get<std::string>();
    run(cfg);
}

}  // namespace pneuro::harness
